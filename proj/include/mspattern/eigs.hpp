#ifndef MSPATTERN_EIGS_HPP
#define MSPATTERN_EIGS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mspattern/common.hpp"

namespace mspattern {

struct EigOptions {
    double shift = 0.0;    // eigenvalues nearest this point converge first
    int n_eigs = 32;       // how many to return
    int subspace = 96;     // Krylov dimension
    double tol = 1e-8;     // relative Ritz residual for acceptance
    double zero_tol = 1e-7;  // |Re| below this counts as neutral, not unstable
};

namespace detail {

/// Shift-invert Arnoldi for a single shift. Returns converged eigenvalues of
/// A nearest the shift, sorted by |lambda - shift|. Throws NumericalFailure
/// when (A - shift I) cannot be factorized.
inline std::vector<std::complex<double>>
arnoldi_shift_invert(const Eigen::SparseMatrix<double>& A, double shift,
                     int n_eigs, int subspace, double tol) {
    const int n = static_cast<int>(A.rows());
    const int m = std::min(subspace, n);

    Eigen::SparseMatrix<double> B = A;
    for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= shift;
    B.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success)
        throw NumericalFailure("shift-invert factorization failed");

    // deterministic start vector with full mode content
    Eigen::VectorXd v(n);
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    v.normalize();

    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    V.col(0) = v;
    int k = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = lu.solve(V.col(j));
        if (lu.info() != Eigen::Success)
            throw NumericalFailure("shift-invert solve failed");
        for (int pass = 0; pass < 2; ++pass) {  // MGS with reorthogonalization
            for (int i = 0; i <= j; ++i) {
                const double hij = V.col(i).dot(w);
                w -= hij * V.col(i);
                if (pass == 0) H(i, j) = hij;
                else H(i, j) += hij;
            }
        }
        const double beta = w.norm();
        H(j + 1, j) = beta;
        if (beta < 1e-12) {  // invariant subspace found
            k = j + 1;
            break;
        }
        V.col(j + 1) = w / beta;
    }

    const Eigen::MatrixXd Hk = H.topLeftCorner(k, k);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hk);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hessenberg eigensolve failed");
    const auto theta = es.eigenvalues();
    const auto Y = es.eigenvectors();
    const double hk = (k < m) ? 0.0 : H(k, k - 1);

    std::vector<std::complex<double>> out;
    for (int i = 0; i < k; ++i) {
        const std::complex<double> th = theta[i];
        if (std::abs(th) < 1e-14) continue;
        const double resid = hk * std::abs(Y(k - 1, i));
        if (resid > tol * std::abs(th)) continue;
        out.push_back(shift + 1.0 / th);
    }
    std::sort(out.begin(), out.end(), [shift](const auto& a, const auto& b) {
        return std::abs(a - shift) < std::abs(b - shift);
    });
    if (static_cast<int>(out.size()) > n_eigs) out.resize(static_cast<std::size_t>(n_eigs));
    return out;
}

}  // namespace detail

/// Eigenvalues of A nearest opt.shift, by shift-invert Arnoldi with a sparse
/// LU. Retries with nudged shifts when the factorization is singular (exact
/// bifurcation points).
inline std::vector<std::complex<double>>
eigenvalues_near_shift(const Eigen::SparseMatrix<double>& A, const EigOptions& opt = {}) {
    const double nudges[] = {0.0, 1.37e-2, -1.37e-2, 5.11e-2};
    for (double dn : nudges) {
        try {
            return detail::arnoldi_shift_invert(A, opt.shift + dn, opt.n_eigs,
                                                opt.subspace, opt.tol);
        } catch (const NumericalFailure&) {
            continue;
        }
    }
    throw NumericalFailure("eigenvalues_near_shift: factorization failed for all shifts");
}

/// Full dense spectrum; test oracle for small problems.
inline std::vector<std::complex<double>>
dense_eigenvalues(const Eigen::SparseMatrix<double>& A) {
    Eigen::MatrixXd M(A);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw NumericalFailure("dense eigensolve failed");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(M.rows()));
    for (int i = 0; i < M.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
}

}  // namespace mspattern

#endif
