#ifndef MSPATTERN_STEADY_HPP
#define MSPATTERN_STEADY_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mspattern/grid.hpp"
#include "mspattern/model.hpp"

namespace mspattern {

/// Steady problem for the reduced two-field system (d = 1):
///   0 = m_xx + G_j(m) - (Phi(m) c_x)_x
///   0 = eps c_xx + delta - c + beta m
/// The 1/tau factor is omitted from the c-row (same zero set); stability_of
/// restores the time scaling. Unknowns U = [m_0..m_{N-1}, c_0..c_{N-1}],
/// stencils identical to the simulator (mirror-ghost Neumann).
struct SteadyProblem {
    Grid1D grid;
    ModelParams params;  // chi inside is ignored; chi is the free parameter

    int size() const { return 2 * grid.n; }
};

inline Eigen::VectorXd homogeneous_state(const SteadyProblem& pb) {
    Eigen::VectorXd U(pb.size());
    const int n = pb.grid.n;
    U.head(n).setConstant(1.0);
    U.tail(n).setConstant(pb.params.beta + pb.params.delta);
    return U;
}

inline void steady_residual(const Eigen::VectorXd& U, double chi,
                            const SteadyProblem& pb, Eigen::VectorXd& R) {
    const int n = pb.grid.n;
    const double inv_h = 1.0 / pb.grid.h;
    const double inv_h2 = inv_h * inv_h;
    const ModelParams& p = pb.params;
    const double* m = U.data();
    const double* c = U.data() + n;
    R.resize(2 * n);

    std::vector<double> f(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) {
        const double mf = 0.5 * (m[i] + m[i + 1]);
        f[static_cast<std::size_t>(i)] = chi * mf / (1.0 + mf) * (c[i + 1] - c[i]) * inv_h;
    }
    for (int i = 0; i < n; ++i) {
        const int il = i == 0 ? 1 : i - 1;
        const int ir = i == n - 1 ? n - 2 : i + 1;
        const double lap_m = (m[il] - 2.0 * m[i] + m[ir]) * inv_h2;
        const double lap_c = (c[il] - 2.0 * c[i] + c[ir]) * inv_h2;
        double div;
        if (i == 0) div = 2.0 * f[0] * inv_h;
        else if (i == n - 1) div = -2.0 * f[static_cast<std::size_t>(n - 2)] * inv_h;
        else div = (f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i - 1)]) * inv_h;
        R[i] = lap_m + p.growth.rate(m[i]) - div;
        R[n + i] = p.eps * lap_c + p.delta - c[i] + p.beta * m[i];
    }
}

inline Eigen::VectorXd steady_residual(const Eigen::VectorXd& U, double chi,
                                       const SteadyProblem& pb) {
    Eigen::VectorXd R;
    steady_residual(U, chi, pb, R);
    return R;
}

namespace detail {

/// Analytic Jacobian entries of the discrete steady residual.
inline void steady_jacobian_triplets(const Eigen::VectorXd& U, double chi,
                                     const SteadyProblem& pb,
                                     std::vector<Eigen::Triplet<double>>& trips) {
    const int n = pb.grid.n;
    const double inv_h = 1.0 / pb.grid.h;
    const double inv_h2 = inv_h * inv_h;
    const ModelParams& p = pb.params;
    const double* m = U.data();
    const double* c = U.data() + n;
    trips.clear();
    trips.reserve(static_cast<std::size_t>(12 * n));

    // Laplacians with mirror ghosts, growth derivative, c-row reaction terms
    for (int i = 0; i < n; ++i) {
        const int il = i == 0 ? 1 : i - 1;
        const int ir = i == n - 1 ? n - 2 : i + 1;
        trips.emplace_back(i, i, -2.0 * inv_h2 + p.growth.derivative(m[i]));
        trips.emplace_back(i, il, inv_h2);
        trips.emplace_back(i, ir, inv_h2);
        trips.emplace_back(n + i, n + i, -2.0 * p.eps * inv_h2 - 1.0);
        trips.emplace_back(n + i, n + il, p.eps * inv_h2);
        trips.emplace_back(n + i, n + ir, p.eps * inv_h2);
        trips.emplace_back(n + i, i, p.beta);
    }

    // chemotaxis flux: face j couples rows j and j+1 to (m_j, m_j+1, c_j, c_j+1);
    // row j sees +w_plus(j)*f_j, row j+1 sees -w_minus(j+1)*f_j, and R_m -= div
    for (int j = 0; j < n - 1; ++j) {
        const double mf = 0.5 * (m[j] + m[j + 1]);
        const double dcdx = (c[j + 1] - c[j]) * inv_h;
        const double phi = chi * mf / (1.0 + mf);
        const double dphi_dm = chi / ((1.0 + mf) * (1.0 + mf)) * 0.5;
        const double df_dmj = dphi_dm * dcdx;      // = df/dm_{j+1}
        const double df_dcj1 = phi * inv_h;        // df/dc_{j+1} = -df/dc_j
        const double wp = (j == 0 ? 2.0 : 1.0) * inv_h;
        const double wm = (j + 1 == n - 1 ? 2.0 : 1.0) * inv_h;

        trips.emplace_back(j, j, -wp * df_dmj);
        trips.emplace_back(j, j + 1, -wp * df_dmj);
        trips.emplace_back(j, n + j, wp * df_dcj1);
        trips.emplace_back(j, n + j + 1, -wp * df_dcj1);

        trips.emplace_back(j + 1, j, wm * df_dmj);
        trips.emplace_back(j + 1, j + 1, wm * df_dmj);
        trips.emplace_back(j + 1, n + j, -wm * df_dcj1);
        trips.emplace_back(j + 1, n + j + 1, wm * df_dcj1);
    }
}

}  // namespace detail

inline Eigen::SparseMatrix<double>
steady_jacobian(const Eigen::VectorXd& U, double chi, const SteadyProblem& pb) {
    std::vector<Eigen::Triplet<double>> trips;
    detail::steady_jacobian_triplets(U, chi, pb, trips);
    Eigen::SparseMatrix<double> J(pb.size(), pb.size());
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

/// dR/dchi: the chemotaxis term is linear in chi, so this is the flux
/// divergence evaluated at unit chi, negated, on the m-rows.
inline Eigen::VectorXd steady_chi_derivative(const Eigen::VectorXd& U,
                                             const SteadyProblem& pb) {
    const int n = pb.grid.n;
    const double inv_h = 1.0 / pb.grid.h;
    const double* m = U.data();
    const double* c = U.data() + n;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
    std::vector<double> f(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) {
        const double mf = 0.5 * (m[i] + m[i + 1]);
        f[static_cast<std::size_t>(i)] = mf / (1.0 + mf) * (c[i + 1] - c[i]) * inv_h;
    }
    for (int i = 0; i < n; ++i) {
        double div;
        if (i == 0) div = 2.0 * f[0] * inv_h;
        else if (i == n - 1) div = -2.0 * f[static_cast<std::size_t>(n - 2)] * inv_h;
        else div = (f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i - 1)]) * inv_h;
        out[i] = -div;
    }
    return out;
}

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 20;
};

struct NewtonResult {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::string message;
};

/// Damped-free Newton with a sparse direct solve; success when the residual
/// max-norm drops below tol.
inline NewtonResult newton_correct(Eigen::VectorXd& U, double chi,
                                   const SteadyProblem& pb,
                                   const NewtonOptions& opt = {}) {
    NewtonResult res;
    Eigen::VectorXd R;
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::SparseMatrix<double> J(pb.size(), pb.size());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    for (int it = 0; it <= opt.max_iter; ++it) {
        steady_residual(U, chi, pb, R);
        res.residual = R.lpNorm<Eigen::Infinity>();
        res.iterations = it;
        if (res.residual < opt.tol) {
            res.converged = true;
            return res;
        }
        if (it == opt.max_iter) break;
        detail::steady_jacobian_triplets(U, chi, pb, trips);
        J.setFromTriplets(trips.begin(), trips.end());
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            res.message = "singular Jacobian: sparse LU factorization failed";
            return res;
        }
        U -= lu.solve(R);
        if (!U.allFinite()) {
            res.message = "Newton update produced non-finite values";
            return res;
        }
    }
    res.message = "Newton did not converge within max_iter (residual " +
                  format_double(res.residual) + ")";
    return res;
}

}  // namespace mspattern

#endif
