#ifndef MSPATTERN_CONTINUATION_HPP
#define MSPATTERN_CONTINUATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mspattern/eigs.hpp"
#include "mspattern/linear_stability.hpp"
#include "mspattern/simulator.hpp"
#include "mspattern/steady.hpp"

namespace mspattern {

enum class PointTag { None, Fold, BranchPoint };

inline const char* to_string(PointTag t) {
    switch (t) {
        case PointTag::Fold: return "fold";
        case PointTag::BranchPoint: return "branch_point";
        default: return "none";
    }
}

struct BranchPoint {
    double chi;
    Eigen::VectorXd U;
    double m_norm;      // ||m||_L2 = sqrt((1/L) int m^2), composite trapezoid
    int n_unstable;
    PointTag tag = PointTag::None;
};

struct Branch {
    std::string label;
    std::vector<BranchPoint> points;
    std::vector<std::pair<double, PointTag>> bifurcations;
    bool truncated = false;
    std::string note;
};

struct ContinuationSettings {
    double ds = 1e-2;
    double ds_min = 1e-6;
    double ds_max = 0.25;
    double chi_min = 0.0;
    double chi_max = 10.0;
    int max_points = 2000;
    double newton_tol = 1e-10;
    int corrector_max_iter = 12;
    double s0 = 1e-2;  // branch-switch predictor amplitude
    EigOptions eig{};
};

/// Eigenvalue of the mirror-ghost discrete Laplacian for cosine mode n:
/// k_n^2 = 2(1 - cos(n pi/(N-1)))/h^2.
inline double discrete_mode_k2(const Grid1D& g, int mode) {
    return 2.0 * (1.0 - std::cos(mode * kPi / (g.n - 1))) / (g.h * g.h);
}

namespace detail {

inline double sdot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b) / static_cast<double>(a.size());
}

/// Determinant of the mode block of the homogeneous steady Jacobian
/// (residual scaling): det = (k^2 + a)(eps k^2 + 1) - beta chi k^2 / 2.
inline double homogeneous_block_det(double k2, double chi, const ModelParams& p) {
    const double a = p.growth.decay_rate();
    return (k2 + a) * (p.eps * k2 + 1.0) - p.beta * chi * k2 / 2.0;
}

/// Newton for the bordered system
///   R(U, chi) = 0
///   <U - U_ref, wU>_s + (chi - chi_ref) wchi - target = 0.
struct BorderedResult {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

inline BorderedResult bordered_newton(Eigen::VectorXd& U, double& chi,
                                      const Eigen::VectorXd& U_ref, double chi_ref,
                                      const Eigen::VectorXd& wU, double wchi,
                                      double target, const SteadyProblem& pb,
                                      double tol, int max_iter) {
    const int n2 = pb.size();
    BorderedResult out;
    Eigen::VectorXd R, rhs(n2 + 1), dx;
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::SparseMatrix<double> Jb(n2 + 1, n2 + 1);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    const double wsc = 1.0 / static_cast<double>(n2);

    for (int it = 0; it <= max_iter; ++it) {
        steady_residual(U, chi, pb, R);
        const double con = sdot(U - U_ref, wU) + (chi - chi_ref) * wchi - target;
        out.residual = std::max(R.lpNorm<Eigen::Infinity>(), std::abs(con));
        out.iterations = it;
        if (out.residual < tol) {
            out.converged = true;
            return out;
        }
        if (it == max_iter) return out;

        steady_jacobian_triplets(U, chi, pb, trips);
        const Eigen::VectorXd Fchi = steady_chi_derivative(U, pb);
        for (int i = 0; i < n2; ++i)
            if (Fchi[i] != 0.0) trips.emplace_back(i, n2, Fchi[i]);
        for (int i = 0; i < n2; ++i)
            if (wU[i] != 0.0) trips.emplace_back(n2, i, wU[i] * wsc);
        trips.emplace_back(n2, n2, wchi);
        Jb.setFromTriplets(trips.begin(), trips.end());
        lu.compute(Jb);
        if (lu.info() != Eigen::Success) return out;

        rhs.head(n2) = -R;
        rhs[n2] = -con;
        dx = lu.solve(rhs);
        if (!dx.allFinite()) return out;
        U += dx.head(n2);
        chi += dx[n2];
    }
    return out;
}

/// Curve tangent at (U, chi): solve [J Fchi; told] t = e_last, normalized in
/// the scaled metric, oriented along the previous tangent.
inline bool curve_tangent(const Eigen::VectorXd& U, double chi, const SteadyProblem& pb,
                          Eigen::VectorXd& tU, double& tchi) {
    const int n2 = pb.size();
    std::vector<Eigen::Triplet<double>> trips;
    steady_jacobian_triplets(U, chi, pb, trips);
    const Eigen::VectorXd Fchi = steady_chi_derivative(U, pb);
    const double wsc = 1.0 / static_cast<double>(n2);
    for (int i = 0; i < n2; ++i)
        if (Fchi[i] != 0.0) trips.emplace_back(i, n2, Fchi[i]);
    for (int i = 0; i < n2; ++i)
        if (tU[i] != 0.0) trips.emplace_back(n2, i, tU[i] * wsc);
    trips.emplace_back(n2, n2, tchi);
    Eigen::SparseMatrix<double> Jb(n2 + 1, n2 + 1);
    Jb.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Jb);
    if (lu.info() != Eigen::Success) return false;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n2 + 1);
    rhs[n2] = 1.0;
    const Eigen::VectorXd t = lu.solve(rhs);
    if (!t.allFinite()) return false;
    const double nrm = std::sqrt(sdot(t.head(n2), t.head(n2)) + t[n2] * t[n2]);
    if (!(nrm > 0.0)) return false;
    tU = t.head(n2) / nrm;
    tchi = t[n2] / nrm;
    return true;
}

}  // namespace detail

struct StabilityReport {
    int n_unstable = 0;       // reduced (m, c) system
    int n_unstable_full = 0;  // including the pointwise d-direction modes
    std::vector<std::complex<double>> leading;  // largest real parts found
    std::vector<double> d_eigenvalues;          // -r F(m_i) m_i per node
};

/// Linear stability of a steady state: eigenvalues of S*A, where A is the
/// steady Jacobian and S = diag(1 on m-rows, 1/tau on c-rows) restores the
/// time-evolution scaling. The d-direction decouples with per-node
/// eigenvalues -r F(m_i) m_i, negative for positive patterns.
inline StabilityReport stability_of(const Eigen::VectorXd& U, double chi,
                                    const SteadyProblem& pb, const EigOptions& opt = {}) {
    const int n = pb.grid.n;
    Eigen::SparseMatrix<double> A = steady_jacobian(U, chi, pb);
    if (pb.params.tau != 1.0) {
        const double inv_tau = 1.0 / pb.params.tau;
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
                if (it.row() >= n) it.valueRef() *= inv_tau;
    }
    auto eigs = eigenvalues_near_shift(A, opt);

    StabilityReport rep;
    for (const auto& ev : eigs)
        if (ev.real() > opt.zero_tol) ++rep.n_unstable;
    std::sort(eigs.begin(), eigs.end(),
              [](const auto& a, const auto& b) { return a.real() > b.real(); });
    const std::size_t keep = std::min<std::size_t>(10, eigs.size());
    rep.leading.assign(eigs.begin(), eigs.begin() + static_cast<long>(keep));

    rep.d_eigenvalues.resize(static_cast<std::size_t>(n));
    rep.n_unstable_full = rep.n_unstable;
    for (int i = 0; i < n; ++i) {
        const double ev = -pb.params.r * damage_rate(U[i]);
        rep.d_eigenvalues[static_cast<std::size_t>(i)] = ev;
        if (ev > opt.zero_tol) ++rep.n_unstable_full;
    }
    return rep;
}

/// Bifurcation points on the homogeneous branch: for each cosine mode with a
/// crossing at chi <= chi_max, the chi at which the mode block of the
/// Jacobian becomes singular (bisection on the block determinant, using the
/// discrete Laplacian eigenvalue). Sorted by chi.
inline std::vector<std::pair<int, double>>
homogeneous_bifurcation_points(const SteadyProblem& pb, double chi_max) {
    if (!(chi_max > 0.0)) throw InvalidParameter("chi_max must be positive");
    if (!(pb.params.beta > 0.0)) throw DegenerateCoupling("beta = 0: no Turing mechanism");
    std::vector<std::pair<int, double>> out;
    for (int mode = 1; mode <= pb.grid.n - 2; ++mode) {
        const double k2 = discrete_mode_k2(pb.grid, mode);
        // det is decreasing linear in chi; bracket then bisect
        double lo = 0.0, hi = chi_max;
        if (detail::homogeneous_block_det(k2, hi, pb.params) > 0.0) continue;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (detail::homogeneous_block_det(k2, mid, pb.params) > 0.0) lo = mid;
            else hi = mid;
            if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
        }
        out.emplace_back(mode, 0.5 * (lo + hi));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

struct SwitchedBranchStart {
    BranchPoint point;
    Eigen::VectorXd tangent_U;
    double tangent_chi;
};

/// First point on the branch bifurcating from the homogeneous state at
/// (mode, chi_n). Predictor: homogeneous + s0 * (rho_m, rho_c) cos(k_n x)
/// with rho the null vector of the discrete mode block; corrector fixes the
/// projection onto the predictor direction and frees chi. Halves s0 on
/// Newton failure, up to 6 times.
inline SwitchedBranchStart branch_switch(int mode, double chi_n, const SteadyProblem& pb,
                                         double s0 = 1e-2, double newton_tol = 1e-10) {
    const int n = pb.grid.n;
    const double k2 = discrete_mode_k2(pb.grid, mode);
    const double a = pb.params.growth.decay_rate();
    const double rho_c = 2.0 * (k2 + a) / (chi_n * k2);

    Eigen::VectorXd dir(2 * n);
    for (int i = 0; i < n; ++i) {
        const double cosv = std::cos(mode * kPi * i / (n - 1));
        dir[i] = cosv;
        dir[n + i] = rho_c * cosv;
    }
    const double dn = std::sqrt(detail::sdot(dir, dir));
    dir /= dn;

    const Eigen::VectorXd U_h = homogeneous_state(pb);
    double s = s0;
    for (int attempt = 0; attempt < 7; ++attempt, s *= 0.5) {
        Eigen::VectorXd U = U_h + s * dir;
        double chi = chi_n;
        auto res = detail::bordered_newton(U, chi, U_h, chi_n, dir, 0.0, s, pb,
                                           newton_tol, 20);
        if (!res.converged) continue;
        SwitchedBranchStart out;
        out.point = BranchPoint{chi, U, l2_norm({U.data(), static_cast<std::size_t>(n)},
                                                pb.grid.length),
                                -1, PointTag::None};
        out.tangent_U = U - U_h;
        out.tangent_chi = chi - chi_n;
        const double tn = std::sqrt(detail::sdot(out.tangent_U, out.tangent_U) +
                                    out.tangent_chi * out.tangent_chi);
        out.tangent_U /= tn;
        out.tangent_chi /= tn;
        return out;
    }
    throw NumericalFailure("branch_switch: corrector failed for mode " +
                           std::to_string(mode) + " after 6 halvings");
}

/// Pseudo-arclength predictor-corrector with adaptive step. Stops at the chi
/// range boundary, on step underflow (truncated), or at the point budget.
/// Stability is recorded at every accepted point; folds are tagged from
/// tangent chi-component sign changes, other stability changes as branch
/// points.
inline Branch continue_branch(const BranchPoint& start, const SteadyProblem& pb,
                              const ContinuationSettings& cs,
                              std::optional<std::pair<Eigen::VectorXd, double>>
                                  initial_tangent = std::nullopt) {
    const int n = pb.grid.n;
    Branch br;

    BranchPoint bp = start;
    if (bp.n_unstable < 0)
        bp.n_unstable = stability_of(bp.U, bp.chi, pb, cs.eig).n_unstable;
    br.points.push_back(bp);

    Eigen::VectorXd tU;
    double tchi;
    if (initial_tangent) {
        tU = initial_tangent->first;
        tchi = initial_tangent->second;
    } else {
        tU = Eigen::VectorXd::Zero(2 * n);
        tchi = 1.0;
    }
    {
        const double tn = std::sqrt(detail::sdot(tU, tU) + tchi * tchi);
        tU /= tn;
        tchi /= tn;
    }

    double ds = cs.ds;
    double sig_tchi = std::abs(tchi) > 1e-6 ? tchi : 0.0;

    while (static_cast<int>(br.points.size()) < cs.max_points) {
        const BranchPoint& prev = br.points.back();
        bool accepted = false;
        Eigen::VectorXd U;
        double chi = prev.chi;
        int iters = 0;
        while (ds >= cs.ds_min) {
            U = prev.U + ds * tU;
            chi = prev.chi + ds * tchi;
            auto res = detail::bordered_newton(U, chi, prev.U, prev.chi, tU, tchi, ds,
                                               pb, cs.newton_tol, cs.corrector_max_iter);
            if (res.converged) {
                accepted = true;
                iters = res.iterations;
                break;
            }
            ds *= 0.5;
        }
        if (!accepted) {
            br.truncated = true;
            br.note = "step underflow at chi = " + format_double(prev.chi);
            break;
        }

        Eigen::VectorXd tU_new = tU;
        double tchi_new = tchi;
        if (!detail::curve_tangent(U, chi, pb, tU_new, tchi_new)) {
            br.truncated = true;
            br.note = "tangent solve failed at chi = " + format_double(chi);
            break;
        }

        BranchPoint pt;
        pt.chi = chi;
        pt.U = U;
        pt.m_norm = l2_norm({U.data(), static_cast<std::size_t>(n)}, pb.grid.length);
        pt.n_unstable = stability_of(U, chi, pb, cs.eig).n_unstable;
        pt.tag = PointTag::None;

        const double new_sig = std::abs(tchi_new) > 1e-6 ? tchi_new : 0.0;
        if (sig_tchi != 0.0 && new_sig != 0.0 && sig_tchi * new_sig < 0.0) {
            pt.tag = PointTag::Fold;
        } else if (pt.n_unstable != prev.n_unstable) {
            pt.tag = PointTag::BranchPoint;
        }
        if (pt.tag != PointTag::None) br.bifurcations.emplace_back(pt.chi, pt.tag);
        if (new_sig != 0.0) sig_tchi = new_sig;

        br.points.push_back(std::move(pt));
        tU = tU_new;
        tchi = tchi_new;
        if (iters <= 3) ds = std::min(ds * 1.3, cs.ds_max);

        if (chi < cs.chi_min || chi > cs.chi_max) break;
    }
    if (static_cast<int>(br.points.size()) >= cs.max_points)
        br.note = "point budget reached";
    return br;
}

/// Homogeneous branch plus one switched branch per requested mode. Branch
/// failures are recorded in the returned diagram without aborting it.
inline std::vector<Branch>
bifurcation_diagram(const ModelParams& params, int grid_n,
                    const ContinuationSettings& cs, const std::vector<int>& modes) {
    if (modes.empty()) throw InvalidParameter("bifurcation_diagram needs a mode set");
    SteadyProblem pb{Grid1D::uniform(grid_n, params.domain_length), params};
    std::vector<Branch> out;

    {
        BranchPoint h0{cs.chi_min, homogeneous_state(pb), 1.0, -1, PointTag::None};
        Branch hb = continue_branch(h0, pb, cs);
        hb.label = "homogeneous";
        out.push_back(std::move(hb));
    }

    const auto bifs = homogeneous_bifurcation_points(pb, cs.chi_max);
    for (int mode : modes) {
        Branch br;
        br.label = "mode-" + std::to_string(mode);
        try {
            const auto it = std::find_if(bifs.begin(), bifs.end(),
                                         [mode](const auto& b) { return b.first == mode; });
            if (it == bifs.end())
                throw NumericalFailure("no bifurcation point below chi_max for mode " +
                                       std::to_string(mode));
            auto sw = branch_switch(mode, it->second, pb, cs.s0, cs.newton_tol);
            br = continue_branch(sw.point, pb, cs,
                                 std::make_pair(sw.tangent_U, sw.tangent_chi));
            br.label = "mode-" + std::to_string(mode);
        } catch (const std::exception& e) {
            br.truncated = true;
            br.note = e.what();
        }
        out.push_back(std::move(br));
    }
    return out;
}

}  // namespace mspattern

#endif
