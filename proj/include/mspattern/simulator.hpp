#ifndef MSPATTERN_SIMULATOR_HPP
#define MSPATTERN_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mspattern/grid.hpp"
#include "mspattern/model.hpp"

namespace mspattern {

struct FieldState {
    double t = 0.0;
    std::vector<double> m, c, d;
};

struct SimConfig {
    double dt = 0.0;  // <= 0 selects stable_dt
    double t_end = 2000.0;
    double steady_tol = 1e-8;
    double perturb_amp = 1e-2;
    std::uint64_t seed = 1;
};

/// P* plus i.i.d. uniform noise on m only: m_i = 1 + U[-amp, amp],
/// c_i = beta + delta, d_i = 1. Deterministic for a given seed.
inline FieldState initial_state(const Grid1D& g, const ModelParams& p,
                                double perturb_amp, std::uint64_t seed) {
    if (perturb_amp < 0.0) throw InvalidParameter("perturb_amp must be >= 0");
    FieldState s;
    s.m.resize(static_cast<std::size_t>(g.n));
    s.c.assign(static_cast<std::size_t>(g.n), p.beta + p.delta);
    s.d.assign(static_cast<std::size_t>(g.n), 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-perturb_amp, perturb_amp);
    for (auto& mi : s.m) mi = 1.0 + u(rng);
    return s;
}

/// P* plus a single admissible cosine mode on m; no randomness.
inline FieldState initial_state_cosine(const Grid1D& g, const ModelParams& p,
                                       double amp, int mode) {
    FieldState s;
    s.m.resize(static_cast<std::size_t>(g.n));
    s.c.assign(static_cast<std::size_t>(g.n), p.beta + p.delta);
    s.d.assign(static_cast<std::size_t>(g.n), 1.0);
    const double k = mode * kPi / g.length;
    for (int i = 0; i < g.n; ++i)
        s.m[static_cast<std::size_t>(i)] = 1.0 + amp * std::cos(k * g.x(i));
    return s;
}

/// Forward-Euler step bound: safety * h^2 / (2 max(1, eps/tau) (1 + chi/2)),
/// safety = 0.2.
inline double stable_dt(const ModelParams& p, const Grid1D& g) {
    const double diff = std::max(1.0, p.eps / p.tau);
    return 0.2 * g.h * g.h / (2.0 * diff * (1.0 + p.chi / 2.0));
}

namespace detail {

struct StepWorkspace {
    std::vector<double> flux, m2, c2, d2;
    void resize(int n) {
        flux.resize(static_cast<std::size_t>(n - 1));
        m2.resize(static_cast<std::size_t>(n));
        c2.resize(static_cast<std::size_t>(n));
        d2.resize(static_cast<std::size_t>(n));
    }
};

/// One explicit update. Diffusion: 3-point Laplacian. Chemotaxis: conservative
/// flux differencing with arithmetic face means. Neumann boundaries by mirror
/// ghosts, so both diffusive and chemotactic boundary fluxes vanish.
/// Returns the max-norm of the time derivative. WithGrowth=false is a test
/// hook that drops G for conservation checks.
template <bool WithGrowth, GrowthKind Kind>
double advance_kernel(FieldState& s, const ModelParams& p, const Grid1D& g,
                      double dt, StepWorkspace& ws) {
    const int n = g.n;
    const double inv_h = 1.0 / g.h;
    const double inv_h2 = inv_h * inv_h;
    const double inv_tau = 1.0 / p.tau;
    const double chi = p.chi, eps = p.eps, beta = p.beta, delta = p.delta, r = p.r;
    const double Lam = p.growth.Lambda, M = p.growth.M;
    const double* m = s.m.data();
    const double* c = s.c.data();
    const double* d = s.d.data();
    double* f = ws.flux.data();
    double* mn = ws.m2.data();
    double* cn = ws.c2.data();
    double* dn = ws.d2.data();

    for (int i = 0; i < n - 1; ++i) {
        const double mf = 0.5 * (m[i] + m[i + 1]);
        f[i] = chi * mf / (1.0 + mf) * (c[i + 1] - c[i]) * inv_h;
    }

    auto growth = [&](double mi) -> double {
        if constexpr (!WithGrowth) return 0.0;
        else if constexpr (Kind == GrowthKind::Logistic) return mi * (1.0 - mi);
        else return Lam * mi * (1.0 - mi) * (mi - M);
    };

    double res = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        const double lap_m = (m[i - 1] - 2.0 * m[i] + m[i + 1]) * inv_h2;
        const double lap_c = (c[i - 1] - 2.0 * c[i] + c[i + 1]) * inv_h2;
        const double div = (f[i] - f[i - 1]) * inv_h;
        const double rm = lap_m + growth(m[i]) - div;
        const double rc = (eps * lap_c + delta * d[i] - c[i] + beta * m[i]) * inv_tau;
        const double rd = r * m[i] * m[i] / (1.0 + m[i]) * (1.0 - d[i]);
        mn[i] = m[i] + dt * rm;
        cn[i] = c[i] + dt * rc;
        dn[i] = d[i] + dt * rd;
        res = std::max(res, std::abs(rm));
        res = std::max(res, std::abs(rc));
        res = std::max(res, std::abs(rd));
    }
    {   // left boundary: ghost values m[-1] = m[1], ghost flux f[-1] = -f[0]
        const double rm = 2.0 * (m[1] - m[0]) * inv_h2 + growth(m[0]) - 2.0 * f[0] * inv_h;
        const double rc = (eps * 2.0 * (c[1] - c[0]) * inv_h2 + delta * d[0] - c[0] + beta * m[0]) * inv_tau;
        const double rd = r * m[0] * m[0] / (1.0 + m[0]) * (1.0 - d[0]);
        mn[0] = m[0] + dt * rm;
        cn[0] = c[0] + dt * rc;
        dn[0] = d[0] + dt * rd;
        res = std::max({res, std::abs(rm), std::abs(rc), std::abs(rd)});
    }
    {   // right boundary
        const int i = n - 1;
        const double rm = 2.0 * (m[i - 1] - m[i]) * inv_h2 + growth(m[i]) + 2.0 * f[i - 1] * inv_h;
        const double rc = (eps * 2.0 * (c[i - 1] - c[i]) * inv_h2 + delta * d[i] - c[i] + beta * m[i]) * inv_tau;
        const double rd = r * m[i] * m[i] / (1.0 + m[i]) * (1.0 - d[i]);
        mn[i] = m[i] + dt * rm;
        cn[i] = c[i] + dt * rc;
        dn[i] = d[i] + dt * rd;
        res = std::max({res, std::abs(rm), std::abs(rc), std::abs(rd)});
    }

    s.m.swap(ws.m2);
    s.c.swap(ws.c2);
    s.d.swap(ws.d2);
    s.t += dt;
    return res;
}

inline double advance(FieldState& s, const ModelParams& p, const Grid1D& g,
                      double dt, StepWorkspace& ws, bool with_growth, long step_index) {
    double res;
    if (with_growth) {
        res = p.growth.kind == GrowthKind::Logistic
                  ? advance_kernel<true, GrowthKind::Logistic>(s, p, g, dt, ws)
                  : advance_kernel<true, GrowthKind::Allee>(s, p, g, dt, ws);
    } else {
        res = advance_kernel<false, GrowthKind::Logistic>(s, p, g, dt, ws);
    }
    if (!std::isfinite(res))
        throw BlowUp(step_index, "non-finite state after step " + std::to_string(step_index));
    return res;
}

}  // namespace detail

/// One forward-Euler update of the full three-field system.
inline FieldState step(const FieldState& s, const ModelParams& p, const Grid1D& g, double dt) {
    FieldState out = s;
    detail::StepWorkspace ws;
    ws.resize(g.n);
    detail::advance(out, p, g, dt, ws, true, 0);
    return out;
}

struct RunDiagnostics {
    long steps = 0;
    double residual = 0.0;
    bool reached_steady = false;
};

/// Integrates until the max-norm of the discrete time derivative drops below
/// steady_tol, or t reaches t_end. Blow-ups propagate.
inline RunDiagnostics run_to_steady(FieldState& s, const ModelParams& p,
                                    const Grid1D& g, const SimConfig& cfg) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : stable_dt(p, g);
    detail::StepWorkspace ws;
    ws.resize(g.n);
    RunDiagnostics diag;
    while (s.t < cfg.t_end - 0.5 * dt) {
        diag.residual = detail::advance(s, p, g, dt, ws, true, diag.steps);
        ++diag.steps;
        if (diag.residual < cfg.steady_tol) {
            diag.reached_steady = true;
            return diag;
        }
    }
    return diag;
}

/// Peak count with the half-peak boundary convention: interior strict maxima
/// count 1, boundary maxima (strictly above the neighbor) count 1/2.
/// Plateaus are collapsed to a single extremum before counting.
inline double count_peaks(std::span<const double> profile) {
    if (profile.size() < 3) throw InvalidParameter("count_peaks needs >= 3 samples");
    std::vector<double> w;
    w.reserve(profile.size());
    for (double v : profile)
        if (w.empty() || v != w.back()) w.push_back(v);
    if (w.size() < 2) return 0.0;
    double count = 0.0;
    if (w.front() > w[1]) count += 0.5;
    if (w.back() > w[w.size() - 2]) count += 0.5;
    for (std::size_t i = 1; i + 1 < w.size(); ++i)
        if (w[i] > w[i - 1] && w[i] > w[i + 1]) count += 1.0;
    return count;
}

struct DominantMode {
    int n = 0;
    bool degenerate = false;
};

/// Index n >= 1 maximizing the cosine-expansion coefficient of profile - mean
/// (Neumann modes cos(n pi x / L), trapezoid quadrature).
inline DominantMode dominant_mode(std::span<const double> profile, double L) {
    if (profile.size() < 8) throw InvalidParameter("dominant_mode needs >= 8 samples");
    const int n = static_cast<int>(profile.size());
    const double h = L / (n - 1);

    auto trapz = [&](auto&& f) {
        double acc = 0.5 * (f(0) + f(n - 1));
        for (int i = 1; i < n - 1; ++i) acc += f(i);
        return acc * h;
    };

    const double mean = trapz([&](int i) { return profile[static_cast<std::size_t>(i)]; }) / L;
    double fl_max = 0.0;
    for (double v : profile) fl_max = std::max(fl_max, std::abs(v - mean));
    if (fl_max == 0.0) return {0, true};

    DominantMode best;
    double best_mag = -1.0;
    for (int mode = 1; mode <= n / 2; ++mode) {
        const double k = mode * kPi / L;
        const double a = 2.0 / L * trapz([&](int i) {
            return (profile[static_cast<std::size_t>(i)] - mean) * std::cos(k * (h * i));
        });
        if (std::abs(a) > best_mag) {
            best_mag = std::abs(a);
            best.n = mode;
        }
    }
    return best;
}

/// sqrt((1/L) integral of f^2), composite trapezoid.
inline double l2_norm(std::span<const double> profile, double L) {
    const int n = static_cast<int>(profile.size());
    const double h = L / (n - 1);
    double acc = 0.5 * (profile[0] * profile[0] +
                        profile[static_cast<std::size_t>(n - 1)] * profile[static_cast<std::size_t>(n - 1)]);
    for (int i = 1; i < n - 1; ++i) {
        const double v = profile[static_cast<std::size_t>(i)];
        acc += v * v;
    }
    return std::sqrt(acc * h / L);
}

/// Trapezoid-weighted total mass of a field (conserved by the chemotaxis and
/// diffusion stencils when G = 0).
inline double total_mass(std::span<const double> profile, double h) {
    double acc = 0.5 * (profile.front() + profile.back());
    for (std::size_t i = 1; i + 1 < profile.size(); ++i) acc += profile[i];
    return acc * h;
}

}  // namespace mspattern

#endif
