#ifndef MSPATTERN_LINEAR_STABILITY_HPP
#define MSPATTERN_LINEAR_STABILITY_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mspattern/model.hpp"

namespace mspattern {

/// Reduced 2x2 linearization at P* (rows m, c), the d-direction handled
/// analytically (eigenvalue -r/2):
///   J = [[-a, 0], [beta/tau, -1/tau]],  D(chi) = [[1, -chi/2], [0, eps/tau]]
struct ReducedLinearization {
    Eigen::Matrix2d J;
    Eigen::Matrix2d D;
};

inline ReducedLinearization reduced_matrices(const ModelParams& p) {
    const double a = p.growth.decay_rate();
    ReducedLinearization out;
    out.J << -a, 0.0, p.beta / p.tau, -1.0 / p.tau;
    out.D << 1.0, -p.chi / 2.0, 0.0, p.eps / p.tau;
    return out;
}

/// Coefficients of the dispersion relation lambda^2 + g lambda + h = 0 for
/// mode k^2:  g = k^2 tr(D) - tr(J),  h = det(D) k^4 + q k^2 + det(J),
/// q = (2(1+xi^2) - chi*beta) / (2 tau).
inline std::pair<double, double> dispersion_coefficients(double k2, const ModelParams& p) {
    const double a = p.growth.decay_rate();
    const double xi2 = a * p.eps;
    const double g = k2 * (1.0 + p.eps / p.tau) + a + 1.0 / p.tau;
    const double q = (2.0 * (1.0 + xi2) - p.chi * p.beta) / (2.0 * p.tau);
    const double h = (p.eps / p.tau) * k2 * k2 + q * k2 + a / p.tau;
    return {g, h};
}

/// The two roots of lambda^2 + g lambda + h = 0, ordered by descending real
/// part. Complex pairs are returned explicitly.
inline std::pair<std::complex<double>, std::complex<double>>
mode_growth_rates(double k2, const ModelParams& p) {
    const auto [g, h] = dispersion_coefficients(k2, p);
    const double disc = g * g - 4.0 * h;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        // evaluate the larger-magnitude root first to avoid cancellation
        const double r1 = (-g - (g >= 0.0 ? s : -s)) / 2.0;
        const double r2 = (h == 0.0) ? 0.0 : h / r1;
        const double lo = std::min(r1, r2), hi = std::max(r1, r2);
        return {std::complex<double>(hi, 0.0), std::complex<double>(lo, 0.0)};
    }
    const double re = -g / 2.0, im = std::sqrt(-disc) / 2.0;
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

struct TuringThresholds {
    double chi_bar;  // necessary threshold 2(1+xi^2)/beta
    double chi_c;    // critical value 2(1+xi)^2/beta
    double kc2;      // critical squared wavenumber xi/eps
    double kc;
};

inline TuringThresholds thresholds(const ModelParams& p) {
    if (!(p.beta > 0.0)) throw DegenerateCoupling("beta = 0: no Turing mechanism");
    const double xi = p.xi();
    const double kc2 = xi / p.eps;
    return {2.0 * (1.0 + xi * xi) / p.beta, 2.0 * (1.0 + xi) * (1.0 + xi) / p.beta,
            kc2, std::sqrt(kc2)};
}

/// Chemotaxis level at which mode k^2 destabilises, from h(k^2, chi) = 0:
///   chi(k^2) = [2 eps k^4 + 2(1 + a*eps) k^2 + 2a] / (beta k^2).
/// Strictly convex in k^2 with minimum chi_c attained at kc^2.
inline double chi_at_mode(double k2, const ModelParams& p) {
    if (!(k2 > 0.0)) throw InvalidParameter("chi_at_mode requires k^2 > 0");
    if (!(p.beta > 0.0)) throw DegenerateCoupling("beta = 0: no Turing mechanism");
    const double a = p.growth.decay_rate();
    return (2.0 * p.eps * k2 * k2 + 2.0 * (1.0 + a * p.eps) * k2 + 2.0 * a) / (p.beta * k2);
}

/// Cosine modes admitted by no-flux boundaries on [0, L]: k_n = n*pi/L.
struct NeumannMode {
    int n;
    double k;
    double k2;
};

inline std::vector<NeumannMode> admissible_modes(double L, int n_max) {
    if (!(L > 0.0)) throw InvalidParameter("domain length must be positive");
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    std::vector<NeumannMode> modes;
    modes.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double k = n * kPi / L;
        modes.push_back({n, k, k * k});
    }
    return modes;
}

/// Interval of k^2 with h < 0 (roots of the quadratic h in k^2); degenerate
/// {kc^2} at chi = chi_c, empty below.
inline std::optional<std::pair<double, double>>
unstable_band(double chi, const ModelParams& p) {
    ModelParams q = p;
    q.chi = chi;
    const double a = q.growth.decay_rate();
    const double detD = q.eps / q.tau;
    const double qq = (2.0 * (1.0 + a * q.eps) - chi * q.beta) / (2.0 * q.tau);
    const double detJ = a / q.tau;
    const double disc = qq * qq - 4.0 * detD * detJ;
    if (disc < 0.0 || qq >= 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    const double lo = (-qq - s) / (2.0 * detD);
    const double hi = (-qq + s) / (2.0 * detD);
    return std::make_pair(std::min(lo, hi), std::max(lo, hi));
}

struct DispersionPoint {
    double k2;
    double g;
    double h;
    std::complex<double> lambda1;  // larger real part
    std::complex<double> lambda2;
    double lambda_max;  // Re(lambda1)
};

/// Sampled dispersion curve; default 400 points over [0, 4 kc^2].
inline std::vector<DispersionPoint>
dispersion_curve(const ModelParams& p, int samples = 400) {
    const double k2_max = 4.0 * thresholds(p).kc2;
    std::vector<DispersionPoint> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double k2 = k2_max * i / (samples - 1.0);
        const auto [g, h] = dispersion_coefficients(k2, p);
        const auto [l1, l2] = mode_growth_rates(k2, p);
        out.push_back({k2, g, h, l1, l2, l1.real()});
    }
    return out;
}

}  // namespace mspattern

#endif
