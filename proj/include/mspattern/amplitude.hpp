#ifndef MSPATTERN_AMPLITUDE_HPP
#define MSPATTERN_AMPLITUDE_HPP

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "mspattern/linear_stability.hpp"
#include "mspattern/model.hpp"

namespace mspattern {

/// First-order null vector of L_chi_c on the critical cosine mode,
/// normalized rho_m = 1: rho = (1, beta/(1+xi)).
inline std::pair<double, double> first_order_null_vector(const ModelParams& p) {
    if (!(p.beta > 0.0)) throw DegenerateCoupling("beta = 0: no Turing mechanism");
    return {1.0, p.beta / (1.0 + p.xi())};
}

/// Adjoint null vector, normalized psi_1 = 1: psi = (1, tau xi (1+xi)/(beta eps)).
inline std::pair<double, double> adjoint_null_vector(const ModelParams& p) {
    if (!(p.beta > 0.0)) throw DegenerateCoupling("beta = 0: no Turing mechanism");
    const double xi = p.xi();
    return {1.0, p.tau * xi * (1.0 + xi) / (p.beta * p.eps)};
}

/// Second-order response coefficients (mu_m, theta_m, mu_c, theta_c) of
/// w2 = A^2 [mu + theta cos(2 kc x)], for rho_m = 1:
///   mu_m    = -(1/2)(1+omega)
///   theta_m = -(1/18)(omega - 1/xi)(1+4xi)
///   mu_c    = beta * mu_m
///   theta_c = beta * theta_m / (1+4xi)
inline std::array<double, 4> second_order_response(const ModelParams& p) {
    const double xi = p.xi();
    const double om = p.growth.omega();
    const double mu_m = -0.5 * (1.0 + om);
    const double th_m = -(om - 1.0 / xi) * (1.0 + 4.0 * xi) / 18.0;
    return {mu_m, th_m, p.beta * mu_m, -p.beta * (om - 1.0 / xi) / 18.0};
}

/// Sign polynomial of the Landau coefficient:
/// p(xi,omega) = 4 omega (8 omega + 9) xi^3 + (152 omega^2 + 122 omega + 63) xi^2
///             - (46 omega + 55) xi + 2.
inline double p_polynomial(double xi, double omega) {
    if (!(xi > 0.0)) throw InvalidParameter("p_polynomial requires xi > 0");
    const double c3 = 4.0 * omega * (8.0 * omega + 9.0);
    const double c2 = 152.0 * omega * omega + 122.0 * omega + 63.0;
    const double c1 = -(46.0 * omega + 55.0);
    return ((c3 * xi + c2) * xi + c1) * xi + 2.0;
}

enum class Criticality { Supercritical, Subcritical, Degenerate };

inline const char* to_string(Criticality c) {
    switch (c) {
        case Criticality::Supercritical: return "supercritical";
        case Criticality::Subcritical: return "subcritical";
        default: return "degenerate";
    }
}

/// |p| below this means the cubic truncation cannot classify the bifurcation.
inline constexpr double kDegeneracyTol = 1e-8;

struct StuartLandauData {
    double rho_m, rho_c;
    double psi1, psi2;
    double mu_m, theta_m, mu_c, theta_c;
    double chi2;    // expansion coefficient of chi; fixed to chi_c
    double sigma;   // linear amplitude growth rate
    double landau;  // cubic coefficient L
    double p_value;
    Criticality criticality;
    std::optional<double> eta;  // sqrt((chi-chi_c)/chi_c) when a target was given
};

/// Test-only normalization knobs; results must be invariant where the spec
/// says so (sigma under psi scaling; eta*rho_m*A_inf and sign(L) under rho).
struct WnlNormalization {
    double rho_scale = 1.0;
    double psi_scale = 1.0;
};

namespace detail {

/// Assembles the third-order right-hand-side blocks G0, G1, G2 on the
/// critical mode and projects them against the adjoint null vector.
/// Returns sigma and L from the Fredholm route. The G2 sum cancels strongly
/// near the criticality boundary, so it is accumulated in long double.
inline std::pair<double, double>
fredholm_sigma_landau(const ModelParams& p, double chi2, const WnlNormalization& nrm) {
    using real = long double;
    const real xi = p.xi();
    const real om = p.growth.omega();
    const real eps = p.eps;
    const real beta = p.beta;
    const real chi_c = 2.0L * (1.0L + xi) * (1.0L + xi) / beta;
    const real kc2 = xi / eps;

    const real rho_m = nrm.rho_scale;
    const real rho_c = rho_m * beta / (1.0L + xi);
    const real psi1 = nrm.psi_scale;
    const real psi2 = psi1 * static_cast<real>(p.tau) * xi * (1.0L + xi) / (beta * eps);

    const real rm2 = rho_m * rho_m;
    const real mu_m = -0.5L * rm2 * (1.0L + om);
    const real th_m = -rm2 * (om - 1.0L / xi) * (1.0L + 4.0L * xi) / 18.0L;
    const real th_c = -beta * rm2 * (om - 1.0L / xi) / 18.0L;

    const real G0_m = rho_m;
    const real G0_c = rho_m * beta / (1.0L + xi);
    const real G1_m = -rho_m * 0.5L * static_cast<real>(chi2) * (beta / eps) * (xi / (1.0L + xi));
    const real G2_m = 2.0L * (xi * xi / eps) * (1.0L + om) * rho_m * (mu_m + 0.5L * th_m)
                    + 0.75L / eps * om * xi * xi * rho_m * rm2
                    - 0.25L * chi_c * kc2 * (rho_m * th_c + rho_c * (mu_m - 0.5L * th_m)
                                             - 0.125L * rm2 * rho_c);

    const real denom = G0_m * psi1 + G0_c * psi2;
    return {static_cast<double>(-(G1_m * psi1) / denom),
            static_cast<double>((G2_m * psi1) / denom)};
}

}  // namespace detail

/// Stuart-Landau coefficients dA/dT2 = sigma A - L A^3 at chi_c.
///
/// sigma and L are computed by Fredholm projection of the third-order
/// right-hand side and cross-checked against the closed forms
///   sigma = beta chi2 xi / (2 (1+xi)(eps + tau xi))
///   L     = -rho_m^2 p(xi, omega) / (144 (eps + tau xi));
/// the two routes agree to rounding. chi2 is fixed to chi_c so that
/// eta^2 chi2 = chi - chi_c exactly.
inline StuartLandauData stuart_landau(const ModelParams& p,
                                      std::optional<double> chi_target = std::nullopt,
                                      const WnlNormalization& nrm = {}) {
    const TuringThresholds th = thresholds(p);
    const double xi = p.xi();
    const double om = p.growth.omega();
    const double chi2 = th.chi_c;

    StuartLandauData out;
    out.rho_m = nrm.rho_scale;
    out.rho_c = nrm.rho_scale * p.beta / (1.0 + xi);
    out.psi1 = nrm.psi_scale;
    out.psi2 = nrm.psi_scale * p.tau * xi * (1.0 + xi) / (p.beta * p.eps);
    const double rm2 = out.rho_m * out.rho_m;
    out.mu_m = -0.5 * rm2 * (1.0 + om);
    out.theta_m = -rm2 * (om - 1.0 / xi) * (1.0 + 4.0 * xi) / 18.0;
    out.mu_c = p.beta * out.mu_m;
    out.theta_c = -p.beta * rm2 * (om - 1.0 / xi) / 18.0;
    out.chi2 = chi2;
    out.p_value = p_polynomial(xi, om);

    auto [sigma_f, landau_f] = detail::fredholm_sigma_landau(p, chi2, nrm);
    const double sigma_cf = 0.5 * p.beta * chi2 * xi / ((1.0 + xi) * (p.eps + p.tau * xi));
    const double landau_cf = -rm2 * out.p_value / (144.0 * (p.eps + p.tau * xi));
    if (std::abs(sigma_f - sigma_cf) > 1e-10 * std::max(1.0, std::abs(sigma_cf)) ||
        std::abs(landau_f - landau_cf) > 1e-10 * std::max(1.0, std::abs(landau_cf))) {
        throw NumericalFailure("Stuart-Landau routes disagree beyond rounding");
    }
    out.sigma = sigma_f;
    out.landau = landau_f;

    if (std::abs(out.p_value) < kDegeneracyTol) out.criticality = Criticality::Degenerate;
    else if (out.landau > 0.0) out.criticality = Criticality::Supercritical;
    else out.criticality = Criticality::Subcritical;

    if (chi_target) {
        if (!(*chi_target > th.chi_c))
            throw BelowCritical(th.chi_c, "chi_target must exceed chi_c");
        out.eta = std::sqrt((*chi_target - th.chi_c) / th.chi_c);
    } else {
        out.eta = std::nullopt;
    }
    return out;
}

/// Supercritical range of eps for the logistic law: the roots of
/// 63 eps - 55 sqrt(eps) + 2 = 0, i.e. ((55 -+ sqrt(2521))/126)^2.
inline std::pair<double, double> supercritical_interval_logistic() {
    const double s = std::sqrt(2521.0);
    const double lo = (55.0 - s) / 126.0;
    const double hi = (55.0 + s) / 126.0;
    return {lo * lo, hi * hi};
}

enum class LambdaCalibration { Logistic, Case1, Case2 };

inline const char* to_string(LambdaCalibration c) {
    switch (c) {
        case LambdaCalibration::Logistic: return "logistic";
        case LambdaCalibration::Case1: return "case1";
        default: return "case2";
    }
}

struct CriticalityRegionMap {
    LambdaCalibration law_case;
    std::vector<double> M_grid;
    std::vector<double> eps_grid;
    std::vector<double> p_values;        // row-major: [iM * eps_grid.size() + ie]
    std::vector<Criticality> verdicts;

    const double& p_at(std::size_t iM, std::size_t ie) const {
        return p_values[iM * eps_grid.size() + ie];
    }
    Criticality verdict_at(std::size_t iM, std::size_t ie) const {
        return verdicts[iM * eps_grid.size() + ie];
    }
};

/// Map of sign(L) verdicts over the (M, eps)-plane for a chosen Lambda
/// calibration. The logistic case keeps the M axis but is M-independent.
inline CriticalityRegionMap
criticality_region_map(double M_min, double M_max, int M_samples,
                       double eps_min, double eps_max, int eps_samples,
                       LambdaCalibration law_case) {
    if (M_samples < 1 || eps_samples < 1)
        throw InvalidParameter("region map needs at least one sample per axis");
    if (M_max >= 1.0 && law_case != LambdaCalibration::Logistic)
        throw InvalidParameter("Allee threshold grid must stay below M = 1");
    if (!(eps_min > 0.0)) throw InvalidParameter("eps grid must be positive");

    CriticalityRegionMap map;
    map.law_case = law_case;
    map.M_grid.resize(static_cast<std::size_t>(M_samples));
    map.eps_grid.resize(static_cast<std::size_t>(eps_samples));
    for (int i = 0; i < M_samples; ++i)
        map.M_grid[static_cast<std::size_t>(i)] =
            M_samples == 1 ? M_min : M_min + (M_max - M_min) * i / (M_samples - 1.0);
    for (int i = 0; i < eps_samples; ++i)
        map.eps_grid[static_cast<std::size_t>(i)] =
            eps_samples == 1 ? eps_min : eps_min + (eps_max - eps_min) * i / (eps_samples - 1.0);

    map.p_values.reserve(map.M_grid.size() * map.eps_grid.size());
    map.verdicts.reserve(map.M_grid.size() * map.eps_grid.size());
    for (double M : map.M_grid) {
        for (double eps : map.eps_grid) {
            double a = 1.0, om = 0.0;
            switch (law_case) {
                case LambdaCalibration::Logistic: break;
                case LambdaCalibration::Case1:
                    a = 1.0;
                    om = 1.0 / (1.0 - M);
                    break;
                case LambdaCalibration::Case2:
                    a = lambda_case2(M) * (1.0 - M);
                    om = 1.0 / (1.0 - M);
                    break;
            }
            const double pv = p_polynomial(std::sqrt(a * eps), om);
            map.p_values.push_back(pv);
            if (std::abs(pv) < kDegeneracyTol) map.verdicts.push_back(Criticality::Degenerate);
            else map.verdicts.push_back(pv < 0.0 ? Criticality::Supercritical
                                                 : Criticality::Subcritical);
        }
    }
    return map;
}

/// Near-onset pattern predicted by the amplitude equation at chi_target:
/// m(x) ~ 1 + eta rho_m A_inf cos(kc x) with A_inf = sqrt(sigma/L).
/// Invalid (no numbers) when L <= 0: the cubic equation has no finite
/// saturated amplitude there.
struct PatternPrediction {
    bool valid = false;
    double A_inf = 0.0;
    double amplitude = 0.0;  // physical perturbation amplitude eta*rho_m*A_inf
    double kc = 0.0;
    double eta = 0.0;
    double sigma = 0.0;
    double landau = 0.0;

    double sample(double x) const { return 1.0 + amplitude * std::cos(kc * x); }
};

inline PatternPrediction predicted_pattern(const ModelParams& p, double chi_target,
                                           const WnlNormalization& nrm = {}) {
    const StuartLandauData sl = stuart_landau(p, chi_target, nrm);
    PatternPrediction out;
    out.kc = thresholds(p).kc;
    out.eta = *sl.eta;
    out.sigma = sl.sigma;
    out.landau = sl.landau;
    if (sl.landau <= 0.0) return out;  // valid stays false
    out.valid = true;
    out.A_inf = std::sqrt(sl.sigma / sl.landau);
    out.amplitude = out.eta * sl.rho_m * out.A_inf;
    return out;
}

}  // namespace mspattern

#endif
