#ifndef MSPATTERN_MODEL_HPP
#define MSPATTERN_MODEL_HPP

#include <array>
#include <cmath>
#include <optional>

#include "mspattern/common.hpp"
#include "mspattern/growth.hpp"

namespace mspattern {

/// Nondimensional parameters of the three-field system
///   m_t = m_xx + G_j(m) - (Phi(m) c_x)_x
///   c_t = (eps c_xx + delta d - c + beta m) / tau
///   d_t = r F(m) m (1 - d)
/// on [0, L] with no-flux boundaries.
struct ModelParams {
    double tau = 1.0;    // time-scale ratio, > 0
    double eps = 1.0;    // cytokine diffusion ratio, > 0
    double beta = 1.0;   // cytokine production by macrophages, >= 0
    double r = 1.0;      // destruction rate, > 0
    double delta = 1.0;  // cytokine production by damaged cells, >= 0
    double chi = 1.0;    // chemotactic coefficient, > 0
    double domain_length = 12.0 * kPi;
    GrowthLaw growth{};

    /// xi = sqrt(a * eps); logistic gives xi = sqrt(eps).
    double xi() const { return std::sqrt(growth.decay_rate() * eps); }

    void validate() const {
        if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
        if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
        if (!(r > 0.0)) throw InvalidParameter("r must be positive");
        if (beta < 0.0) throw InvalidParameter("beta must be nonnegative");
        if (delta < 0.0) throw InvalidParameter("delta must be nonnegative");
        if (!(chi > 0.0)) throw InvalidParameter("chi must be positive");
        if (!(domain_length > 0.0)) throw InvalidParameter("domain length must be positive");
        if (growth.kind == GrowthKind::Allee) {
            if (growth.M >= 1.0) throw InvalidParameter("Allee threshold must satisfy M < 1");
            if (!(growth.Lambda > 0.0)) throw InvalidParameter("Lambda must be positive");
        }
    }
};

struct Equilibrium {
    std::array<double, 3> state;        // (m, c, d)
    std::array<double, 3> eigenvalues;  // homogeneous-system linearization
    bool stable;
};

/// The line {(0, delta*d, d)} of macrophage-free states. The along-line
/// direction is neutral; transverse growth rate is G_j'(0).
struct ZeroLine {
    double transverse_rate;  // G_j'(0): +1 logistic, -Lambda*M Allee
    bool transversely_stable;
};

struct EquilibriumSet {
    Equilibrium coexistence;          // P* = (1, beta+delta, 1)
    std::optional<Equilibrium> sharp; // P# = (M, beta*M+delta, 1), strong Allee only
    ZeroLine zero_line;
};

/// Homogeneous equilibria with their linearization eigenvalues.
/// P* has eigenvalues (-a, -1/tau, -r/2). P# is reported only for a strong
/// Allee effect (0 < M < 1); its m-direction eigenvalue Lambda*M*(1-M) > 0.
inline EquilibriumSet equilibria(const ModelParams& p) {
    const GrowthLaw& g = p.growth;
    EquilibriumSet out{
        Equilibrium{{1.0, p.beta + p.delta, 1.0},
                    {-g.decay_rate(), -1.0 / p.tau, -p.r / 2.0},
                    true},
        std::nullopt,
        ZeroLine{g.derivative(0.0), g.derivative(0.0) < 0.0}};
    if (g.strong_allee()) {
        const double M = g.M;
        out.sharp = Equilibrium{{M, p.beta * M + p.delta, 1.0},
                                {g.Lambda * M * (1.0 - M), -1.0 / p.tau,
                                 -p.r * damage_rate(M)},
                                false};
    }
    return out;
}

}  // namespace mspattern

#endif
