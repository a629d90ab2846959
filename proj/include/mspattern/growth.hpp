#ifndef MSPATTERN_GROWTH_HPP
#define MSPATTERN_GROWTH_HPP

#include <cmath>

#include "mspattern/common.hpp"

namespace mspattern {

enum class GrowthKind { Logistic, Allee };

/// Macrophage activation law. Logistic: G1(m) = m(1-m). Allee (cubic):
/// G2(m) = Lambda * m(1-m)(m-M) with threshold M < 1 and rate Lambda > 0.
///
/// Derived quantities used throughout the analysis:
///   j     growth-law index (1 logistic, 2 Allee)
///   a     linear decay rate at the coexistence state, a = [Lambda(1-M)]^(j-1)
///   omega quadratic/cubic shape factor, omega = (j-1)/(1-M)
struct GrowthLaw {
    GrowthKind kind = GrowthKind::Logistic;
    double M = 0.0;       // Allee threshold (ignored for logistic)
    double Lambda = 1.0;  // Allee production rate (ignored for logistic)

    static GrowthLaw logistic() { return {}; }

    static GrowthLaw allee(double M, double Lambda) {
        if (M >= 1.0) throw InvalidParameter("Allee threshold must satisfy M < 1");
        if (!(Lambda > 0.0)) throw InvalidParameter("Allee rate Lambda must be positive");
        return {GrowthKind::Allee, M, Lambda};
    }

    static GrowthLaw allee_case1(double M);
    static GrowthLaw allee_case2(double M);

    int index() const { return kind == GrowthKind::Logistic ? 1 : 2; }

    double decay_rate() const {  // a
        return kind == GrowthKind::Logistic ? 1.0 : Lambda * (1.0 - M);
    }

    double omega() const {
        return kind == GrowthKind::Logistic ? 0.0 : 1.0 / (1.0 - M);
    }

    /// Strong Allee: the law is negative at small positive density (0 < M < 1).
    bool strong_allee() const {
        return kind == GrowthKind::Allee && M > 0.0 && M < 1.0;
    }

    double rate(double m) const {  // G_j(m); accepts any real m, no clamping
        if (kind == GrowthKind::Logistic) return m * (1.0 - m);
        return Lambda * m * (1.0 - m) * (m - M);
    }

    double derivative(double m) const {  // G_j'(m)
        if (kind == GrowthKind::Logistic) return 1.0 - 2.0 * m;
        return Lambda * (-3.0 * m * m + 2.0 * (1.0 + M) * m - M);
    }
};

/// Case 1 calibration: Lambda_1 = 1/(1-M), so a = Lambda_1(1-M) = 1 and the
/// bifurcation values coincide with the logistic ones.
inline double lambda_case1(double M) {
    if (M >= 1.0) throw InvalidParameter("lambda_case1 requires M < 1");
    return 1.0 / (1.0 - M);
}

/// Location of the Allee-law maximum on [0, 1].
inline double allee_max_location(double M) {
    return ((M + 1.0) + std::sqrt(M * M - M + 1.0)) / 3.0;
}

/// Case 2 calibration: Lambda_2 = (4 m2 (1-m2)(m2-M))^-1 with m2 the interior
/// maximum, so max G2 on [0,1] equals the logistic maximum 1/4. Guarantees
/// Lambda_2(1-M) > 1 for every M < 1.
inline double lambda_case2(double M) {
    if (M >= 1.0) throw InvalidParameter("lambda_case2 requires M < 1");
    const double m2 = allee_max_location(M);
    return 1.0 / (4.0 * m2 * (1.0 - m2) * (m2 - M));
}

inline GrowthLaw GrowthLaw::allee_case1(double M) { return allee(M, lambda_case1(M)); }
inline GrowthLaw GrowthLaw::allee_case2(double M) { return allee(M, lambda_case2(M)); }

/// Chemotactic flux coefficient Phi(m) = chi * m/(1+m); Phi(1) = chi/2.
inline double chemotaxis_sensitivity(double m, double chi) {
    return chi * m / (1.0 + m);
}

/// Oligodendrocyte destruction prefactor F(m)*m = m^2/(1+m).
inline double damage_rate(double m) {
    return m * m / (1.0 + m);
}

}  // namespace mspattern

#endif
