// Independent numeric oracles used by the test suites: derivative-free 1D
// optimization, bisection, central differences. These stay independent of the
// closed forms they check.
#ifndef MSPATTERN_TESTS_ORACLES_HPP
#define MSPATTERN_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>

namespace oracles {

/// Golden-section minimizer on [a, b]; returns argmin.
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-13) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-13) {
    return golden_min([&](double x) { return -f(x); }, a, b, tol);
}

/// Bisection root of f on [a, b]; requires a sign change.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-14) {
    double fa = f(a);
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m; fa = fm;
        } else {
            b = m;
        }
        if (b - a < tol * (1.0 + std::abs(a) + std::abs(b))) break;
    }
    return 0.5 * (a + b);
}

/// Fourth-order central difference of f at x.
inline double central_derivative(const std::function<double(double)>& f, double x,
                                 double h = 1e-5) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Deterministic uniform draw helper for property tests.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(gen);
    }
};

}  // namespace oracles

#endif
