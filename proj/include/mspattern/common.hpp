#ifndef MSPATTERN_COMMON_HPP
#define MSPATTERN_COMMON_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mspattern {

inline constexpr double kPi = 3.14159265358979323846;

/// Parameter/configuration violations (CLI maps these to exit code 2).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// beta = 0 removes the m -> c coupling; no Turing mechanism exists.
struct DegenerateCoupling : std::domain_error {
    using std::domain_error::domain_error;
};

/// Requested chi is at or below the critical value; carries chi_c.
struct BelowCritical : std::runtime_error {
    double chi_c;
    explicit BelowCritical(double chi_c_, const std::string& msg)
        : std::runtime_error(msg), chi_c(chi_c_) {}
};

/// Time integration produced a non-finite value; carries the step index.
struct BlowUp : std::runtime_error {
    long step;
    explicit BlowUp(long step_, const std::string& msg)
        : std::runtime_error(msg), step(step_) {}
};

/// Solver breakdowns: Newton non-convergence, singular systems, eigensolver
/// failures (CLI maps these to exit code 3).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full-precision, locale-independent formatting for data files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace mspattern

#endif
