// Prints the linear and weakly nonlinear summary for the reference parameter
// block (tau = beta = r = delta = 1, L = 12*pi) across the growth-law
// calibrations, for a quick look without writing any files.

#include <cstdio>

#include "mspattern/amplitude.hpp"
#include "mspattern/linear_stability.hpp"

using namespace mspattern;

namespace {

void report(const char* name, const ModelParams& p) {
    const TuringThresholds th = thresholds(p);
    const StuartLandauData sl = stuart_landau(p);
    std::printf("%-22s chi_bar=%8.5f  chi_c=%8.5f  kc^2=%8.5f  sigma=%8.5f  L=%9.5f  %s\n",
                name, th.chi_bar, th.chi_c, th.kc2, sl.sigma, sl.landau,
                to_string(sl.criticality));
}

}  // namespace

int main() {
    for (double eps : {0.08, 0.8}) {
        std::printf("eps = %.2f\n", eps);
        ModelParams p;
        p.eps = eps;
        p.chi = 3.5;
        report("logistic", p);

        for (double M : {-0.5, -0.1, 0.02}) {
            char label[64];
            ModelParams q = p;
            q.growth = GrowthLaw::allee_case1(M);
            std::snprintf(label, sizeof(label), "allee case1 M=%g", M);
            report(label, q);
            q.growth = GrowthLaw::allee_case2(M);
            std::snprintf(label, sizeof(label), "allee case2 M=%g", M);
            report(label, q);
        }
        std::printf("\n");
    }
    return 0;
}
