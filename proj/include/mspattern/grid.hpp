#ifndef MSPATTERN_GRID_HPP
#define MSPATTERN_GRID_HPP

#include "mspattern/common.hpp"

namespace mspattern {

/// Uniform node-centered grid on [0, length]: x_i = i*h, h = length/(n-1).
struct Grid1D {
    int n;
    double length;
    double h;

    static Grid1D uniform(int n, double length) {
        if (n < 16) throw InvalidParameter("grid needs at least 16 nodes");
        if (!(length > 0.0)) throw InvalidParameter("domain length must be positive");
        return {n, length, length / (n - 1)};
    }

    double x(int i) const { return h * i; }
};

}  // namespace mspattern

#endif
