#pragma once

#include <vector>

namespace visclab {

struct GaussLegendre {
    std::vector<double> nodes;    // ascending, in (-1, 1)
    std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussLegendre gauss_legendre(int n);

}  // namespace visclab
