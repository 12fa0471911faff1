#ifndef TBC_GAUSS_HPP
#define TBC_GAUSS_HPP

#include <vector>

namespace tbc {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};

/// Cached rule of the given order (computed once via Newton on P_n).
const GaussRule& gauss_rule(int n);

}  // namespace tbc

#endif
