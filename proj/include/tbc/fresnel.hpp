#ifndef TBC_FRESNEL_HPP
#define TBC_FRESNEL_HPP

#include <complex>
#include <vector>

namespace tbc {

using cdouble = std::complex<double>;

/// F(v) = int_0^v e^{i w^2} dw (complex Fresnel integral), any v >= 0.
cdouble fresnel_F(double v);

/// G_k(v) = int_v^infty w^{-k} e^{i w^2} dw for even k = 0, 2, ..., kmax.
/// Returns values indexed by k (odd slots zero). Requires v >= 2 (the upward
/// recursion loses digits below that; callers choose their cutoffs so v >= 4).
std::vector<cdouble> fresnel_G_even(double v, int kmax);

/// G_k(v) for all k = 0..kmax. Requires v >= 4 (G_1 comes from the asymptotic
/// series, accurate to ~e^{-v^2}).
std::vector<cdouble> fresnel_G(double v, int kmax);

}  // namespace tbc

#endif
