#ifndef TBC_KERNELS_HPP
#define TBC_KERNELS_HPP

#include <complex>

#include "tbc/vector_potential.hpp"

namespace tbc {

using cdouble = std::complex<double>;

// All complex square roots use the principal branch:
// sqrt(4 pi i t) = sqrt(4 pi t) e^{i pi/4},  sqrt(i) = e^{i pi/4}.

/// Free-particle Green's function K(x, t) = e^{i x^2 / 4t} / sqrt(4 pi i t).
/// Requires t > 0.
cdouble kernel_K(double x, double t);

/// K_A(0, t, s) = exp(i (phi(t)-phi(s))^2 / 4(t-s)) / sqrt(4 pi i (t-s)),
/// the single-layer boundary kernel. Requires 0 <= s < t.
cdouble kernel_S_boundary(const VectorPotential& vp, double t, double s);

/// Principal-value double-layer boundary kernel
/// (sqrt(i)/4 sqrt(pi)) (phi(t)-phi(s)) / (t-s)^{3/2}
///   * exp(i (phi(t)-phi(s))^2 / 4(t-s)).
/// Requires 0 <= s < t. Identically zero when A = 0.
cdouble kernel_Dstar_boundary(const VectorPotential& vp, double t, double s);

}  // namespace tbc

#endif
