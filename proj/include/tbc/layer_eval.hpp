#ifndef TBC_LAYER_EVAL_HPP
#define TBC_LAYER_EVAL_HPP

#include <complex>
#include <functional>
#include <vector>

#include "tbc/boundary_operator.hpp"
#include "tbc/vector_potential.hpp"

namespace tbc {

using Density = std::function<cdouble(double)>;

// Layer potentials of the 1-D Schrodinger kernel at horizontal offset
// c0 = x - x_b from the boundary point x_b, evaluated at time t against a
// smooth density on (0, t). The singular head s -> t (kernel phase
// c0^2/4(t-s) -> infinity) is integrated by Fresnel-tail expansion after the
// substitution s = t - tau^2; the remainder is integrated adaptively.
//   S_A[sigma](x,t) = 1/sqrt(4 pi i) int e^{i(c0+dphi)^2/4D} / sqrt(D) sigma ds
//   D_A[mu](x,t) = sqrt(i)/(4 sqrt(pi)) int (c0+dphi)/D^{3/2} e^{i...} mu ds
// with D = t - s, dphi = phi(t) - phi(s). c0 != 0.
cdouble single_layer_eval(double c0, double t, const Density& sigma, const VectorPotential& vp,
                          double tol = 1e-9);
cdouble double_layer_eval(double c0, double t, const Density& mu, const VectorPotential& vp,
                          double tol = 1e-9);

/// Principal-value part D*_A[mu](t) (the c0 = 0 boundary value).
cdouble dstar_eval(double t, const Density& mu, const VectorPotential& vp, double tol = 1e-9);

/// Exterior solution u(x, t_m), |x| > x0, from nodal boundary traces
/// u_trace/v_trace (indices 0..m, at the boundary on the matching side, hat
/// interpolation in time): iu = S_A[v - iAu] + D_A[u] for x > x0, -iu for
/// x < -x0.
cdouble exterior_eval(double x, double x0, int m, double dt, const std::vector<cdouble>& u_trace,
                      const std::vector<cdouble>& v_trace, const VectorPotential& vp,
                      double tol = 1e-9);

// One-sided limit check of the double-layer jump relation
//   lim_{x -> x_b^+-} D_A[mu](x, t) = +-(i/2) mu(t) + D*_A[mu](t):
// the left side via Neville extrapolation of D_A[mu] over offsets
// +-eps0 2^{-k}, the right side via direct quadrature.
struct JumpCheck {
    cdouble side_limit;    // extrapolated one-sided limit
    cdouble jump_formula;  // +-(i/2) mu(t) + D*_A[mu](t)
    double abs_err;
};
JumpCheck jump_check(Side side, double t, const Density& mu, const VectorPotential& vp,
                     double eps0 = 0.1, int levels = 5, double tol = 1e-10);

}  // namespace tbc

#endif
