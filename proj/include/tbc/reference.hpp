#ifndef TBC_REFERENCE_HPP
#define TBC_REFERENCE_HPP

#include <complex>
#include <vector>

#include "tbc/vector_potential.hpp"

namespace tbc {

using cdouble = std::complex<double>;

/// u0(x) = alpha^{-1/2} exp(-(x-mu)^2/(4 alpha^2)) exp(ik(x-mu)); ||u0||_2 = (2pi)^{1/4}.
struct WavepacketParams {
    double alpha = 0.08;
    double k = 0.0;
    double mu = 0.0;
};

cdouble gaussian_wavepacket(double x, const WavepacketParams& p);

/// Closed-form solution of i u_t = -u_xx with u(.,0) = gaussian_wavepacket.
cdouble free_evolution(double x, double t, const WavepacketParams& p);

cdouble free_evolution_dx(double x, double t, const WavepacketParams& p);

/// Solution of i u_t = -u_xx + i A(t) u_x: the free solution advected by
/// phi(t) = int_0^t A, u(x,t) = w(x + phi(t), t).
cdouble shifted_reference(double x, double t, const WavepacketParams& p,
                          const VectorPotential& vp);
cdouble shifted_reference_dx(double x, double t, const WavepacketParams& p,
                             const VectorPotential& vp);

// Classical A = 0 history maps on the uniform grid, hat-basis densities with
// exact Abel weights int eta_n(s) / sqrt(t_m - s) ds.
//   NtD: u(x0,t) = e^{-3 pi i/4}/sqrt(pi) * int_0^t v(s)/sqrt(t-s) ds
//   DtN: v(x0,t) = e^{+3 pi i/4}/sqrt(pi) * int_0^t u'(s)/sqrt(t-s) ds
// (right boundary; the left boundary flips the sign of v). Inputs are nodal
// values indexed 0..m at times n*dt; u is piecewise linear in DtN.
cdouble ntd_classical(const std::vector<cdouble>& v, int m, double dt);
cdouble dtn_classical(const std::vector<cdouble>& u, int m, double dt);

double l2_norm(const std::vector<cdouble>& u, double dx);
double l2_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b, double dx);

}  // namespace tbc

#endif
