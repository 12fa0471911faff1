#include "tbc/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace tbc {

namespace {
const double kInvSqrt4Pi = 1.0 / std::sqrt(4.0 * M_PI);
const cdouble kEmiQuarterPi = std::polar(1.0, -0.25 * M_PI);
const cdouble kEiQuarterPi = std::polar(1.0, 0.25 * M_PI);
}  // namespace

cdouble kernel_K(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("kernel_K: t must be positive");
    double amp = kInvSqrt4Pi / std::sqrt(t);
    return amp * kEmiQuarterPi * std::polar(1.0, x * x / (4.0 * t));
}

cdouble kernel_S_boundary(const VectorPotential& vp, double t, double s) {
    if (!(s >= 0.0 && s < t)) throw std::domain_error("kernel_S_boundary: need 0 <= s < t");
    double d = t - s;
    double dphi = vp.phi_diff(t, s);
    double amp = kInvSqrt4Pi / std::sqrt(d);
    return amp * kEmiQuarterPi * std::polar(1.0, dphi * dphi / (4.0 * d));
}

cdouble kernel_Dstar_boundary(const VectorPotential& vp, double t, double s) {
    if (!(s >= 0.0 && s < t)) throw std::domain_error("kernel_Dstar_boundary: need 0 <= s < t");
    double d = t - s;
    double dphi = vp.phi_diff(t, s);
    double amp = kInvSqrt4Pi * 0.5 * dphi / (d * std::sqrt(d));
    return amp * kEiQuarterPi * std::polar(1.0, dphi * dphi / (4.0 * d));
}

}  // namespace tbc
