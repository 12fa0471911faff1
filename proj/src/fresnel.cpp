#include "tbc/fresnel.hpp"

#include <cmath>
#include <stdexcept>

namespace tbc {

namespace {

const cdouble kHalfSqrtPi = std::sqrt(M_PI) / 2.0 * cdouble(M_SQRT1_2, M_SQRT1_2);  // F(inf)

/// Taylor sum in long double; usable to v ~ 4.5 before cancellation bites.
cdouble fresnel_F_taylor(double v) {
    long double v2 = (long double)v * v;
    long double re = 0.0L, im = 0.0L;
    long double term = v;  // v^{2n+1} / n!
    for (int n = 0; n <= 120; ++n) {
        long double c = term / (2 * n + 1);
        switch (n & 3) {  // i^n
            case 0: re += c; break;
            case 1: im += c; break;
            case 2: re -= c; break;
            case 3: im -= c; break;
        }
        term *= v2 / (n + 1);
        if (term < 1e-24L * (std::fabs(re) + std::fabs(im) + 1e-30L) && n > 4) break;
    }
    return {double(re), double(im)};
}

/// Asymptotic tail G_{k0}(v) = e^{iv^2} * sum, valid v >= 4, k0 in {0, 1}.
cdouble Gk_asymptotic(double v, int k0) {
    // G_k = (i/2) v^{-(k+1)} e^{iv^2} - ((k+1) i/2) G_{k+2}; iterate from k=k0
    cdouble sum = 0.0;
    cdouble term = cdouble(0.0, 0.5) * std::pow(v, -(k0 + 1));
    double prev = 1e300;
    for (int j = 0; j < 40; ++j) {
        double mag = std::abs(term);
        if (mag > prev) break;  // divergence point of the asymptotic series
        sum += term;
        if (mag < 1e-18) break;
        prev = mag;
        term *= cdouble(0.0, -(k0 + 2 * j + 1) / 2.0) / (v * v);
    }
    return std::polar(1.0, v * v) * sum;
}

cdouble G0_asymptotic(double v) { return Gk_asymptotic(v, 0); }

}  // namespace

cdouble fresnel_F(double v) {
    if (v < 0.0) return -fresnel_F(-v);
    if (v < 4.5) return fresnel_F_taylor(v);
    return kHalfSqrtPi - G0_asymptotic(v);
}

std::vector<cdouble> fresnel_G_even(double v, int kmax) {
    if (v < 2.0) throw std::invalid_argument("fresnel_G_even: v >= 2 required");
    std::vector<cdouble> G(size_t(kmax) + 1, cdouble(0.0));
    G[0] = v >= 4.5 ? G0_asymptotic(v) : kHalfSqrtPi - fresnel_F_taylor(v);
    cdouble eiv2 = std::polar(1.0, v * v);
    for (int k = 2; k <= kmax; k += 2)
        G[size_t(k)] = (2.0 * cdouble(0.0, 1.0) * G[size_t(k) - 2] +
                        std::pow(v, -(k - 1)) * eiv2) /
                       double(k - 1);
    return G;
}

std::vector<cdouble> fresnel_G(double v, int kmax) {
    if (v < 4.0) throw std::invalid_argument("fresnel_G: v >= 4 required");
    std::vector<cdouble> G(size_t(kmax) + 1, cdouble(0.0));
    G[0] = G0_asymptotic(v);
    if (kmax >= 1) G[1] = Gk_asymptotic(v, 1);
    cdouble eiv2 = std::polar(1.0, v * v);
    for (int k = 2; k <= kmax; ++k)
        G[size_t(k)] = (2.0 * cdouble(0.0, 1.0) * G[size_t(k) - 2] +
                        std::pow(v, -(k - 1)) * eiv2) /
                       double(k - 1);
    return G;
}

}  // namespace tbc
