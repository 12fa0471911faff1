#include <cmath>

#include "doctest.h"
#include "tbc/fresnel.hpp"
#include "tbc/quadrature.hpp"

using namespace tbc;

TEST_CASE("fresnel_F against adaptive quadrature") {
    for (double v : {0.0, 0.3, 1.0, 2.0, 3.5, 3.99, 4.0, 4.5, 6.0, 10.0, 25.0}) {
        cdouble oracle = adaptive_integrate(
            [](double w) { return std::polar(1.0, w * w); }, 0.0, v, 1e-14);
        CHECK(std::abs(fresnel_F(v) - oracle) <= 1e-13);
    }
}

TEST_CASE("fresnel_F limit") {
    const cdouble Finf = std::sqrt(M_PI) / 2.0 * cdouble(M_SQRT1_2, M_SQRT1_2);
    CHECK(std::abs(fresnel_F(4000.0) - Finf) <= 1e-3);  // oscillatory O(1/v) tail
}

namespace {

// G_k(v) = int_v^inf w^{-k} e^{iw^2} dw: integrate to W = 120 adaptively and
// close with the leading asymptotic tail  e^{iW^2} i/(2 W^{k+1}).
cdouble g_oracle(double v, int k) {
    cdouble body = adaptive_integrate(
        [&](double w) { return std::pow(w, -k) * std::polar(1.0, w * w); }, v, 120.0, 1e-14, 16,
        44);
    return body + cdouble(0.0, 0.5) * std::polar(1.0, 120.0 * 120.0) * std::pow(120.0, -(k + 1));
}

}  // namespace

TEST_CASE("fresnel_G_even against tail oracle") {
    for (double v : {2.0, 3.0, 4.0, 8.0}) {
        auto G = fresnel_G_even(v, 8);
        for (int k = 0; k <= 8; k += 2) CHECK(std::abs(G[size_t(k)] - g_oracle(v, k)) <= 1e-12);
    }
}

TEST_CASE("fresnel_G all parities against tail oracle") {
    for (double v : {4.0, 6.0, 10.0}) {
        auto G = fresnel_G(v, 7);
        for (int k = 0; k <= 7; ++k) CHECK(std::abs(G[size_t(k)] - g_oracle(v, k)) <= 1e-12);
    }
}
