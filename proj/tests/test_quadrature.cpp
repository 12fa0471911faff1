#include <cmath>

#include "doctest.h"
#include "tbc/kernels.hpp"
#include "tbc/quadrature.hpp"

using namespace tbc;

namespace {

QuadConfig fast_profile() {
    QuadConfig q;
    q.tol = 1e-11;
    q.base_order = 16;
    q.max_subdiv = 12;
    q.phase_budget = 2.0 * M_PI;
    q.adaptive = false;
    return q;
}

QuadConfig oracle_profile() {
    QuadConfig q;
    q.tol = 1e-12;
    q.base_order = 16;
    q.max_subdiv = 16;
    q.adaptive = true;  // two-level verified panels at budget pi
    return q;
}

// A = 0 hat-basis Abel weight: S(m,n) depends only on d = m - n,
// S = sqrt(dt/pi) e^{-i pi/4} ((d+1)^{3/2} - 2 d^{3/2} + (d-1)^{3/2}) / 3.
cdouble abel_S(int d, double dt) {
    auto p32 = [](double x) { return x * std::sqrt(x); };
    return std::polar(std::sqrt(dt / M_PI) / 3.0, -M_PI / 4.0) *
           (p32(d + 1.0) - 2.0 * p32(double(d)) + p32(d - 1.0));
}

}  // namespace

TEST_CASE("adaptive_integrate on a closed form") {
    cdouble got = adaptive_integrate(
        [](double w) { return std::exp(cdouble(0.0, w)); }, 0.0, 2.0, 1e-14);
    cdouble exact = (std::exp(cdouble(0.0, 2.0)) - 1.0) / cdouble(0.0, 1.0);
    CHECK(std::abs(got - exact) <= 1e-14);
}

TEST_CASE("free kernel values") {
    // K(x,t) = e^{ix^2/4t} / sqrt(4 pi i t)
    double x = 0.7, t = 0.03;
    cdouble want = std::polar(1.0, x * x / (4.0 * t)) /
                   (std::sqrt(4.0 * M_PI * t) * std::polar(1.0, M_PI / 4.0));
    CHECK(std::abs(kernel_K(x, t) - want) <= 1e-15);
    VectorPotential z = VectorPotential::zero();
    CHECK(std::abs(kernel_S_boundary(z, t, 0.01) - kernel_K(0.0, t - 0.01)) <= 1e-15);
    CHECK(std::abs(kernel_Dstar_boundary(z, t, 0.01)) == 0.0);
}

TEST_CASE("A=0 entries: D vanishes, S is the Abel Toeplitz matrix") {
    VectorPotential z = VectorPotential::zero();
    double dt = 1e-5;
    TimeGrid grid{512, dt};
    EntryEvaluator ev(z, grid, fast_profile());
    cdouble smm = std::polar(2.0 / 3.0 * std::sqrt(dt / M_PI), -M_PI / 4.0);
    for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {17, 17}, {100, 99}, {512, 3}, {400, 311}}) {
        auto [s, d] = ev.entry_SD(m, n);
        CHECK(std::abs(d) <= 1e-12);
        if (m == n)
            CHECK(std::abs(s - smm) <= 1e-13);
        else
            CHECK(std::abs(s - abel_S(m - n, dt)) <= 1e-13);
    }
}

TEST_CASE("pulse entries against the verified adaptive oracle") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    int N = 2048;
    double dt = 0.1 / N;
    TimeGrid grid{N, dt};
    EntryEvaluator fast(vp, grid, fast_profile());
    EntryEvaluator oracle(vp, grid, oracle_profile());
    std::uint64_t st = 0x51ab71;
    auto rng = [&]() {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        return st;
    };
    for (int k = 0; k < 25; ++k) {
        int m = 2 + int(rng() % unsigned(N - 1));
        int n = 1 + int(rng() % unsigned(m));
        auto [s, d] = fast.entry_SD(m, n);
        auto [so, do_] = oracle.entry_SD(m, n);
        CHECK(std::abs(s - so) <= 1e-11);
        CHECK(std::abs(d - do_) <= 1e-11);
    }
}

TEST_CASE("entry_SD agrees with entry_S / entry_D") {
    VectorPotential vp = VectorPotential::pulse({200.0, 50.0, 0.1});
    TimeGrid grid{256, 1e-4};
    EntryEvaluator ev(vp, grid, fast_profile());
    for (auto [m, n] : {std::pair{256, 30}, {100, 99}, {64, 64}}) {
        auto [s, d] = ev.entry_SD(m, n);
        CHECK(std::abs(s - ev.entry_S(m, n)) <= 1e-14);
        CHECK(std::abs(d - ev.entry_D(m, n)) <= 1e-14);
    }
}

TEST_CASE("entry domain checks") {
    VectorPotential z = VectorPotential::zero();
    TimeGrid grid{16, 1e-4};
    EntryEvaluator ev(z, grid, fast_profile());
    CHECK_THROWS_AS(ev.entry_SD(0, 0), std::domain_error);
    CHECK_THROWS_AS(ev.entry_SD(5, 6), std::domain_error);
    CHECK_THROWS_AS(ev.entry_SD(17, 3), std::domain_error);
}
