#include <cmath>

#include "doctest.h"
#include "tbc/quadrature.hpp"
#include "tbc/vector_potential.hpp"

using namespace tbc;

TEST_CASE("zero potential") {
    VectorPotential z = VectorPotential::zero();
    CHECK(z.is_zero());
    CHECK(z.eval_A(0.3) == 0.0);
    CHECK(z.eval_phi(0.7) == 0.0);
    CHECK(z.phi_diff(0.7, 0.1) == 0.0);
    CHECK(z.A_bound(1.0) == 0.0);
}

TEST_CASE("pulse phi equals the integral of A") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    for (double t : {0.001, 0.02, 0.05, 0.09, 0.1, 0.15}) {
        cdouble oracle = adaptive_integrate(
            [&](double s) { return cdouble(vp.eval_A(s)); }, 0.0, t, 1e-13);
        CHECK(std::fabs(vp.eval_phi(t) - oracle.real()) <= 1e-10);
    }
    // zero past the pulse
    CHECK(vp.eval_A(0.11) == 0.0);
    CHECK(vp.eval_phi(0.2) == vp.eval_phi(0.12));
}

TEST_CASE("pulse A_dot matches finite differences") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    double h = 1e-7;
    for (double t : {0.013, 0.04, 0.077}) {
        double fd = (vp.eval_A(t + h) - vp.eval_A(t - h)) / (2.0 * h);
        CHECK(std::fabs(vp.eval_A_dot(t) - fd) <= 1e-2 * std::max(1.0, std::fabs(fd)));
    }
}

TEST_CASE("phi_diff_delta stays relatively accurate for tiny gaps") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    double t = 0.05, A = vp.eval_A(t);
    for (double delta : {1e-9, 1e-12, 1e-15, 1e-18}) {
        double got = vp.phi_diff_delta(t, delta);
        CHECK(std::fabs(got - A * delta) <= 1e-6 * std::fabs(A * delta) + 1e-300);
    }
    // consistency with phi_diff where both are well-conditioned
    CHECK(std::fabs(vp.phi_diff_delta(t, 0.01) - vp.phi_diff(t, t - 0.01)) <= 1e-12);
}

TEST_CASE("bounds") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    double amax = 0.0, phimax = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        double t = 0.1 * i / 5000;
        amax = std::max(amax, std::fabs(vp.eval_A(t)));
        phimax = std::max(phimax, std::fabs(vp.eval_phi(t)));
    }
    CHECK(vp.A_bound(0.1) >= amax);
    CHECK(vp.max_excursion(0.1) >= 0.999 * phimax);
}

TEST_CASE("tabulated spline reproduces a smooth pulse") {
    VectorPotential vp = VectorPotential::pulse({10.0, 40.0, 0.1});
    int n = 2000;
    std::vector<double> ts(size_t(n) + 1), as(size_t(n) + 1);
    for (int i = 0; i <= n; ++i) {
        ts[size_t(i)] = 0.1 * i / n;
        as[size_t(i)] = vp.eval_A(ts[size_t(i)]);
    }
    VectorPotential tab = VectorPotential::tabulated(ts, as);
    for (double t : {0.0123, 0.044, 0.0871, 0.0999}) {
        CHECK(std::fabs(tab.eval_A(t) - vp.eval_A(t)) <= 1e-6);
        CHECK(std::fabs(tab.eval_phi(t) - vp.eval_phi(t)) <= 1e-7);
    }
    CHECK(tab.eval_A(0.2) == 0.0);  // zero past the table
}

TEST_CASE("tabulated input validation") {
    CHECK_THROWS(VectorPotential::tabulated({0.0, 0.2, 0.1}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(VectorPotential::tabulated({0.1, 0.2}, {1.0, 2.0}));  // t0 != 0
    CHECK_THROWS(VectorPotential::tabulated({0.0}, {1.0}));
}

TEST_CASE("descriptor distinguishes potentials and is stable") {
    VectorPotential a = VectorPotential::pulse({3000.0, 300.0, 0.1});
    VectorPotential b = VectorPotential::pulse({3000.0, 301.0, 0.1});
    CHECK(a.descriptor() != b.descriptor());
    CHECK(a.descriptor() == VectorPotential::pulse({3000.0, 300.0, 0.1}).descriptor());
    CHECK(VectorPotential::zero().descriptor() != a.descriptor());
}
