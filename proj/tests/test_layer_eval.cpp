#include <cmath>

#include "doctest.h"
#include "tbc/fresnel.hpp"
#include "tbc/gauss.hpp"
#include "tbc/layer_eval.hpp"
#include "tbc/reference.hpp"

using namespace tbc;

namespace {
const cdouble kPrefS = std::polar(0.5 / std::sqrt(M_PI), -M_PI / 4.0);
const cdouble kPrefD = std::polar(0.25 / std::sqrt(M_PI), M_PI / 4.0);
}  // namespace

TEST_CASE("A=0 closed forms for unit density") {
    VectorPotential z = VectorPotential::zero();
    Density one = [](double) { return cdouble(1.0); };
    double t = 0.001;
    for (double c0 : {0.5, -0.5, 2.0}) {
        double a = std::fabs(c0), yt = a / (2.0 * std::sqrt(t));
        auto G = fresnel_G_even(yt, 2);
        cdouble Sref = kPrefS * a * G[2];
        cdouble Dref = kPrefD * 4.0 * (c0 > 0 ? 1.0 : -1.0) * G[0];
        CHECK(std::abs(single_layer_eval(c0, t, one, z, 1e-12) - Sref) <= 1e-12);
        CHECK(std::abs(double_layer_eval(c0, t, one, z, 1e-12) - Dref) <= 1e-12);
    }
}

TEST_CASE("exterior identity on exact free traces, both sides") {
    VectorPotential z = VectorPotential::zero();
    double dt = 2.5e-5;
    int m = 2000;
    double t = m * dt;
    for (int side = 0; side < 2; ++side) {
        WavepacketParams p;
        p.k = side == 0 ? 10.0 : -10.0;
        double xb = side == 0 ? 1.0 : -1.0, xe = side == 0 ? 1.5 : -1.5;
        std::vector<cdouble> ut(size_t(m) + 1), vt(size_t(m) + 1);
        for (int n = 0; n <= m; ++n) {
            ut[size_t(n)] = free_evolution(xb, n * dt, p);
            vt[size_t(n)] = free_evolution_dx(xb, n * dt, p);
        }
        cdouble got = exterior_eval(xe, 1.0, m, dt, ut, vt, z, 1e-10);
        cdouble want = free_evolution(xe, t, p);
        CHECK(std::abs(want) > 0.1);  // the packet has actually arrived
        CHECK(std::abs(got - want) <= 5e-7);
    }
}

TEST_CASE("exterior identity with smooth analytic densities under the pulse") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    WavepacketParams p;
    p.k = -10.0;
    double t = 0.05;
    Density sig = [&](double s) {
        return shifted_reference_dx(1.0, s, p, vp) -
               cdouble(0.0, vp.eval_A(s)) * shifted_reference(1.0, s, p, vp);
    };
    Density muu = [&](double s) { return shifted_reference(1.0, s, p, vp); };
    for (double xe : {1.1, 1.5}) {
        cdouble S = single_layer_eval(xe - 1.0, t, sig, vp, 1e-10);
        cdouble D = double_layer_eval(xe - 1.0, t, muu, vp, 1e-10);
        cdouble got = cdouble(0.0, -1.0) * (S + D);
        cdouble want = shifted_reference(xe, t, p, vp);
        CHECK(std::abs(got - want) <= 1e-7);
    }
}

TEST_CASE("jump relation, A=0: the formula is exact") {
    VectorPotential z = VectorPotential::zero();
    Density mu = [](double s) { return cdouble(std::sin(20.0 * s)); };
    JumpCheck jc = jump_check(Side::Right, 0.05, mu, z, 0.1, 5, 1e-10);
    CHECK(jc.abs_err <= 1e-9);
    // D* vanishes with A, so the formula is (i/2) sin(1) exactly
    CHECK(std::fabs(jc.jump_formula.real()) <= 1e-12);
    CHECK(std::fabs(jc.jump_formula.imag() - 0.5 * std::sin(1.0)) <= 1e-12);
}

TEST_CASE("jump relation under the pulse, both sides") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    Density mu = [](double s) { return cdouble(std::sin(20.0 * s)); };
    for (Side sd : {Side::Right, Side::Left}) {
        JumpCheck jc = jump_check(sd, 0.05, mu, vp, 4e-5, 5, 1e-10);
        CHECK(jc.abs_err <= 1e-5);
    }
}

TEST_CASE("dstar against a brute-force tau-space oracle") {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    Density mu = [](double s) { return cdouble(std::sin(20.0 * s)); };
    double t = 0.05;
    const GaussRule& gr = gauss_rule(8);
    cdouble acc = 0.0;
    int NP = 400000;  // ~3e5 rad of phase, heavily oversampled
    double b = std::sqrt(t), h = b / NP;
    for (int i = 0; i < NP; ++i) {
        double mid = (i + 0.5) * h;
        for (size_t q = 0; q < gr.x.size(); ++q) {
            double tau = mid + 0.5 * h * gr.x[q];
            double tau2 = tau * tau;
            double r = vp.phi_diff_delta(t, tau2) / tau2;
            acc += 0.5 * h * gr.w[q] * 2.0 * r * std::polar(1.0, r * r * tau2 / 4.0) *
                   cdouble(std::sin(20.0 * (t - tau2)));
        }
    }
    cdouble oracle = kPrefD * acc;
    CHECK(std::abs(dstar_eval(t, mu, vp, 1e-12) - oracle) <= 1e-9);
}
