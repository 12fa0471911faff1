#include <cmath>
#include <vector>

#include "doctest.h"
#include "tbc/boundary_operator.hpp"

using namespace tbc;

namespace {

QuadConfig quick_quad() {
    QuadConfig q;
    q.tol = 1e-11;
    q.base_order = 16;
    q.max_subdiv = 12;
    q.phase_budget = 2.0 * M_PI;
    q.adaptive = false;
    return q;
}

std::vector<cdouble> random_trace(int n, std::uint64_t seed) {
    std::vector<cdouble> v(size_t(n) + 1, cdouble(0.0));
    std::uint64_t st = seed;
    for (int i = 1; i <= n; ++i) {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        v[size_t(i)] = {double(st % 2000) / 1000.0 - 1.0, double((st >> 19) % 2000) / 1000.0 - 1.0};
    }
    return v;
}

}  // namespace

TEST_CASE("streamed rhs equals the dense triangle") {
    VectorPotential vp = VectorPotential::pulse({300.0, 60.0, 0.1});
    int N = 300;
    double dt = 0.1 / N;
    CompressionConfig comp;
    comp.leaf = 16;
    BoundaryOperator op = BoundaryOperator::precompute(N, dt, vp, quick_quad(), comp);
    CHECK(op.N == N);
    CHECK(op.grid.N >= N);
    CHECK(op.leaf_eff == 16);

    EntryEvaluator ev(vp, op.grid, quick_quad());
    auto u = random_trace(N, 0xfeed), v = random_trace(N, 0xbead);
    std::vector<double> A(size_t(N) + 1);
    for (int n = 0; n <= N; ++n) A[size_t(n)] = vp.eval_A(n * dt);

    BoundaryHistory hist(op);
    for (int m = 1; m <= N; ++m) {
        cdouble got = hist.rhs(m);
        cdouble want = 0.0;
        for (int n = 1; n < m; ++n) {
            auto [s, d] = ev.entry_SD(m, n);
            want += d * u[size_t(n)] + s * (v[size_t(n)] - cdouble(0.0, A[size_t(n)]) * u[size_t(n)]);
        }
        double scale = std::max(1e-3, std::abs(want));
        CHECK(std::abs(got - want) <= 1e-9 * scale);
        hist.push_step(u[size_t(m)], v[size_t(m)], A[size_t(m)]);
    }
    CHECK(hist.steps_pushed() == N);
}

TEST_CASE("robin coefficients use the diagonal entries") {
    VectorPotential vp = VectorPotential::pulse({300.0, 60.0, 0.1});
    int N = 64;
    double dt = 0.1 / N;
    CompressionConfig comp;
    comp.leaf = 16;
    BoundaryOperator op = BoundaryOperator::precompute(N, dt, vp, quick_quad(), comp);
    BoundaryHistory hist(op);
    for (int m = 1; m <= 5; ++m)
        hist.push_step(cdouble(0.1 * m, -0.2), cdouble(0.05, 0.3 * m), vp.eval_A(m * dt));
    int m = 6;
    double Am = vp.eval_A(m * dt);
    for (Side sd : {Side::Right, Side::Left}) {
        auto rc = hist.robin_coeffs(m, sd, Am);
        cdouble half(0.0, sd == Side::Right ? 0.5 : -0.5);
        cdouble alpha = half + cdouble(0.0, 1.0) * op.S_diag(m) * Am - op.D_diag(m);
        CHECK(std::abs(rc.alpha - alpha) <= 1e-15);
        CHECK(std::abs(rc.beta - (-op.S_diag(m))) <= 1e-15);
        CHECK(std::abs(rc.gamma - hist.rhs(m)) <= 1e-15);
    }
}

TEST_CASE("precompute_entries matches precompute") {
    VectorPotential vp = VectorPotential::pulse({300.0, 60.0, 0.1});
    int N = 200;
    double dt = 0.1 / N;
    CompressionConfig comp;
    comp.leaf = 16;
    BoundaryOperator a = BoundaryOperator::precompute(N, dt, vp, quick_quad(), comp);
    EntryEvaluator ev(vp, a.grid, quick_quad());
    BoundaryOperator b = BoundaryOperator::precompute_entries(
        N, dt, vp.descriptor(), [&](int m, int n) { return ev.entry_SD(m, n); }, comp);
    CHECK(b.descriptor == a.descriptor);

    auto u = random_trace(N, 0xabc), v = random_trace(N, 0xdef);
    BoundaryHistory ha(a), hb(b);
    for (int m = 1; m <= N; ++m) {
        cdouble ra = ha.rhs(m), rb = hb.rhs(m);
        CHECK(std::abs(ra - rb) <= 1e-10 * std::max(1.0, std::abs(ra)));
        double Am = vp.eval_A(m * dt);
        ha.push_step(u[size_t(m)], v[size_t(m)], Am);
        hb.push_step(u[size_t(m)], v[size_t(m)], Am);
    }
}

TEST_CASE("A=0 operator has a vanishing D part") {
    VectorPotential z = VectorPotential::zero();
    int N = 128;
    CompressionConfig comp;
    comp.leaf = 16;
    BoundaryOperator op = BoundaryOperator::precompute(N, 1e-4, z, quick_quad(), comp);
    for (int m = 1; m <= N; ++m) CHECK(std::abs(op.D_diag(m)) <= 1e-12);
    for (const auto& strip : op.dstrip)
        for (cdouble d : strip) CHECK(std::abs(d) <= 1e-12);
    // u trace alone (v = 0, A = 0) must produce a negligible rhs
    BoundaryHistory hist(op);
    auto u = random_trace(N, 0x77);
    for (int m = 1; m <= N; ++m) {
        CHECK(std::abs(hist.rhs(m)) <= 1e-9);
        hist.push_step(u[size_t(m)], cdouble(0.0), 0.0);
    }
}

TEST_CASE("block storage report aggregates all blocks") {
    VectorPotential z = VectorPotential::zero();
    int N = 256;
    CompressionConfig comp;
    comp.leaf = 16;
    BoundaryOperator op = BoundaryOperator::precompute(N, 1e-4, z, quick_quad(), comp);
    CompressedBlock::Storage st = op.block_storage();
    CHECK(st.dense_equivalent > 0);
    CHECK(st.factor_complexes > 0);
}
