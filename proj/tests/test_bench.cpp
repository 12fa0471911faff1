#include <filesystem>

#include "doctest.h"
#include "tbc/bench.hpp"

using namespace tbc;
namespace fs = std::filesystem;

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

}  // namespace

TEST_CASE("bench_butterfly reports a sane march") {
    VectorPotential z = VectorPotential::zero();
    CompressionConfig c;
    c.leaf = 16;
    BoundaryOperator op = BoundaryOperator::precompute(256, 1e-4, z, quick_quad(), c);
    BenchReport r = bench_butterfly(op, 500);
    CHECK(r.N == 256);
    CHECK(r.tbc_s > 0.0);
    CHECK(r.march_s > 0.0);
    CHECK(r.flops > 0);
    CHECK(r.storage_bytes > 0);
    CHECK(r.dense_bytes == 2ull * 16 * (255 * 256 / 2 - op.part.strips.size() * (15 * 16 / 2)));
}

TEST_CASE("bench_direct streams the full triangle") {
    fs::path scratch = fs::temp_directory_path() / "tbc_bench_test_triangle.bin";
    BenchReport r = bench_direct(512, 1e-4, 500, scratch.string());
    CHECK(r.N == 512);
    // one complex multiply-add per strict-lower-triangle entry, S and D
    CHECK(r.flops == 2ull * 512 * 511 / 2);
    CHECK(r.tbc_s > 0.0);
    CHECK(r.precompute_s > 0.0);
    CHECK(!fs::exists(scratch));  // scratch removed afterwards
}
