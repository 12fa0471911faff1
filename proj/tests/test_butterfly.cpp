#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "tbc/block_partition.hpp"
#include "tbc/butterfly.hpp"

using namespace tbc;

namespace {

// Synthetic oscillatory kernel pair with the butterfly property (bounded
// phase-rank interaction), standing in for the S/D boundary kernels.
std::pair<cdouble, cdouble> synth_pair(int m, int n) {
    double ph = 4e-4 * double(m) * n;
    double a = 1.0 / std::sqrt(1.0 + 0.003 * (m - n));
    return {a * std::polar(1.0, ph), 0.4 * a * std::polar(1.0, ph + 0.2)};
}

PairOracle synth_oracle(int r0, int r1, int c0, int c1) {
    return {r0, r1, c0, c1, [](int m, int n) { return synth_pair(m, n); }};
}

std::vector<cdouble> random_vec(int n, unsigned seed) {
    std::vector<cdouble> v(size_t(n));
    std::uint64_t st = seed * 0x9e3779b97f4a7c15ULL + 1;
    for (auto& z : v) {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        z = {double(st % 2000) / 1000.0 - 1.0, double((st >> 17) % 2000) / 1000.0 - 1.0};
    }
    return v;
}

std::vector<cdouble> dense_apply(const PairOracle& o, const std::vector<cdouble>& xu,
                                 const std::vector<cdouble>& xq) {
    std::vector<cdouble> y(size_t(o.rows()), cdouble(0.0));
    for (int i = 0; i < o.rows(); ++i)
        for (int j = 0; j < o.cols(); ++j) {
            auto [s, d] = o.at(o.row_lo + i, o.col_lo + j);
            y[size_t(i)] += s * xq[size_t(j)] + d * xu[size_t(j)];
        }
    return y;
}

}  // namespace

TEST_CASE("butterfly apply matches the dense pair") {
    PairOracle o = synth_oracle(513, 1024, 1, 512);
    CompressionConfig cfg;
    cfg.eps = 1e-8;
    cfg.leaf = 32;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    CHECK(!cb.is_dense());
    auto xu = random_vec(512, 1), xq = random_vec(512, 2);
    auto got = cb.apply_pair(xu, xq);
    auto want = dense_apply(o, xu, xq);
    double scale = 0.0, err = 0.0;
    for (size_t i = 0; i < want.size(); ++i) {
        scale = std::max(scale, std::abs(want[i]));
        err = std::max(err, std::abs(got[i] - want[i]));
    }
    CHECK(err <= 1e-7 * scale);
    CompressedBlock::Storage st = cb.storage_report();
    CHECK(st.dense_equivalent == 2ull * 512 * 512);
    CHECK(st.factor_complexes < st.dense_equivalent);
    auto rs = cb.rank_summary();
    CHECK(rs.size() >= 2);
    CHECK(rs[0].nodes == 16);
}

TEST_CASE("eps = 0 requests exact dense storage") {
    PairOracle o = synth_oracle(100, 199, 1, 80);
    CompressionConfig cfg;
    cfg.eps = 0.0;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    CHECK(cb.is_dense());
    auto xu = random_vec(80, 3), xq = random_vec(80, 4);
    auto got = cb.apply_pair(xu, xq);
    auto want = dense_apply(o, xu, xq);
    for (size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-13);
}

TEST_CASE("blocks smaller than two leaves are stored densely") {
    PairOracle o = synth_oracle(65, 128, 1, 64);
    CompressionConfig cfg;
    cfg.leaf = 64;
    CHECK(CompressedBlock::compress(o, cfg).is_dense());
}

TEST_CASE("a tiny rank cap falls back without losing accuracy") {
    // a random (incompressible) kernel: every node hits the cap, the factors
    // cannot beat dense, and the block must degrade to exact dense storage
    PairOracle o{1, 256, 1, 256, [](int m, int n) {
                     std::uint64_t st = std::uint64_t(m) * 2654435761u + n * 40503u;
                     st ^= st << 13;
                     st ^= st >> 7;
                     st ^= st << 17;
                     double re = double(st % 1000) / 500.0 - 1.0;
                     return std::pair{cdouble(re, 0.1), cdouble(0.2, re)};
                 }};
    CompressionConfig cfg;
    cfg.leaf = 32;
    cfg.max_rank = 8;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    CHECK(cb.is_dense());
    auto xu = random_vec(256, 5), xq = random_vec(256, 6);
    auto got = cb.apply_pair(xu, xq);
    auto want = dense_apply(o, xu, xq);
    for (size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-12);
}

TEST_CASE("serialize round trip preserves the operator exactly") {
    PairOracle o = synth_oracle(513, 1024, 1, 512);
    CompressionConfig cfg;
    cfg.leaf = 32;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    std::string bytes;
    cb.serialize(bytes);
    CompressedBlock rt = CompressedBlock::deserialize(bytes.data(), bytes.size());
    CHECK(rt.rows() == cb.rows());
    CHECK(rt.cols() == cb.cols());
    CHECK(rt.is_dense() == cb.is_dense());
    auto xu = random_vec(512, 7), xq = random_vec(512, 8);
    auto a = cb.apply_pair(xu, xq), b = rt.apply_pair(xu, xq);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    std::string bytes2;
    rt.serialize(bytes2);
    CHECK(bytes == bytes2);
}

TEST_CASE("deserialize rejects malformed data") {
    PairOracle o = synth_oracle(513, 1024, 1, 512);
    CompressionConfig cfg;
    cfg.leaf = 32;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    std::string bytes;
    cb.serialize(bytes);
    CHECK_THROWS(CompressedBlock::deserialize(bytes.data(), bytes.size() / 2));
    CHECK_THROWS(CompressedBlock::deserialize(bytes.data(), bytes.size() - 1));
    std::string junk(64, '\x7f');
    CHECK_THROWS(CompressedBlock::deserialize(junk.data(), junk.size()));
    std::string trailing = bytes + "x";
    CHECK_THROWS(CompressedBlock::deserialize(trailing.data(), trailing.size()));
}

TEST_CASE("apply_pair flop counter advances") {
    PairOracle o = synth_oracle(100, 199, 1, 100);
    CompressionConfig cfg;
    cfg.eps = 0.0;
    CompressedBlock cb = CompressedBlock::compress(o, cfg);
    CompressedBlock::reset_apply_flops();
    auto xu = random_vec(100, 9), xq = random_vec(100, 10);
    cb.apply_pair(xu, xq);
    CHECK(CompressedBlock::apply_flops() == 2ull * 100 * 100);
}

TEST_CASE("partition covers the strict lower triangle exactly once") {
    int N = 512, leaf = 64;
    BlockPartition part = build_partition(N, leaf);
    std::vector<int> hit(size_t(N + 1) * (N + 1), 0);
    for (const Block& b : part.blocks) {
        CHECK(b.col_hi < b.row_lo);
        for (int m = b.row_lo; m <= b.row_hi; ++m)
            for (int n = b.col_lo; n <= b.col_hi; ++n) ++hit[size_t(m) * (N + 1) + n];
    }
    for (const Strip& s : part.strips)
        for (int m = s.lo; m <= s.hi; ++m)
            for (int n = s.lo; n < m; ++n) ++hit[size_t(m) * (N + 1) + n];
    for (int m = 2; m <= N; ++m)
        for (int n = 1; n < m; ++n) CHECK(hit[size_t(m) * (N + 1) + n] == 1);
    // application order: ascending col_hi
    for (size_t k = 1; k < part.blocks.size(); ++k)
        CHECK(part.blocks[k].col_hi >= part.blocks[k - 1].col_hi);
    CHECK(part.strip_of(1) == 0);
    CHECK(part.strip_of(N) == N / leaf - 1);
}

TEST_CASE("pad_steps properties") {
    for (int N : {1, 63, 64, 65, 1000, 8192, 10000}) {
        PaddedSteps ps = pad_steps(N, 64);
        CHECK(ps.N_pad >= N);
        CHECK(ps.leaf_eff <= 64);
        int q = ps.N_pad / ps.leaf_eff;
        CHECK(q * ps.leaf_eff == ps.N_pad);
        CHECK((q & (q - 1)) == 0);  // power of two
        CHECK(ps.N_pad - N < ps.leaf_eff);
    }
}
