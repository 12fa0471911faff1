#include "tbc/block_partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace tbc {

namespace {

void subdivide(int lo, int hi, int leaf, BlockPartition& out) {
    int size = hi - lo + 1;
    if (size <= leaf) {
        out.strips.push_back({lo, hi});
        return;
    }
    int mid = lo + size / 2 - 1;
    out.blocks.push_back({mid + 1, hi, lo, mid});
    subdivide(lo, mid, leaf, out);
    subdivide(mid + 1, hi, leaf, out);
}

}  // namespace

BlockPartition build_partition(int N, int leaf) {
    if (N < 1 || leaf < 1) throw std::invalid_argument("build_partition: N, leaf >= 1");
    int ratio = N / leaf;
    if (ratio * leaf != N || (ratio & (ratio - 1)) != 0)
        throw std::invalid_argument("build_partition: N/leaf must be a power of two");
    BlockPartition p;
    p.N = N;
    p.leaf = leaf;
    subdivide(1, N, leaf, p);
    std::sort(p.blocks.begin(), p.blocks.end(), [](const Block& a, const Block& b) {
        if (a.col_hi != b.col_hi) return a.col_hi < b.col_hi;
        return a.row_lo < b.row_lo;
    });
    std::sort(p.strips.begin(), p.strips.end(),
              [](const Strip& a, const Strip& b) { return a.lo < b.lo; });
    return p;
}

PaddedSteps pad_steps(int N, int leaf) {
    if (N < 1 || leaf < 1) throw std::invalid_argument("pad_steps: N, leaf >= 1");
    if (N <= leaf) return {N, N};
    int k = 0;
    while ((leaf << k) < N) ++k;
    int leaf_eff = (N + (1 << k) - 1) >> k;
    return {leaf_eff << k, leaf_eff};
}

}  // namespace tbc
