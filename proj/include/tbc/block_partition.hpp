#ifndef TBC_BLOCK_PARTITION_HPP
#define TBC_BLOCK_PARTITION_HPP

#include <vector>

namespace tbc {

/// Square sub-diagonal block, indices 1-based inclusive. col_hi < row_lo
/// always holds; the block becomes applicable once step col_hi completes.
struct Block {
    int row_lo, row_hi, col_lo, col_hi;
};

/// Triangular diagonal strip covering rows/cols lo..hi; rows applied directly.
struct Strip {
    int lo, hi;
};

// Dyadic partition of the strict lower triangle of an N x N operator:
// one (N/2)^2 block, two (N/4)^2 blocks, ..., plus N/leaf triangular strips.
// blocks are kept in application order (ascending col_hi, then row_lo).
struct BlockPartition {
    int N = 0, leaf = 0;
    std::vector<Block> blocks;
    std::vector<Strip> strips;

    int strip_of(int m) const { return (m - 1) / leaf; }
};

/// Requires N a multiple of leaf with N/leaf a power of two.
BlockPartition build_partition(int N, int leaf);

/// Smallest padded size N_pad >= N of the form leaf_eff * 2^k with
/// leaf_eff <= leaf; keeps padding under one part in leaf_eff.
struct PaddedSteps {
    int N_pad, leaf_eff;
};
PaddedSteps pad_steps(int N, int leaf);

}  // namespace tbc

#endif
