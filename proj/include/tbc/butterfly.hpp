#ifndef TBC_BUTTERFLY_HPP
#define TBC_BUTTERFLY_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace tbc {

using cdouble = std::complex<double>;

/// Matrix-free access to a block of the (S, D) kernel pair: entries at global
/// (row, col), 1-based inclusive ranges. The generator must be pure and
/// deterministic; one call yields both kernels (they share a quadrature pass).
struct PairOracle {
    int row_lo = 1, row_hi = 0, col_lo = 1, col_hi = 0;
    std::function<std::pair<cdouble, cdouble>(int, int)> at;

    int rows() const { return row_hi - row_lo + 1; }
    int cols() const { return col_hi - col_lo + 1; }
};

struct CompressionConfig {
    double eps = 1e-8;  // relative interpolative-decomposition tolerance
    int leaf = 64;      // column leaf-cluster size
    // Per-node rank cap. Nodes whose eps-rank exceeds the cap are kept
    // uncompressed (exact identity interpolation) rather than truncated, so
    // accuracy never degrades; the whole block falls back to dense storage
    // only if the factorization ends up no smaller than the dense block.
    int max_rank = 256;
};

// Multilevel interpolative-decomposition butterfly factorization of one block
// of the S and D kernels jointly: both share the same oscillatory phase, so
// one column-skeleton hierarchy serves the stacked pair, with separate leaf
// factors per kernel. Construction samples oracle rows deterministically;
// application costs O(n log n) when the butterfly property holds. eps = 0
// requests plain dense storage. Immutable once built.
class CompressedBlock {
public:
    CompressedBlock() = default;

    static CompressedBlock compress(const PairOracle& oracle, const CompressionConfig& cfg);

    /// y = S xq + D xu; xu, xq of length cols().
    std::vector<cdouble> apply_pair(const std::vector<cdouble>& xu,
                                    const std::vector<cdouble>& xq) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_dense() const { return dense_; }
    bool rank_capped() const { return capped_; }

    struct Storage {
        std::uint64_t factor_complexes = 0;
        std::uint64_t dense_equivalent = 0;  // the two dense kernels
    };
    Storage storage_report() const;

    struct LevelRanks {
        int min_rank = 0, max_rank = 0, identities = 0, nodes = 0;
        double mean_rank = 0.0;
        std::uint64_t complexes = 0;  // stored factor entries at this level
    };
    /// Per-level rank statistics, levels 0..L then the leaf factors last.
    std::vector<LevelRanks> rank_summary() const;

    /// Cumulative complex multiply-add count across all apply_pair() calls.
    static std::uint64_t apply_flops();
    static void reset_apply_flops();

    void serialize(std::string& out) const;
    static CompressedBlock deserialize(const char* data, size_t len);

private:
    struct Node {
        bool identity = false;
        std::vector<std::uint32_t> skel;  // local cols kept (empty if identity)
        std::vector<cdouble> T;           // r x c interpolation, row-major
        std::uint32_t r = 0, c = 0;
    };

    int rows_ = 0, cols_ = 0;
    int leaf_ = 0, levels_ = 0;  // levels_ = L; level index 0..L
    bool dense_ = false;
    bool capped_ = false;
    std::vector<cdouble> dense_s_, dense_d_;  // row-major rows_ x cols_
    std::vector<std::vector<Node>> nodes_;    // nodes_[l][i * ncl(l) + j]
    std::vector<std::vector<cdouble>> U_s_, U_d_;  // final leaf factors, row-major
    std::vector<std::uint32_t> U_cols_;

    void transfer(const std::vector<cdouble>& x, std::vector<std::vector<cdouble>>& out) const;
    int ncl(int level) const;  // column clusters at a level
};

}  // namespace tbc

#endif
