#ifndef TBC_BOUNDARY_OPERATOR_HPP
#define TBC_BOUNDARY_OPERATOR_HPP

#include <functional>
#include <string>
#include <vector>

#include "tbc/block_partition.hpp"
#include "tbc/butterfly.hpp"
#include "tbc/quadrature.hpp"
#include "tbc/time_grid.hpp"
#include "tbc/vector_potential.hpp"

namespace tbc {

enum class Side { Left, Right };

// Precomputed boundary matrices S_N, D_N in streaming form: compressed
// sub-diagonal blocks (applied once their column range completes) plus packed
// triangular strips and diagonals for the near-history part. The time grid is
// padded to leaf_eff * 2^k >= N steps so the dyadic partition exists; entries
// are only computed for rows <= N and blocks whose rows all exceed N are
// skipped.
struct BoundaryOperator {
    int N = 0;            // logical number of steps
    TimeGrid grid;        // padded grid: grid.N >= N
    int leaf_eff = 0;
    double quad_tol = 0.0;
    double eps = 0.0;
    int max_rank = 0;
    std::string descriptor;  // canonical vector-potential descriptor
    BlockPartition part;
    // aligned with part.blocks; rows() == 0 marks a skipped padding block.
    // Each block stores the (S, D) pair in one shared-skeleton factorization.
    std::vector<CompressedBlock> blocks;
    // strip k holds rows of strip [lo, hi]: row m stores columns lo..m-1
    // consecutively at offset d(d-1)/2, d = m - lo (diagonal kept separately)
    std::vector<std::vector<cdouble>> sstrip, dstrip;
    std::vector<cdouble> sdiag, ddiag;  // 1-based, index m <= N

    static BoundaryOperator precompute(int N, double dt, const VectorPotential& vp,
                                       const QuadConfig& quad, const CompressionConfig& comp,
                                       const std::function<void(int, int)>& progress = {});

    /// Same construction from an arbitrary entry generator (m, n) -> (S, D),
    /// e.g. entries preevaluated into memory. quad_tol is recorded as 0.
    static BoundaryOperator precompute_entries(
        int N, double dt, const std::string& descriptor,
        const std::function<std::pair<cdouble, cdouble>(int, int)>& entry,
        const CompressionConfig& comp, const std::function<void(int, int)>& progress = {});

    cdouble S_diag(int m) const { return sdiag[size_t(m)]; }
    cdouble D_diag(int m) const { return ddiag[size_t(m)]; }

    /// Aggregate storage of the compressed blocks vs their dense equivalent.
    CompressedBlock::Storage block_storage() const;
};

// One boundary point's trace history and the streamed action of the history
// operators on it. Per step m: read rhs(m)/robin_coeffs(m) first (they use
// steps 1..m-1), solve for the new trace, then push_step it.
class BoundaryHistory {
public:
    explicit BoundaryHistory(const BoundaryOperator& op);

    /// Record step m = steps_pushed()+1 and fold it into every block whose
    /// column range completes at m.
    void push_step(cdouble u_m, cdouble v_m, double A_m);
    int steps_pushed() const { return m_; }

    /// sum_{n<m} [ D_N(m,n) u_n + S_N(m,n) (v_n - i A_n u_n) ]
    cdouble rhs(int m) const;

    struct Robin {
        cdouble alpha, beta, gamma;  // alpha u_m + beta v_m = gamma
    };
    Robin robin_coeffs(int m, Side side, double A_m) const;

    cdouble u(int n) const { return u_[size_t(n)]; }
    cdouble v(int n) const { return v_[size_t(n)]; }

private:
    const BoundaryOperator& op_;
    int m_ = 0;
    size_t next_block_ = 0;
    std::vector<cdouble> u_, v_, q_;  // q = v - i A u
    std::vector<cdouble> g_;          // accumulated block contributions
};

}  // namespace tbc

#endif
