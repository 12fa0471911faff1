#include "tbc/boundary_operator.hpp"

#include <stdexcept>

namespace tbc {

namespace {

using EntryFn = std::function<std::pair<cdouble, cdouble>(int, int)>;

BoundaryOperator precompute_impl(int N, double dt, const std::string& descriptor,
                                 double quad_tol, const EntryFn& entry,
                                 const std::function<void()>& strip_done,
                                 const CompressionConfig& comp,
                                 const std::function<void(int, int)>& progress) {
    if (N < 1 || dt <= 0.0) throw std::invalid_argument("precompute: N >= 1, dt > 0");
    BoundaryOperator op;
    PaddedSteps ps = pad_steps(N, comp.leaf);
    op.N = N;
    op.grid = TimeGrid{ps.N_pad, dt};
    op.leaf_eff = ps.leaf_eff;
    op.quad_tol = quad_tol;
    op.eps = comp.eps;
    op.max_rank = comp.max_rank;
    op.descriptor = descriptor;
    op.part = build_partition(ps.N_pad, ps.leaf_eff);

    int total = int(op.part.blocks.size()) + int(op.part.strips.size());
    int done = 0;
    auto tick = [&]() {
        ++done;
        if (progress) progress(done, total);
    };

    // strips and diagonals, column-major so the evaluator reuses panel caches
    op.sdiag.assign(size_t(op.grid.N) + 1, cdouble(0.0));
    op.ddiag.assign(size_t(op.grid.N) + 1, cdouble(0.0));
    op.sstrip.resize(op.part.strips.size());
    op.dstrip.resize(op.part.strips.size());
    for (size_t k = 0; k < op.part.strips.size(); ++k) {
        const Strip& st = op.part.strips[k];
        if (st.lo > N) {
            tick();
            continue;
        }
        int hi = std::min(st.hi, N);
        int len = st.hi - st.lo + 1;
        op.sstrip[k].assign(size_t(len) * (len - 1) / 2, cdouble(0.0));
        op.dstrip[k].assign(size_t(len) * (len - 1) / 2, cdouble(0.0));
        for (int n = st.lo; n <= hi; ++n) {
            auto [s, d] = entry(n, n);
            op.sdiag[size_t(n)] = s;
            op.ddiag[size_t(n)] = d;
            for (int m = n + 1; m <= hi; ++m) {
                size_t dd = size_t(m - st.lo);
                size_t off = dd * (dd - 1) / 2 + size_t(n - st.lo);
                auto [sm, dm] = entry(m, n);
                op.sstrip[k][off] = sm;
                op.dstrip[k][off] = dm;
            }
        }
        if (strip_done) strip_done();
        tick();
    }

    // compressed (S, D) pair blocks; padding-only blocks stay empty
    op.blocks.resize(op.part.blocks.size());
    CompressionConfig cfg = comp;
    cfg.leaf = ps.leaf_eff;
    for (size_t k = 0; k < op.part.blocks.size(); ++k) {
        const Block& blk = op.part.blocks[k];
        if (blk.row_lo > N) {
            tick();
            continue;
        }
        PairOracle po{blk.row_lo, blk.row_hi, blk.col_lo, blk.col_hi, entry};
        op.blocks[k] = CompressedBlock::compress(po, cfg);
        if (strip_done) strip_done();
        tick();
    }
    return op;
}

}  // namespace

BoundaryOperator BoundaryOperator::precompute(int N, double dt, const VectorPotential& vp,
                                              const QuadConfig& quad,
                                              const CompressionConfig& comp,
                                              const std::function<void(int, int)>& progress) {
    TimeGrid grid{pad_steps(N, comp.leaf).N_pad, dt};
    EntryEvaluator ev(vp, grid, quad);
    return precompute_impl(
        N, dt, vp.descriptor(), quad.tol,
        [&ev](int m, int n) { return ev.entry_SD(m, n); }, [&ev]() { ev.clear_cache(); },
        comp, progress);
}

BoundaryOperator BoundaryOperator::precompute_entries(
    int N, double dt, const std::string& descriptor,
    const std::function<std::pair<cdouble, cdouble>(int, int)>& entry,
    const CompressionConfig& comp, const std::function<void(int, int)>& progress) {
    return precompute_impl(N, dt, descriptor, 0.0, entry, {}, comp, progress);
}

CompressedBlock::Storage BoundaryOperator::block_storage() const {
    CompressedBlock::Storage st;
    for (const CompressedBlock& b : blocks) {
        if (b.rows() == 0) continue;
        CompressedBlock::Storage s = b.storage_report();
        st.factor_complexes += s.factor_complexes;
        st.dense_equivalent += s.dense_equivalent;
    }
    return st;
}

BoundaryHistory::BoundaryHistory(const BoundaryOperator& op) : op_(op) {
    size_t n = size_t(op.grid.N) + 1;
    u_.assign(n, cdouble(0.0));
    v_.assign(n, cdouble(0.0));
    q_.assign(n, cdouble(0.0));
    g_.assign(n, cdouble(0.0));
}

void BoundaryHistory::push_step(cdouble u_m, cdouble v_m, double A_m) {
    if (m_ >= op_.N) throw std::logic_error("push_step: history full");
    ++m_;
    u_[size_t(m_)] = u_m;
    v_[size_t(m_)] = v_m;
    q_[size_t(m_)] = v_m - cdouble(0.0, 1.0) * A_m * u_m;
    const auto& blocks = op_.part.blocks;
    while (next_block_ < blocks.size() && blocks[next_block_].col_hi == m_) {
        const Block& blk = blocks[next_block_];
        if (blk.row_lo <= op_.N) {
            int nc = blk.col_hi - blk.col_lo + 1;
            std::vector<cdouble> xu(u_.begin() + blk.col_lo, u_.begin() + blk.col_lo + nc);
            std::vector<cdouble> xq(q_.begin() + blk.col_lo, q_.begin() + blk.col_lo + nc);
            std::vector<cdouble> y = op_.blocks[next_block_].apply_pair(xu, xq);
            for (int i = 0; i < blk.row_hi - blk.row_lo + 1; ++i)
                g_[size_t(blk.row_lo + i)] += y[size_t(i)];
        }
        ++next_block_;
    }
}

cdouble BoundaryHistory::rhs(int m) const {
    if (m != m_ + 1) throw std::logic_error("rhs: expected next step");
    int k = op_.part.strip_of(m);
    int lo = op_.part.strips[size_t(k)].lo;
    size_t d = size_t(m - lo);
    size_t base = d * (d - 1) / 2;
    cdouble acc = g_[size_t(m)];
    const auto& ds = op_.dstrip[size_t(k)];
    const auto& ss = op_.sstrip[size_t(k)];
    for (size_t i = 0; i < d; ++i)
        acc += ds[base + i] * u_[size_t(lo) + i] + ss[base + i] * q_[size_t(lo) + i];
    return acc;
}

BoundaryHistory::Robin BoundaryHistory::robin_coeffs(int m, Side side, double A_m) const {
    const cdouble iu(0.0, 1.0);
    cdouble s = op_.S_diag(m), d = op_.D_diag(m);
    cdouble half = side == Side::Right ? cdouble(0.0, 0.5) : cdouble(0.0, -0.5);
    return {half + iu * s * A_m - d, -s, rhs(m)};
}

}  // namespace tbc
