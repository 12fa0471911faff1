#include "tbc/butterfly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace tbc {

namespace {

constexpr int kSampleRows = 96;                   // baseline sampled rows per ID
constexpr std::uint64_t kDenseCap = 64ull << 20;  // complexes per kernel; fallback ceiling

std::uint64_t g_apply_flops = 0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ID {
    bool identity = false;  // keep all columns, T = I (exact)
    bool capped = false;    // identity forced by the rank cap
    std::vector<std::uint32_t> skel;
    Eigen::MatrixXcd T;
    double d0 = 0.0;  // largest pivot of the sampled block (scale reference)
};

/// Column interpolative decomposition M ~ M[:, skel] * T via pivoted QR with
/// relative pivot cutoff eps. Ranks above cap (untrustworthy against sampled
/// rows, or over the configured limit) yield an exact identity node instead.
ID interp_decomp(const Eigen::MatrixXcd& M, double eps, int cap) {
    ID out;
    int nc = int(M.cols());
    if (nc == 0) {
        out.T.resize(0, 0);
        return out;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
    const Eigen::MatrixXcd& R = qr.matrixR();
    int kmax = int(std::min(M.rows(), M.cols()));
    double d0 = kmax > 0 ? std::abs(R(0, 0)) : 0.0;
    int r = 0;
    if (d0 > 0.0) {
        r = 1;
        while (r < kmax && std::abs(R(r, r)) > eps * d0) ++r;
    }
    out.d0 = d0;
    if (r >= nc) {
        out.identity = true;
        return out;
    }
    if (r > cap) {
        out.identity = true;
        out.capped = true;
        return out;
    }
    const auto perm = qr.colsPermutation().indices();
    out.T = Eigen::MatrixXcd::Zero(r, nc);
    out.skel.resize(r);
    if (r > 0) {
        Eigen::MatrixXcd X = R.topLeftCorner(r, r)
                                 .triangularView<Eigen::Upper>()
                                 .solve(R.block(0, r, r, nc - r));
        for (int k = 0; k < r; ++k) {
            out.skel[k] = std::uint32_t(perm(k));
            out.T(k, perm(k)) = 1.0;
        }
        for (int k = r; k < nc; ++k) out.T.col(perm(k)) = X.col(k - r);
    }
    return out;
}

/// Sampled ID of the stacked (S; D) pair with verification. Rows are drawn
/// with a strided component (covers narrow caustic-like features) plus
/// independent uniform draws (breaks aliasing against row oscillation); each
/// sampled row contributes its S and D rows to the sampled matrix. The result
/// is checked on fresh rows and the sample grows until the extrapolated
/// residual meets the tolerance. Identity results are exact and need no check.
ID robust_id(const std::function<std::pair<cdouble, cdouble>(int, int)>& at, int r0, int r1,
             const std::vector<int>& gcols, double node_eps, int max_rank, std::uint64_t seed) {
    int nr = r1 - r0 + 1, csz = int(gcols.size());
    std::vector<char> in(size_t(nr), 0);
    std::vector<int> rows;
    auto add = [&](int r) {
        if (!in[size_t(r - r0)]) {
            in[size_t(r - r0)] = 1;
            rows.push_back(r);
        }
    };
    std::uint64_t st = seed;
    auto add_random = [&](int cnt) {
        for (int k = 0; k < cnt; ++k) {
            st = splitmix64(st);
            add(r0 + int(st % std::uint64_t(nr)));
        }
    };
    auto add_strided = [&](int cnt, int phase) {
        int stride = std::max(1, nr / std::max(1, cnt));
        for (int r = r0 + phase % stride; r <= r1; r += stride) add(r);
    };
    add(r0);
    add(r1);
    int p = std::max(kSampleRows, (5 * csz) / 4);
    Eigen::MatrixXcd M;
    for (int round = 0;; ++round) {
        bool all = p >= nr;
        if (all)
            for (int r = r0; r <= r1; ++r) add(r);
        else {
            add_strided(p / 2, round * 131 + 1);
            add_random(p / 2);
        }
        std::sort(rows.begin(), rows.end());
        M.resize(2 * int(rows.size()), csz);
        for (int k = 0; k < csz; ++k)
            for (size_t i = 0; i < rows.size(); ++i) {
                auto [s, d] = at(rows[i], gcols[k]);
                M(2 * int(i), k) = s;
                M(2 * int(i) + 1, k) = d;
            }
        ID id = interp_decomp(M, node_eps, max_rank);
        if (id.identity || all || int(rows.size()) >= nr) return id;
        size_t nsample = rows.size();
        std::vector<int> chk;
        for (int k = 0; k < 256 && int(chk.size()) < 32; ++k) {
            st = splitmix64(st);
            int r = r0 + int(st % std::uint64_t(nr));
            if (!in[size_t(r - r0)]) {
                in[size_t(r - r0)] = 1;
                chk.push_back(r);
                rows.push_back(r);  // reused if this round is rejected
            }
        }
        if (chk.empty()) return id;
        int q = int(chk.size()), rk = int(id.skel.size());
        Eigen::MatrixXcd C(2 * q, csz);
        for (int k = 0; k < csz; ++k)
            for (int i = 0; i < q; ++i) {
                auto [s, d] = at(chk[i], gcols[k]);
                C(2 * i, k) = s;
                C(2 * i + 1, k) = d;
            }
        Eigen::MatrixXcd Cs(2 * q, rk);
        for (int k = 0; k < rk; ++k) Cs.col(k) = C.col(int(id.skel[k]));
        double res = (C - Cs * id.T).norm() * std::sqrt(double(nr) / q);
        double scale = id.d0 * std::sqrt(double(nr) / double(nsample));
        if (res <= 10.0 * node_eps * std::max(scale, C.norm())) return id;
        p *= 2;
    }
}

void put_bytes(std::string& out, const void* p, size_t n) {
    out.append(static_cast<const char*>(p), n);
}
void put_u32(std::string& out, std::uint32_t v) { put_bytes(out, &v, 4); }
void put_u8(std::string& out, std::uint8_t v) { put_bytes(out, &v, 1); }
void put_cvec(std::string& out, const std::vector<cdouble>& v) {
    for (const cdouble& z : v) {
        double re = z.real(), im = z.imag();
        put_bytes(out, &re, 8);
        put_bytes(out, &im, 8);
    }
}

struct Reader {
    const char* p;
    size_t left;
    void need(size_t n) const {
        if (n > left) throw std::runtime_error("butterfly: truncated data");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, p, 4);
        p += 4;
        left -= 4;
        return v;
    }
    std::uint8_t u8() {
        need(1);
        std::uint8_t v = std::uint8_t(*p);
        ++p;
        --left;
        return v;
    }
    void cvec(std::vector<cdouble>& v, size_t n) {
        need(16 * n);
        v.resize(n);
        for (size_t k = 0; k < n; ++k) {
            double re, im;
            std::memcpy(&re, p, 8);
            std::memcpy(&im, p + 8, 8);
            p += 16;
            left -= 16;
            v[k] = {re, im};
        }
    }
};

}  // namespace

int CompressedBlock::ncl(int level) const { return 1 << (levels_ - level); }

CompressedBlock CompressedBlock::compress(const PairOracle& oracle,
                                          const CompressionConfig& cfg) {
    CompressedBlock b;
    b.rows_ = oracle.rows();
    b.cols_ = oracle.cols();
    if (b.rows_ <= 0 || b.cols_ <= 0) throw std::invalid_argument("compress: empty block");
    b.leaf_ = cfg.leaf;

    int minside = std::min(b.rows_, b.cols_);
    int L = 0;
    while ((minside >> (L + 1)) >= cfg.leaf) ++L;

    auto fill_dense = [&]() {
        b.dense_ = true;
        b.levels_ = 0;
        b.nodes_.clear();
        b.U_s_.clear();
        b.U_d_.clear();
        b.U_cols_.clear();
        b.dense_s_.assign(size_t(b.rows_) * b.cols_, cdouble(0.0));
        b.dense_d_.assign(size_t(b.rows_) * b.cols_, cdouble(0.0));
        for (int j = 0; j < b.cols_; ++j)
            for (int i = 0; i < b.rows_; ++i) {
                auto [s, d] = oracle.at(oracle.row_lo + i, oracle.col_lo + j);
                b.dense_s_[size_t(i) * b.cols_ + j] = s;
                b.dense_d_[size_t(i) * b.cols_ + j] = d;
            }
    };

    if (cfg.eps <= 0.0 || L == 0) {
        if (std::uint64_t(b.rows_) * b.cols_ > kDenseCap)
            throw std::invalid_argument("compress: block too large for dense storage");
        fill_dense();
        return b;
    }

    b.levels_ = L;
    // per-node cutoff below the target: ID errors compound across levels
    double node_eps = cfg.eps / (L + 1);

    // cluster offsets nest exactly: floor(c*j/n) = floor(c*2j/2n)
    auto coff = [&](int nclusters, int j) { return int(std::int64_t(b.cols_) * j / nclusters); };
    auto roff = [&](int nclusters, int i) { return int(std::int64_t(b.rows_) * i / nclusters); };

    struct BuildNode {
        std::vector<int> gcols;  // global skeleton columns of this node
    };

    b.nodes_.assign(L + 1, {});
    std::vector<BuildNode> prev, cur;

    auto store_node = [&](Node& nd, BuildNode& bn, ID&& id, std::vector<int>&& gcols) {
        int csz = int(gcols.size());
        if (id.capped) b.capped_ = true;
        nd.identity = id.identity;
        nd.c = std::uint32_t(csz);
        if (id.identity) {
            nd.r = nd.c;
            bn.gcols = std::move(gcols);
        } else {
            nd.r = std::uint32_t(id.skel.size());
            nd.skel = std::move(id.skel);
            nd.T.assign(size_t(nd.r) * nd.c, cdouble(0.0));
            for (int rr = 0; rr < int(nd.r); ++rr)
                for (int cc = 0; cc < int(nd.c); ++cc) nd.T[size_t(rr) * nd.c + cc] = id.T(rr, cc);
            bn.gcols.resize(nd.r);
            for (int k = 0; k < int(nd.r); ++k) bn.gcols[k] = gcols[nd.skel[k]];
        }
    };
    std::uint64_t base_seed =
        splitmix64(0x5b1cull ^ std::uint64_t(oracle.row_lo) << 32 ^ std::uint64_t(oracle.col_lo));

    // level 0: ID each column leaf against the full row range
    {
        int nj = 1 << L;
        b.nodes_[0].resize(nj);
        cur.resize(nj);
        for (int j = 0; j < nj; ++j) {
            int c0 = coff(nj, j), c1 = coff(nj, j + 1);
            std::vector<int> gcols(c1 - c0);
            for (int k = 0; k < c1 - c0; ++k) gcols[k] = oracle.col_lo + c0 + k;
            ID id = robust_id(oracle.at, oracle.row_lo, oracle.row_hi, gcols, node_eps,
                              cfg.max_rank, splitmix64(base_seed ^ std::uint64_t(j)));
            store_node(b.nodes_[0][j], cur[j], std::move(id), std::move(gcols));
        }
    }

    // levels 1..L: merge sibling skeletons against halved row clusters
    for (int l = 1; l <= L; ++l) {
        int ni = 1 << l, nj = 1 << (L - l);
        b.nodes_[l].resize(size_t(ni) * nj);
        prev = std::move(cur);
        cur.assign(size_t(ni) * nj, {});
        for (int i = 0; i < ni; ++i) {
            int r0 = oracle.row_lo + roff(ni, i), r1 = oracle.row_lo + roff(ni, i + 1) - 1;
            for (int j = 0; j < nj; ++j) {
                const BuildNode& chl = prev[size_t(i / 2) * (nj * 2) + 2 * j];
                const BuildNode& chr = prev[size_t(i / 2) * (nj * 2) + 2 * j + 1];
                std::vector<int> gcols = chl.gcols;
                gcols.insert(gcols.end(), chr.gcols.begin(), chr.gcols.end());
                std::uint64_t seed = splitmix64(
                    base_seed ^ (std::uint64_t(l) << 48 | std::uint64_t(i) << 24 |
                                 std::uint64_t(std::uint32_t(j))));
                ID id = robust_id(oracle.at, r0, r1, gcols, node_eps, cfg.max_rank, seed);
                store_node(b.nodes_[l][size_t(i) * nj + j], cur[size_t(i) * nj + j],
                           std::move(id), std::move(gcols));
            }
        }
    }

    // final leaf factors: full skeleton columns on each finest row cluster
    {
        int ni = 1 << L;
        b.U_s_.resize(ni);
        b.U_d_.resize(ni);
        b.U_cols_.resize(ni);
        for (int i = 0; i < ni; ++i) {
            int r0 = oracle.row_lo + roff(ni, i), r1 = oracle.row_lo + roff(ni, i + 1) - 1;
            int nr = r1 - r0 + 1;
            const std::vector<int>& gcols = cur[size_t(i)].gcols;
            int nc = int(gcols.size());
            b.U_cols_[i] = std::uint32_t(nc);
            b.U_s_[i].assign(size_t(nr) * nc, cdouble(0.0));
            b.U_d_[i].assign(size_t(nr) * nc, cdouble(0.0));
            for (int k = 0; k < nc; ++k)
                for (int ii = 0; ii < nr; ++ii) {
                    auto [s, d] = oracle.at(r0 + ii, gcols[k]);
                    b.U_s_[i][size_t(ii) * nc + k] = s;
                    b.U_d_[i][size_t(ii) * nc + k] = d;
                }
        }
    }

    Storage st = b.storage_report();
    if (st.factor_complexes >= st.dense_equivalent &&
        std::uint64_t(b.rows_) * b.cols_ <= kDenseCap)
        fill_dense();
    return b;
}

void CompressedBlock::transfer(const std::vector<cdouble>& x,
                               std::vector<std::vector<cdouble>>& curv) const {
    int L = levels_;
    auto gemv = [](const std::vector<cdouble>& T, int r, int c, const cdouble* in,
                   std::vector<cdouble>& out) {
        out.assign(size_t(r), cdouble(0.0));
        for (int i = 0; i < r; ++i) {
            const cdouble* row = &T[size_t(i) * c];
            cdouble acc = 0.0;
            for (int j = 0; j < c; ++j) acc += row[j] * in[j];
            out[i] = acc;
        }
        g_apply_flops += std::uint64_t(r) * c;
    };

    {
        int nj = 1 << L;
        curv.resize(nj);
        for (int j = 0; j < nj; ++j) {
            int c0 = int(std::int64_t(cols_) * j / nj), c1 = int(std::int64_t(cols_) * (j + 1) / nj);
            const Node& nd = nodes_[0][j];
            if (nd.identity)
                curv[j].assign(x.begin() + c0, x.begin() + c1);
            else
                gemv(nd.T, int(nd.r), int(nd.c), x.data() + c0, curv[j]);
        }
    }
    std::vector<std::vector<cdouble>> nxt;
    for (int l = 1; l <= L; ++l) {
        int ni = 1 << l, nj = 1 << (L - l);
        nxt.assign(size_t(ni) * nj, {});
        std::vector<cdouble> z;
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < nj; ++j) {
                const std::vector<cdouble>& zl = curv[size_t(i / 2) * (nj * 2) + 2 * j];
                const std::vector<cdouble>& zr = curv[size_t(i / 2) * (nj * 2) + 2 * j + 1];
                const Node& nd = nodes_[l][size_t(i) * nj + j];
                std::vector<cdouble>& out = nxt[size_t(i) * nj + j];
                if (nd.identity) {
                    out = zl;
                    out.insert(out.end(), zr.begin(), zr.end());
                } else {
                    z = zl;
                    z.insert(z.end(), zr.begin(), zr.end());
                    gemv(nd.T, int(nd.r), int(nd.c), z.data(), out);
                }
            }
        curv = std::move(nxt);
    }
}

std::vector<cdouble> CompressedBlock::apply_pair(const std::vector<cdouble>& xu,
                                                 const std::vector<cdouble>& xq) const {
    if (int(xu.size()) != cols_ || int(xq.size()) != cols_)
        throw std::invalid_argument("apply_pair: size mismatch");
    std::vector<cdouble> y(size_t(rows_), cdouble(0.0));
    if (dense_) {
        for (int i = 0; i < rows_; ++i) {
            const cdouble* srow = &dense_s_[size_t(i) * cols_];
            const cdouble* drow = &dense_d_[size_t(i) * cols_];
            cdouble acc = 0.0;
            for (int j = 0; j < cols_; ++j) acc += srow[j] * xq[j] + drow[j] * xu[j];
            y[i] = acc;
        }
        g_apply_flops += 2 * std::uint64_t(rows_) * cols_;
        return y;
    }
    std::vector<std::vector<cdouble>> zq, zu;
    transfer(xq, zq);
    transfer(xu, zu);
    int ni = 1 << levels_;
    for (int i = 0; i < ni; ++i) {
        int r0 = int(std::int64_t(rows_) * i / ni), r1 = int(std::int64_t(rows_) * (i + 1) / ni);
        int nr = r1 - r0, nc = int(U_cols_[i]);
        for (int ii = 0; ii < nr; ++ii) {
            const cdouble* srow = &U_s_[i][size_t(ii) * nc];
            const cdouble* drow = &U_d_[i][size_t(ii) * nc];
            cdouble acc = 0.0;
            for (int k = 0; k < nc; ++k) acc += srow[k] * zq[size_t(i)][k] + drow[k] * zu[size_t(i)][k];
            y[r0 + ii] = acc;
        }
        g_apply_flops += 2 * std::uint64_t(nr) * nc;
    }
    return y;
}

CompressedBlock::Storage CompressedBlock::storage_report() const {
    Storage st;
    st.dense_equivalent = 2 * std::uint64_t(rows_) * cols_;
    if (dense_) {
        st.factor_complexes = st.dense_equivalent;
        return st;
    }
    for (const auto& lvl : nodes_)
        for (const Node& nd : lvl) st.factor_complexes += nd.T.size();
    for (const auto& u : U_s_) st.factor_complexes += u.size();
    for (const auto& u : U_d_) st.factor_complexes += u.size();
    return st;
}

std::vector<CompressedBlock::LevelRanks> CompressedBlock::rank_summary() const {
    std::vector<LevelRanks> out;
    if (dense_) return out;
    for (const auto& lvl : nodes_) {
        LevelRanks lr;
        lr.min_rank = lvl.empty() ? 0 : int(lvl[0].r);
        for (const Node& nd : lvl) {
            lr.min_rank = std::min(lr.min_rank, int(nd.r));
            lr.max_rank = std::max(lr.max_rank, int(nd.r));
            lr.mean_rank += nd.r;
            lr.identities += nd.identity ? 1 : 0;
            lr.complexes += nd.T.size();
            ++lr.nodes;
        }
        if (lr.nodes) lr.mean_rank /= lr.nodes;
        out.push_back(lr);
    }
    LevelRanks lu;
    lu.min_rank = U_cols_.empty() ? 0 : int(U_cols_[0]);
    for (size_t i = 0; i < U_s_.size(); ++i) {
        lu.min_rank = std::min(lu.min_rank, int(U_cols_[i]));
        lu.max_rank = std::max(lu.max_rank, int(U_cols_[i]));
        lu.mean_rank += U_cols_[i];
        lu.complexes += U_s_[i].size() + U_d_[i].size();
        ++lu.nodes;
    }
    if (lu.nodes) lu.mean_rank /= lu.nodes;
    out.push_back(lu);
    return out;
}

std::uint64_t CompressedBlock::apply_flops() { return g_apply_flops; }
void CompressedBlock::reset_apply_flops() { g_apply_flops = 0; }

void CompressedBlock::serialize(std::string& out) const {
    put_u32(out, std::uint32_t(rows_));
    put_u32(out, std::uint32_t(cols_));
    put_u32(out, std::uint32_t(leaf_));
    put_u32(out, std::uint32_t(levels_));
    put_u8(out, dense_ ? 1 : 0);
    put_u8(out, capped_ ? 1 : 0);
    if (dense_) {
        put_cvec(out, dense_s_);
        put_cvec(out, dense_d_);
        return;
    }
    for (const auto& lvl : nodes_)
        for (const Node& nd : lvl) {
            put_u8(out, nd.identity ? 1 : 0);
            put_u32(out, nd.r);
            put_u32(out, nd.c);
            if (!nd.identity) {
                for (std::uint32_t s : nd.skel) put_u32(out, s);
                put_cvec(out, nd.T);
            }
        }
    for (size_t i = 0; i < U_s_.size(); ++i) {
        put_u32(out, U_cols_[i]);
        put_cvec(out, U_s_[i]);
        put_cvec(out, U_d_[i]);
    }
}

CompressedBlock CompressedBlock::deserialize(const char* data, size_t len) {
    Reader rd{data, len};
    CompressedBlock b;
    b.rows_ = int(rd.u32());
    b.cols_ = int(rd.u32());
    b.leaf_ = int(rd.u32());
    b.levels_ = int(rd.u32());
    if (b.rows_ <= 0 || b.cols_ <= 0 || b.levels_ < 0 || b.levels_ > 30)
        throw std::runtime_error("butterfly: malformed header");
    b.dense_ = rd.u8() != 0;
    b.capped_ = rd.u8() != 0;
    if (b.dense_) {
        rd.cvec(b.dense_s_, size_t(b.rows_) * b.cols_);
        rd.cvec(b.dense_d_, size_t(b.rows_) * b.cols_);
        if (rd.left != 0) throw std::runtime_error("butterfly: trailing data");
        return b;
    }
    int L = b.levels_;
    b.nodes_.assign(L + 1, {});
    for (int l = 0; l <= L; ++l) {
        int n = (1 << l) * (1 << (L - l));
        b.nodes_[l].resize(n);
        for (Node& nd : b.nodes_[l]) {
            nd.identity = rd.u8() != 0;
            nd.r = rd.u32();
            nd.c = rd.u32();
            if (nd.r > 1u << 24 || nd.c > 1u << 24)
                throw std::runtime_error("butterfly: malformed node");
            if (nd.identity) {
                if (nd.r != nd.c) throw std::runtime_error("butterfly: malformed node");
            } else {
                nd.skel.resize(nd.r);
                for (std::uint32_t& s : nd.skel) {
                    s = rd.u32();
                    if (s >= nd.c) throw std::runtime_error("butterfly: malformed node");
                }
                rd.cvec(nd.T, size_t(nd.r) * nd.c);
            }
        }
    }
    // cross-level shape consistency, so apply_pair() cannot index out of bounds
    for (int l = 0; l <= L; ++l) {
        int ni_l = 1 << l, nj = 1 << (L - l);
        for (int i = 0; i < ni_l; ++i)
            for (int j = 0; j < nj; ++j) {
                const Node& nd = b.nodes_[l][size_t(i) * nj + j];
                std::uint32_t want;
                if (l == 0) {
                    want = std::uint32_t(std::int64_t(b.cols_) * (j + 1) / nj -
                                         std::int64_t(b.cols_) * j / nj);
                } else {
                    const Node& cl = b.nodes_[l - 1][size_t(i / 2) * (nj * 2) + 2 * j];
                    const Node& cr = b.nodes_[l - 1][size_t(i / 2) * (nj * 2) + 2 * j + 1];
                    want = cl.r + cr.r;
                }
                if (nd.c != want) throw std::runtime_error("butterfly: malformed node");
            }
    }
    int ni = 1 << L;
    b.U_s_.resize(ni);
    b.U_d_.resize(ni);
    b.U_cols_.resize(ni);
    for (int i = 0; i < ni; ++i) {
        int r0 = int(std::int64_t(b.rows_) * i / ni), r1 = int(std::int64_t(b.rows_) * (i + 1) / ni);
        b.U_cols_[i] = rd.u32();
        if (b.U_cols_[i] != b.nodes_[L][i].r) throw std::runtime_error("butterfly: malformed node");
        rd.cvec(b.U_s_[i], size_t(r1 - r0) * b.U_cols_[i]);
        rd.cvec(b.U_d_[i], size_t(r1 - r0) * b.U_cols_[i]);
    }
    if (rd.left != 0) throw std::runtime_error("butterfly: trailing data");
    return b;
}

}  // namespace tbc
