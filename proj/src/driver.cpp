#include "tbc/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "tbc/bench.hpp"
#include "tbc/crc64.hpp"
#include "tbc/operator_io.hpp"
#include "tbc/trajectory_io.hpp"

namespace tbc {

namespace {

using clock_t_ = std::chrono::steady_clock;

double secs(clock_t_::time_point a, clock_t_::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

std::string config_hash(const SimulationConfig& c) {
    std::string s = c.canonical();
    return hex64(crc64(s.data(), s.size()));
}

std::string file_hash(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot hash " + path);
    std::uint64_t h = 0;
    char buf[1 << 16];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) h = crc64(buf, size_t(f.gcount()), h);
    return hex64(h);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed for " + path);
}

double linf(const std::vector<cdouble>& u) {
    double m = 0.0;
    for (const cdouble& z : u) m = std::max(m, std::abs(z));
    return m;
}

BoundaryOperator load_matching_operator(const SimulationConfig& c, const std::string& path,
                                        const VectorPotential& vp) {
    if (path.empty())
        throw ConfigError("run: boundary.operator_path required for tbc modes");
    BoundaryOperator op = load_operator(path);
    std::ostringstream diff;
    if (op.N != c.N) diff << "steps: operator N=" << op.N << ", config N=" << c.N << "\n";
    if (std::fabs(op.grid.dt - c.dt) > 1e-12 * c.dt)
        diff << "dt: operator " << op.grid.dt << ", config " << c.dt << "\n";
    if (op.descriptor != vp.descriptor())
        diff << "potential descriptor differs:\n--- operator ---\n"
             << op.descriptor << "--- config ---\n"
             << vp.descriptor();
    if (!diff.str().empty())
        throw OperatorMismatchError("operator file " + path + " does not match the config:\n" +
                                    diff.str());
    return op;
}

/// L2 distance between two frames restricted to [lo, hi] (lo >= hi: all).
double frame_l2(const SnapshotStream& a, const std::vector<cdouble>& fa,
                const std::vector<cdouble>& fb, double lo, double hi) {
    double acc = 0.0;
    for (int j = 0; j <= a.J; ++j) {
        double x = -a.x0 + j * a.dx;
        if (lo < hi && (x < lo || x > hi)) continue;
        double d = std::abs(fa[size_t(j)] - fb[size_t(j)]);
        acc += d * d;
    }
    return std::sqrt(acc * a.dx);
}

struct FrameMatch {
    std::vector<double> times;
    std::vector<std::pair<int, int>> idx;  // (frame in a, frame in b)
};

FrameMatch match_frames(const SnapshotStream& a, const SnapshotStream& b) {
    if (a.J != b.J || std::fabs(a.dx - b.dx) > 1e-12 * a.dx ||
        std::fabs(a.x0 - b.x0) > 1e-12 * a.x0)
        throw ConfigError("compare: trajectories use different spatial grids");
    FrameMatch fm;
    double tolt = 1e-9 * std::max(a.times.back(), 1.0);
    size_t jb = 0;
    for (size_t ia = 0; ia < a.times.size(); ++ia) {
        while (jb < b.times.size() && b.times[jb] < a.times[ia] - tolt) ++jb;
        if (jb < b.times.size() && std::fabs(b.times[jb] - a.times[ia]) <= tolt) {
            fm.times.push_back(a.times[ia]);
            fm.idx.push_back({int(ia), int(jb)});
        }
    }
    if (fm.idx.empty()) throw ConfigError("compare: no common snapshot times");
    return fm;
}

}  // namespace

std::string cmd_precompute(const SimulationConfig& c, const std::string& out_path) {
    VectorPotential vp = c.vector_potential();
    QuadConfig quad = c.quad_config();
    CompressionConfig comp = c.compression_config();
    if (c.mode == "tbc_direct") comp.eps = 0.0;  // dense-stored blocks
    auto t0 = clock_t_::now();
    BoundaryOperator op = BoundaryOperator::precompute(c.N, c.dt, vp, quad, comp);
    double tp = secs(t0, clock_t_::now());
    save_operator(op, out_path);

    std::ostringstream rep;
    rep << "operator: N=" << op.N << " dt=" << c.dt << " leaf=" << op.leaf_eff
        << " eps=" << comp.eps << " mode=" << c.mode << "\n";
    rep << "config_hash = " << config_hash(c) << "\n";
    rep << "precompute_seconds = " << tp << "\n";
    CompressedBlock::Storage st = op.block_storage();
    rep << "storage: " << st.factor_complexes << " complexes, dense-equivalent "
        << st.dense_equivalent << ", ratio "
        << (st.dense_equivalent ? double(st.factor_complexes) / st.dense_equivalent : 0.0)
        << "\n";
    for (size_t k = 0; k < op.part.blocks.size(); ++k) {
        const CompressedBlock& cb = op.blocks[k];
        if (cb.rows() == 0) continue;
        const Block& blk = op.part.blocks[k];
        rep << "block " << k << " rows " << blk.row_lo << ".." << blk.row_hi << " cols "
            << blk.col_lo << ".." << blk.col_hi;
        if (cb.is_dense()) {
            rep << " dense\n";
            continue;
        }
        rep << (cb.rank_capped() ? " (rank-capped nodes kept exact)" : "") << "\n";
        auto levels = cb.rank_summary();
        for (size_t l = 0; l < levels.size(); ++l) {
            const auto& lr = levels[l];
            rep << (l + 1 == levels.size() ? "  leaf factors: " : "  level " + std::to_string(l) + ": ");
            rep << "nodes=" << lr.nodes << " rank " << lr.min_rank << ".." << lr.max_rank
                << " mean " << lr.mean_rank << " identities " << lr.identities << " stored "
                << lr.complexes << "\n";
        }
    }
    rep << "operator_hash = " << file_hash(out_path) << "\n";
    return rep.str();
}

std::string cmd_run(const SimulationConfig& c, const std::string& ops_override,
                    const std::string& mode_override) {
    std::string mode = mode_override.empty() ? c.mode : mode_override;
    if (mode != "tbc_butterfly" && mode != "tbc_direct" && mode != "dirichlet")
        throw ConfigError("run: unknown mode " + mode);

    SpatialGrid g = c.grid();
    VectorPotential vp = c.vector_potential();
    BindingPotential V = c.binding_potential();
    std::vector<cdouble> u0(size_t(g.J) + 1);
    for (int j = 0; j <= g.J; ++j) u0[size_t(j)] = gaussian_wavepacket(g.node(j), c.initial);

    std::unique_ptr<SnapshotWriter> snap;
    if (c.snapshot_stride > 0 && !c.snapshot_path.empty())
        snap = std::make_unique<SnapshotWriter>(c.snapshot_path, g, c.snapshot_stride, c.N);
    StepObserver observer;
    if (snap)
        observer = [&](int m, const std::vector<cdouble>& u) {
            if (m % c.snapshot_stride == 0 || m == c.N) snap->write(m * c.dt, u);
        };

    std::ostringstream sum;
    sum << "mode = " << mode << "\nN = " << c.N << "\ndt = " << c.dt << "\nJ = " << g.J
        << "\ndx = " << g.dx << "\nconfig_hash = " << config_hash(c) << "\n";

    auto t0 = clock_t_::now();
    if (mode == "dirichlet") {
        if (!(c.L > c.x0)) throw ConfigError("run: boundary.L > grid.x0 required for dirichlet");
        auto u0f = [&](double x) { return gaussian_wavepacket(x, c.initial); };
        DirichletRun dr = run_dirichlet_reference(g, c.L, V, vp, c.N, c.dt, u0f, observer);
        sum << "L = " << c.L << "\nmax_edge = " << dr.max_edge << "\nfinal_l2 = "
            << l2_norm(dr.u_omega, g.dx) << "\nfinal_linf = " << linf(dr.u_omega) << "\n";
        sum << "total_seconds = " << secs(t0, clock_t_::now()) << "\n";
    } else {
        std::string ops = ops_override.empty() ? c.operator_path : ops_override;
        BoundaryOperator op = load_matching_operator(c, ops, vp);
        TbcRun run = run_tbc(g, V, vp, op, u0, observer);
        if (!c.trace_path.empty()) write_traces_csv(c.trace_path, run.traces, c.dt);
        sum << "operator_hash = " << file_hash(ops) << "\nfinal_l2 = "
            << l2_norm(run.u, g.dx) << "\nfinal_linf = " << linf(run.u)
            << "\ntbc_seconds = " << run.tbc_seconds << "\nmarch_seconds = "
            << run.march_seconds << "\ntotal_seconds = " << secs(t0, clock_t_::now()) << "\n";
    }
    if (snap) sum << "snapshots = " << snap->records() << "\n";
    snap.reset();
    if (!c.summary_path.empty()) write_text(c.summary_path, sum.str());
    return sum.str();
}

std::string cmd_reference(const SimulationConfig& c, const std::string& kind, double L) {
    if (kind != "analytic" && kind != "dirichlet")
        throw ConfigError("reference: kind must be analytic or dirichlet");
    if (c.snapshot_stride <= 0 || c.snapshot_path.empty())
        throw ConfigError("reference: output.snapshot_stride and output.snapshot_path required");
    SpatialGrid g = c.grid();
    VectorPotential vp = c.vector_potential();

    std::ostringstream sum;
    sum << "reference = " << kind << "\nN = " << c.N << "\ndt = " << c.dt
        << "\nconfig_hash = " << config_hash(c) << "\n";
    SnapshotWriter snap(c.snapshot_path, g, c.snapshot_stride, c.N);
    if (kind == "analytic") {
        if (c.bp_kind != "zero")
            throw ConfigError("reference: analytic kind requires a zero binding potential");
        std::vector<cdouble> u(size_t(g.J) + 1);
        for (int m = 0; m <= c.N; ++m) {
            if (m % c.snapshot_stride != 0 && m != c.N) continue;
            double t = m * c.dt;
            for (int j = 0; j <= g.J; ++j)
                u[size_t(j)] = shifted_reference(g.node(j), t, c.initial, vp);
            snap.write(t, u);
        }
        sum << "final_l2 = " << l2_norm(u, g.dx) << "\n";
    } else {
        double Luse = L > 0.0 ? L : c.L;
        if (!(Luse > c.x0)) throw ConfigError("reference: L > x0 required for dirichlet kind");
        BindingPotential V = c.binding_potential();
        auto u0f = [&](double x) { return gaussian_wavepacket(x, c.initial); };
        StepObserver observer = [&](int m, const std::vector<cdouble>& u) {
            if (m % c.snapshot_stride == 0 || m == c.N) snap.write(m * c.dt, u);
        };
        DirichletRun dr = run_dirichlet_reference(g, Luse, V, vp, c.N, c.dt, u0f, observer);
        sum << "L = " << Luse << "\nmax_edge = " << dr.max_edge << "\nfinal_l2 = "
            << l2_norm(dr.u_omega, g.dx) << "\n";
    }
    sum << "snapshots = " << snap.records() << "\n";
    if (!c.summary_path.empty()) write_text(c.summary_path, sum.str());
    return sum.str();
}

CompareReport cmd_compare(const std::string& path_a, const std::string& path_b, double lo,
                          double hi, const std::string& curve_csv) {
    SnapshotStream a = read_snapshots(path_a);
    SnapshotStream b = read_snapshots(path_b);
    FrameMatch fm = match_frames(a, b);
    CompareReport rep;
    double t_at = 0.0;
    std::ostringstream curve;
    curve << "t,l2_error\n";
    for (size_t k = 0; k < fm.idx.size(); ++k) {
        double e = frame_l2(a, a.frames[size_t(fm.idx[k].first)],
                            b.frames[size_t(fm.idx[k].second)], lo, hi);
        char line[64];
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", fm.times[k], e);
        curve << line;
        if (e > rep.max_l2) {
            rep.max_l2 = e;
            t_at = fm.times[k];
        }
    }
    if (!curve_csv.empty()) write_text(curve_csv, curve.str());
    std::ostringstream txt;
    txt << "frames = " << fm.idx.size() << "\nmax_l2 = " << rep.max_l2 << "\nat_t = " << t_at
        << "\n";
    rep.text = txt.str();
    return rep;
}

CompareReport cmd_compare_series(const std::vector<std::string>& paths, double lo, double hi) {
    if (paths.size() < 3)
        throw ConfigError("compare: a series needs at least two trajectories plus a reference");
    const std::string& ref = paths.back();
    std::vector<double> errs;
    for (size_t k = 0; k + 1 < paths.size(); ++k)
        errs.push_back(cmd_compare(paths[k], ref, lo, hi).max_l2);
    CompareReport rep;
    std::ostringstream txt;
    txt << "series vs " << ref << "\n";
    for (size_t k = 0; k < errs.size(); ++k) {
        txt << "  " << paths[k] << ": max_l2 = " << errs[k];
        if (k > 0 && errs[k] > 0.0) {
            double ratio = errs[k - 1] / errs[k];
            txt << "  ratio " << ratio << "  order " << std::log2(ratio);
        }
        txt << "\n";
        rep.max_l2 = std::max(rep.max_l2, errs[k]);
    }
    rep.text = txt.str();
    return rep;
}

BenchSummary cmd_bench(const SimulationConfig& c, const std::vector<int>& n_list) {
    if (n_list.empty()) throw ConfigError("bench: empty N list");
    if (!(c.T > 0.0)) throw ConfigError("bench: time.T required");
    VectorPotential vp = c.vector_potential();
    QuadConfig quad = c.quad_config();
    CompressionConfig comp = c.compression_config();
    std::string scratch =
        (std::filesystem::temp_directory_path() / "tbc_bench_triangle.bin").string();

    BenchSummary out;
    std::ostringstream txt;
    txt << "N        prec_s   bfly_s   direct_s march_s  storage  ratio\n";
    std::vector<double> bfly, direct;
    for (int N : n_list) {
        if (N < 2) throw ConfigError("bench: N must be >= 2");
        double dt = c.T / N;
        auto t0 = clock_t_::now();
        BoundaryOperator op = BoundaryOperator::precompute(N, dt, vp, quad, comp);
        double tp = secs(t0, clock_t_::now());
        BenchReport rb = bench_butterfly(op, c.J);
        rb.precompute_s = tp;
        BenchReport rd = bench_direct(N, dt, c.J, scratch);
        bfly.push_back(rb.tbc_s);
        direct.push_back(rd.tbc_s);
        char line[160];
        std::snprintf(line, sizeof line, "%-8d %-8.2f %-8.3f %-8.3f %-8.3f %-8llu %.4f\n", N, tp,
                      rb.tbc_s, rd.tbc_s, rb.march_s, (unsigned long long)rb.storage_bytes,
                      rb.dense_bytes ? double(rb.storage_bytes) / rb.dense_bytes : 0.0);
        txt << line;
    }
    for (size_t k = 1; k < n_list.size(); ++k) {
        if (n_list[k] != 2 * n_list[k - 1]) continue;
        double gb = bfly[k] / bfly[k - 1], gd = direct[k] / direct[k - 1];
        char line[120];
        std::snprintf(line, sizeof line,
                      "growth %d -> %d: butterfly %.2fx direct %.2fx\n", n_list[k - 1],
                      n_list[k], gb, gd);
        txt << line;
        if (gb > 2.6) out.butterfly_ok = false;
    }
    if (!out.butterfly_ok) txt << "FAIL: butterfly growth factor exceeds 2.6 per doubling\n";
    out.text = txt.str();
    return out;
}

}  // namespace tbc
