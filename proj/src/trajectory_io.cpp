#include "tbc/trajectory_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tbc {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'J', '1'};

template <class T>
void put(std::ostream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!f) throw std::runtime_error("snapshot file: truncated");
    return v;
}

}  // namespace

SnapshotWriter::SnapshotWriter(const std::string& path, const SpatialGrid& g, int stride, int N)
    : out_(path, std::ios::binary | std::ios::trunc), J_(g.J) {
    if (!out_) throw std::runtime_error("snapshot file: cannot open " + path);
    out_.write(kMagic, 4);
    put<std::int32_t>(out_, g.J);
    put<double>(out_, g.dx);
    put<double>(out_, g.x0);
    put<std::int32_t>(out_, stride);
    put<std::int32_t>(out_, N);
}

void SnapshotWriter::write(double t, const std::vector<cdouble>& u) {
    if (int(u.size()) != J_ + 1) throw std::invalid_argument("snapshot: frame size != J+1");
    put<double>(out_, t);
    for (const cdouble& z : u) {
        put<double>(out_, z.real());
        put<double>(out_, z.imag());
    }
    if (!out_) throw std::runtime_error("snapshot file: write failed");
    ++records_;
}

SnapshotStream read_snapshots(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("snapshot file: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::string(magic, 4) != std::string(kMagic, 4))
        throw std::runtime_error("snapshot file: bad magic");
    SnapshotStream s;
    s.J = get<std::int32_t>(f);
    s.dx = get<double>(f);
    s.x0 = get<double>(f);
    s.stride = get<std::int32_t>(f);
    s.N = get<std::int32_t>(f);
    if (s.J < 2 || s.J > (1 << 28)) throw std::runtime_error("snapshot file: bad header");
    while (true) {
        double t;
        f.read(reinterpret_cast<char*>(&t), 8);
        if (f.eof()) break;
        if (!f) throw std::runtime_error("snapshot file: truncated record");
        std::vector<cdouble> u(size_t(s.J) + 1);
        for (cdouble& z : u) {
            double re = get<double>(f), im = get<double>(f);
            z = {re, im};
        }
        s.times.push_back(t);
        s.frames.push_back(std::move(u));
    }
    return s;
}

void export_snapshots_csv(const SnapshotStream& s, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    f << "t,x,re,im\n";
    char line[128];
    for (size_t k = 0; k < s.frames.size(); ++k)
        for (int j = 0; j <= s.J; ++j) {
            const cdouble& z = s.frames[k][size_t(j)];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s.times[k],
                          -s.x0 + j * s.dx, z.real(), z.imag());
            f << line;
        }
    if (!f) throw std::runtime_error("csv: write failed");
}

void write_traces_csv(const std::string& path, const BoundaryTraces& tr, double dt) {
    if (tr.uL.size() != tr.vL.size() || tr.uR.size() != tr.vR.size() ||
        tr.uL.size() != tr.uR.size())
        throw std::invalid_argument("traces: inconsistent lengths");
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    f << "m,t,side,u_re,u_im,v_re,v_im\n";
    char line[192];
    for (size_t m = 0; m < tr.uL.size(); ++m) {
        std::snprintf(line, sizeof line, "%zu,%.17g,L,%.17g,%.17g,%.17g,%.17g\n", m, m * dt,
                      tr.uL[m].real(), tr.uL[m].imag(), tr.vL[m].real(), tr.vL[m].imag());
        f << line;
        std::snprintf(line, sizeof line, "%zu,%.17g,R,%.17g,%.17g,%.17g,%.17g\n", m, m * dt,
                      tr.uR[m].real(), tr.uR[m].imag(), tr.vR[m].real(), tr.vR[m].imag());
        f << line;
    }
    if (!f) throw std::runtime_error("csv: write failed");
}

BoundaryTraces read_traces_csv(const std::string& path, double* dt_out) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("m,t,side", 0) != 0)
        throw std::runtime_error("trace csv: bad header");
    BoundaryTraces tr;
    double dt = 0.0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        size_t m;
        double t, ur, ui, vr, vi;
        char side;
        std::getline(ss, tok, ',');
        m = std::stoull(tok);
        std::getline(ss, tok, ',');
        t = std::stod(tok);
        std::getline(ss, tok, ',');
        if (tok != "L" && tok != "R") throw std::runtime_error("trace csv: bad side");
        side = tok[0];
        std::getline(ss, tok, ',');
        ur = std::stod(tok);
        std::getline(ss, tok, ',');
        ui = std::stod(tok);
        std::getline(ss, tok, ',');
        vr = std::stod(tok);
        if (!std::getline(ss, tok, ',')) throw std::runtime_error("trace csv: short row");
        vi = std::stod(tok);
        auto& uu = side == 'L' ? tr.uL : tr.uR;
        auto& vv = side == 'L' ? tr.vL : tr.vR;
        if (m != uu.size()) throw std::runtime_error("trace csv: rows out of order");
        uu.emplace_back(ur, ui);
        vv.emplace_back(vr, vi);
        if (m == 1) dt = t;
    }
    if (tr.uL.size() != tr.uR.size()) throw std::runtime_error("trace csv: unbalanced sides");
    if (dt_out) *dt_out = dt;
    return tr;
}

}  // namespace tbc
