#include "tbc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tbc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    double d = to_double(key, v);
    int i = int(std::llround(d));
    if (d != double(i)) throw ConfigError("config: " + key + " must be an integer");
    return i;
}

void read_table_file(const std::string& path, std::vector<double>& xs, std::vector<double>& ys) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open table file " + path);
    std::string line;
    while (std::getline(f, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y)) throw ConfigError("config: bad table row in " + path);
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 2) throw ConfigError("config: table file needs >= 2 samples: " + path);
}

}  // namespace

SimulationConfig SimulationConfig::parse_string(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, val).second)
            throw ConfigError("config: duplicate key " + key);
    }

    SimulationConfig c;
    bool has_J = false, has_dx = false, has_N = false, has_dt = false, has_T = false;
    double dx = 0.0;
    for (const auto& [key, val] : kv) {
        if (key == "grid.x0") c.x0 = to_double(key, val);
        else if (key == "grid.J") { c.J = to_int(key, val); has_J = true; }
        else if (key == "grid.dx") { dx = to_double(key, val); has_dx = true; }
        else if (key == "time.N") { c.N = to_int(key, val); has_N = true; }
        else if (key == "time.dt") { c.dt = to_double(key, val); has_dt = true; }
        else if (key == "time.T") { c.T = to_double(key, val); has_T = true; }
        else if (key == "vector_potential.kind") c.vp_kind = val;
        else if (key == "vector_potential.A0") c.pulse.A0 = to_double(key, val);
        else if (key == "vector_potential.omega") c.pulse.omega = to_double(key, val);
        else if (key == "vector_potential.T") c.pulse.T_pulse = to_double(key, val);
        else if (key == "vector_potential.file") c.vp_file = val;
        else if (key == "binding_potential.kind") c.bp_kind = val;
        else if (key == "binding_potential.Vmax") c.Vmax = to_double(key, val);
        else if (key == "binding_potential.beta") c.beta = to_double(key, val);
        else if (key == "binding_potential.center") c.center = to_double(key, val);
        else if (key == "binding_potential.file") c.bp_file = val;
        else if (key == "initial.alpha") c.initial.alpha = to_double(key, val);
        else if (key == "initial.k") c.initial.k = to_double(key, val);
        else if (key == "initial.mu") c.initial.mu = to_double(key, val);
        else if (key == "boundary.mode") c.mode = val;
        else if (key == "boundary.L") c.L = to_double(key, val);
        else if (key == "boundary.operator_path") c.operator_path = val;
        else if (key == "boundary.eps") c.eps = to_double(key, val);
        else if (key == "boundary.leaf") c.leaf = to_int(key, val);
        else if (key == "boundary.quad_tol") c.quad_tol = to_double(key, val);
        else if (key == "output.snapshot_stride") c.snapshot_stride = to_int(key, val);
        else if (key == "output.snapshot_path") c.snapshot_path = val;
        else if (key == "output.trace_path") c.trace_path = val;
        else if (key == "output.summary_path") c.summary_path = val;
        else throw ConfigError("config: unknown key " + key);
    }

    if (!(c.x0 > 0.0)) throw ConfigError("config: grid.x0 must be positive");
    if (!has_J && !has_dx) throw ConfigError("config: need grid.J or grid.dx");
    if (has_dx) {
        if (!(dx > 0.0)) throw ConfigError("config: grid.dx must be positive");
        int Jd = int(std::llround(2.0 * c.x0 / dx));
        if (std::fabs(Jd * dx - 2.0 * c.x0) > 1e-9 * 2.0 * c.x0)
            throw ConfigError("config: grid.dx does not divide 2 x0");
        if (has_J && c.J != Jd) throw ConfigError("config: grid.J inconsistent with grid.dx");
        c.J = Jd;
    }
    if (c.J < 16) throw ConfigError("config: grid.J must be >= 16");

    int given = int(has_N) + int(has_dt) + int(has_T);
    if (given < 2) throw ConfigError("config: need two of time.N, time.dt, time.T");
    if (!has_N) {
        double Nd = c.T / c.dt;
        c.N = int(std::llround(Nd));
        if (std::fabs(c.N * c.dt - c.T) > 1e-9 * c.T)
            throw ConfigError("config: time.dt does not divide time.T");
    } else if (!has_dt) {
        c.dt = c.T / c.N;
    } else if (!has_T) {
        c.T = c.N * c.dt;
    } else if (std::fabs(c.N * c.dt - c.T) > 1e-9 * std::fabs(c.T)) {
        throw ConfigError("config: time.N * time.dt != time.T");
    }
    if (c.N < 1 || !(c.dt > 0.0)) throw ConfigError("config: need N >= 1 and dt > 0");

    if (c.vp_kind != "zero" && c.vp_kind != "pulse" && c.vp_kind != "table")
        throw ConfigError("config: vector_potential.kind must be zero, pulse, or table");
    if (c.vp_kind == "table" && c.vp_file.empty())
        throw ConfigError("config: vector_potential.file required for kind = table");
    if (c.bp_kind != "zero" && c.bp_kind != "gaussian" && c.bp_kind != "table")
        throw ConfigError("config: binding_potential.kind must be zero, gaussian, or table");
    if (c.bp_kind == "gaussian" && !(c.beta > 0.0))
        throw ConfigError("config: binding_potential.beta must be positive");
    if (c.bp_kind == "table" && c.bp_file.empty())
        throw ConfigError("config: binding_potential.file required for kind = table");
    if (c.mode != "tbc_butterfly" && c.mode != "tbc_direct" && c.mode != "dirichlet")
        throw ConfigError("config: boundary.mode must be tbc_butterfly, tbc_direct, or dirichlet");
    if (c.mode == "dirichlet" && !(c.L > c.x0))
        throw ConfigError("config: boundary.L must exceed grid.x0 for dirichlet mode");
    if (!(c.eps > 0.0) || c.leaf < 4 || !(c.quad_tol > 0.0))
        throw ConfigError("config: boundary.eps, boundary.leaf, boundary.quad_tol out of range");
    if (c.snapshot_stride < 0) throw ConfigError("config: output.snapshot_stride must be >= 0");
    return c;
}

SimulationConfig SimulationConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

std::string SimulationConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["grid.x0"] = fmt_double(x0);
    kv["grid.J"] = std::to_string(J);
    kv["time.N"] = std::to_string(N);
    kv["time.dt"] = fmt_double(dt);
    kv["time.T"] = fmt_double(T);
    kv["vector_potential.kind"] = vp_kind;
    if (vp_kind == "pulse") {
        kv["vector_potential.A0"] = fmt_double(pulse.A0);
        kv["vector_potential.omega"] = fmt_double(pulse.omega);
        kv["vector_potential.T"] = fmt_double(pulse.T_pulse);
    } else if (vp_kind == "table") {
        kv["vector_potential.file"] = vp_file;
    }
    kv["binding_potential.kind"] = bp_kind;
    if (bp_kind == "gaussian") {
        kv["binding_potential.Vmax"] = fmt_double(Vmax);
        kv["binding_potential.beta"] = fmt_double(beta);
        kv["binding_potential.center"] = fmt_double(center);
    } else if (bp_kind == "table") {
        kv["binding_potential.file"] = bp_file;
    }
    kv["initial.alpha"] = fmt_double(initial.alpha);
    kv["initial.k"] = fmt_double(initial.k);
    kv["initial.mu"] = fmt_double(initial.mu);
    kv["boundary.mode"] = mode;
    if (mode == "dirichlet") kv["boundary.L"] = fmt_double(L);
    if (!operator_path.empty()) kv["boundary.operator_path"] = operator_path;
    kv["boundary.eps"] = fmt_double(eps);
    kv["boundary.leaf"] = std::to_string(leaf);
    kv["boundary.quad_tol"] = fmt_double(quad_tol);
    if (snapshot_stride > 0) kv["output.snapshot_stride"] = std::to_string(snapshot_stride);
    if (!snapshot_path.empty()) kv["output.snapshot_path"] = snapshot_path;
    if (!trace_path.empty()) kv["output.trace_path"] = trace_path;
    if (!summary_path.empty()) kv["output.summary_path"] = summary_path;
    std::string out;
    for (const auto& [key, val] : kv) out += key + " = " + val + "\n";
    return out;
}

VectorPotential SimulationConfig::vector_potential() const {
    if (vp_kind == "zero") return VectorPotential::zero();
    if (vp_kind == "pulse") return VectorPotential::pulse(pulse);
    std::vector<double> ts, as;
    read_table_file(vp_file, ts, as);
    return VectorPotential::tabulated(std::move(ts), std::move(as));
}

BindingPotential SimulationConfig::binding_potential() const {
    if (bp_kind == "zero") return BindingPotential::zero();
    if (bp_kind == "gaussian") return BindingPotential::gaussian(Vmax, beta, center);
    std::vector<double> xs, vs;
    read_table_file(bp_file, xs, vs);
    return BindingPotential::tabulated(std::move(xs), std::move(vs));
}

QuadConfig SimulationConfig::quad_config() const {
    QuadConfig q;
    q.tol = quad_tol;
    q.base_order = 16;
    q.max_subdiv = 12;
    q.phase_budget = 2.0 * M_PI;  // order-16 panels hold ~3e-14 at this budget
    q.adaptive = false;
    return q;
}

CompressionConfig SimulationConfig::compression_config() const {
    CompressionConfig cc;
    cc.eps = eps;
    cc.leaf = leaf;
    return cc;
}

}  // namespace tbc
