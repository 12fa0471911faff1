#ifndef TBC_CONFIG_HPP
#define TBC_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>

#include "tbc/butterfly.hpp"
#include "tbc/cn_solver.hpp"
#include "tbc/quadrature.hpp"
#include "tbc/reference.hpp"
#include "tbc/vector_potential.hpp"

namespace tbc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` text configuration ('#' starts a comment).
/// Either member of the pairs (grid.J, grid.dx) and (time.N, time.dt) may be
/// given; the other is derived. Redundant triples must be consistent
/// (J dx = 2 x0, N dt = T to 1e-9 relative).
struct SimulationConfig {
    // grid
    double x0 = 1.0;
    int J = 0;
    // time
    int N = 0;
    double dt = 0.0;
    double T = 0.0;
    // vector_potential: kind in {zero, pulse, table}
    std::string vp_kind = "zero";
    PulseParams pulse;
    std::string vp_file;
    // binding_potential: kind in {zero, gaussian, table}
    std::string bp_kind = "zero";
    double Vmax = 0.0, beta = 0.0, center = 0.0;
    std::string bp_file;
    // initial Gaussian wavepacket
    WavepacketParams initial;
    // boundary
    std::string mode = "tbc_butterfly";  // tbc_butterfly | tbc_direct | dirichlet
    double L = 0.0;                      // enlarged half-width for dirichlet
    std::string operator_path;
    double eps = 1e-8;
    int leaf = 64;
    double quad_tol = 1e-11;
    // output
    int snapshot_stride = 0;  // 0 disables snapshots
    std::string snapshot_path, trace_path, summary_path;

    static SimulationConfig parse_string(const std::string& text);
    static SimulationConfig parse_file(const std::string& path);

    /// Canonical serialization: sorted keys, %.17g floats. parse(canonical())
    /// is the identity; for the zero and pulse families the vector_potential.*
    /// lines equal the VectorPotential descriptor used for operator
    /// compatibility.
    std::string canonical() const;

    SpatialGrid grid() const { return SpatialGrid::make(x0, J); }
    VectorPotential vector_potential() const;
    BindingPotential binding_potential() const;
    QuadConfig quad_config() const;
    CompressionConfig compression_config() const;
};

}  // namespace tbc

#endif
