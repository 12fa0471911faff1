#ifndef TBC_DRIVER_HPP
#define TBC_DRIVER_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "tbc/config.hpp"

namespace tbc {

/// Operator file incompatible with the requested run (N, dt, or potential
/// descriptor differ); what() carries the descriptor diff.
struct OperatorMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Build and save the boundary operator for the configured potential and time
/// grid; tbc_direct mode stores the blocks densely. Returns a human-readable
/// report (storage ratio, per-block rank summary, timing).
std::string cmd_precompute(const SimulationConfig& c, const std::string& out_path);

/// March the configured problem. mode_override/ops_override (empty = use the
/// config) select the boundary closure and operator file. Writes snapshots,
/// traces, and summary as configured; returns the summary text.
std::string cmd_run(const SimulationConfig& c, const std::string& ops_override = "",
                    const std::string& mode_override = "");

/// Emit a reference trajectory: kind "analytic" samples the shifted free
/// wavepacket (requires zero binding potential), kind "dirichlet" marches the
/// enlarged domain [-L, L] with zero boundary values. L <= 0 uses config L.
std::string cmd_reference(const SimulationConfig& c, const std::string& kind, double L = 0.0);

struct CompareReport {
    double max_l2 = 0.0;
    std::string text;
};

/// Max-L2 distance between two snapshot trajectories on common frames,
/// restricted to [lo, hi] (lo >= hi means the full grid). Optionally writes
/// the per-time error curve as CSV.
CompareReport cmd_compare(const std::string& path_a, const std::string& path_b, double lo = 0.0,
                          double hi = 0.0, const std::string& curve_csv = "");

/// Series comparison: each of `paths` against the last-listed reference;
/// prints errors, successive ratios, and convergence orders.
CompareReport cmd_compare_series(const std::vector<std::string>& paths, double lo = 0.0,
                                 double hi = 0.0);

struct BenchSummary {
    bool butterfly_ok = true;  // growth factor <= 2.6 per doubling
    std::string text;
};

/// Precompute + march each N in both butterfly and direct modes (config
/// potential, T fixed, dt = T/N) and report the Table-2-style timings.
BenchSummary cmd_bench(const SimulationConfig& c, const std::vector<int>& n_list);

}  // namespace tbc

#endif
