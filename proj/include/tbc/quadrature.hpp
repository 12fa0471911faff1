#ifndef TBC_QUADRATURE_HPP
#define TBC_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tbc/kernels.hpp"
#include "tbc/time_grid.hpp"
#include "tbc/vector_potential.hpp"

namespace tbc {

struct QuadConfig {
    double tol = 1e-12;      // absolute accuracy per matrix entry
    int max_subdiv = 30;     // maximum bisection depth
    int base_order = 16;     // Gauss-Legendre order per panel
    double phase_budget = M_PI;  // kernel phase variation per panel
    bool adaptive = true;    // verify panels by two-level comparison
};

/// Thrown when the two-level difference cannot be driven below tol within
/// max_subdiv bisections; carries the offending entry.
struct QuadratureFailure : std::runtime_error {
    int m, n;
    QuadratureFailure(int m_, int n_, const std::string& what)
        : std::runtime_error(what), m(m_), n(n_) {}
};

// Computes entries of the hat-basis boundary matrices
//   S_N(m,n) = int K_A(0, t_m, s) eta_n(s) ds,
//   D_N(m,n) = int D*_A-kernel(t_m, s) eta_n(s) ds,
// over [max(0, t_{n-1}), min(t_m, t_{n+1})], 1 <= n <= m <= N. Panels are
// split so the kernel phase varies by at most phase_budget per panel; the
// 1/sqrt(t_m - s) endpoint singularity at n = m (and the hat subinterval
// ending at t_m for n = m-1) is removed by the substitution s = t_m - tau^2.
//
// The evaluator caches phi and hat values at panel nodes per hat subinterval,
// which amortizes the phi evaluations across all rows sharing a column.
// Not thread-safe; use one evaluator per thread.
class EntryEvaluator {
public:
    EntryEvaluator(const VectorPotential& vp, const TimeGrid& grid, const QuadConfig& q);

    cdouble entry_S(int m, int n) { return entry(m, n, false); }
    cdouble entry_D(int m, int n) { return entry(m, n, true); }
    /// Both entries in one pass (the integrands share nodes and phases,
    /// so this costs barely more than one of them).
    std::pair<cdouble, cdouble> entry_SD(int m, int n);

    /// Drop cached nodes (call between blocks to bound memory).
    void clear_cache();

    const TimeGrid& grid() const { return grid_; }
    const QuadConfig& config() const { return quad_; }

private:
    struct PanelSet {
        std::vector<double> s, phi, frac, w;  // frac = (s - t_{k-1}) / dt
    };

    cdouble entry(int m, int n, bool dstar);
    using cpair = std::pair<cdouble, cdouble>;
    cpair regular_both(int m, int k, bool rising);
    cpair regular_both_at_depth(int m, int k, bool rising, int depth);
    cpair singular_both(int m, double a, double eta_a, double eta_slope);
    cpair singular_both_at_depth(int m, double a, double eta_a, double eta_slope, int depth);
    cdouble regular_subinterval(int m, int k, bool rising, bool dstar);
    cdouble regular_at_depth(int m, int k, bool rising, bool dstar, int depth);
    cdouble singular_subinterval(int m, double a, double eta_a, double eta_slope, bool dstar);
    cdouble singular_at_depth(int m, double a, double eta_a, double eta_slope, bool dstar,
                              int depth);
    const PanelSet& panels(int k, int depth);
    int phase_depth(int m, int k) const;

    const VectorPotential& vp_;
    TimeGrid grid_;
    QuadConfig quad_;
    std::unordered_map<long long, PanelSet> cache_;
    PanelSet scratch_;  // reused for panel sets too large to cache
    size_t cached_nodes_ = 0;
    // per-subinterval phi samples for phase estimates (5 samples each)
    std::unordered_map<int, std::array<double, 5>> phi_samples_;
};

/// One-off entry evaluations (construct a transient evaluator for batches).
cdouble entry_S(const VectorPotential& vp, const TimeGrid& grid, int m, int n,
                const QuadConfig& q);
cdouble entry_D(const VectorPotential& vp, const TimeGrid& grid, int m, int n,
                const QuadConfig& q);

/// Globally adaptive Gauss quadrature of a complex integrand on [a, b]
/// (interval bisection, two-level error estimate).
cdouble adaptive_integrate(const std::function<cdouble(double)>& f, double a, double b,
                           double tol, int order = 16, int max_depth = 40);

}  // namespace tbc

#endif
