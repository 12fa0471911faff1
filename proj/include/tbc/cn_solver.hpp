#ifndef TBC_CN_SOLVER_HPP
#define TBC_CN_SOLVER_HPP

#include <complex>
#include <functional>
#include <vector>

#include "tbc/boundary_operator.hpp"
#include "tbc/vector_potential.hpp"

namespace tbc {

/// Uniform grid on [-x0, x0] with nodes x_j = -x0 + j dx, j = 0..J.
struct SpatialGrid {
    double x0 = 0.0;
    int J = 0;
    double dx = 0.0;

    static SpatialGrid make(double x0, int J);
    double node(int j) const { return -x0 + j * dx; }
};

/// Static binding potential V(x), compactly supported inside the domain.
class BindingPotential {
public:
    enum class Kind { Zero, Gaussian, Tabulated };

    static BindingPotential zero();
    static BindingPotential gaussian(double Vmax, double beta, double center = 0.0);
    /// Piecewise-linear through samples (x_i, v_i), x strictly increasing,
    /// zero outside the table.
    static BindingPotential tabulated(std::vector<double> x, std::vector<double> v);

    double eval(double x) const;
    double vmax() const { return vmax_; }
    Kind kind() const { return kind_; }
    /// Compact support inside [-x0, x0]: |V(+-x0)| <= 1e-14 Vmax, else throws.
    void check_support(double x0) const;

private:
    BindingPotential() = default;
    Kind kind_ = Kind::Zero;
    double vmax_ = 0.0, amp_ = 0.0, beta_ = 0.0, center_ = 0.0;
    std::vector<double> xs_, vs_;
};

/// One Crank-Nicolson update i(u^m - u^{m-1})/dt = (H_m u^m + H_{m-1} u^{m-1})/2
/// with H = -d_xx + iA(t) d_x + V on the grid, second-order centered stencils.
/// Boundary rows impose either a Robin condition alpha u + beta u_x = gamma
/// (u_x by the one-sided 3-point formula, with the third-band entry eliminated
/// against the adjacent interior row to keep the system tridiagonal) or
/// u = 0 (Dirichlet).
class CNStepper {
public:
    using Robin = BoundaryHistory::Robin;

    CNStepper(const SpatialGrid& g, const BindingPotential& V, const VectorPotential& vp,
              double dt);

    /// Advance u (nodes 0..J) from t_{m-1} to t_m with Robin closures.
    void step(std::vector<cdouble>& u, int m, const Robin& left, const Robin& right);
    /// Advance with zero Dirichlet closures.
    void step_dirichlet(std::vector<cdouble>& u, int m);

    const SpatialGrid& grid() const { return g_; }
    double dt() const { return dt_; }

private:
    void assemble(const std::vector<cdouble>& u, int m);
    void solve(std::vector<cdouble>& u, int m);

    SpatialGrid g_;
    const VectorPotential& vp_;
    double dt_;
    std::vector<double> V_;
    std::vector<cdouble> a_, b_, c_, r_;  // tridiagonal rows 0..J
};

struct BoundaryTraces {
    std::vector<cdouble> uL, vL, uR, vR;  // nodal traces 0..N, v = du/dx
};

struct TbcRun {
    std::vector<cdouble> u;  // final state
    BoundaryTraces traces;
    double tbc_seconds = 0.0;    // boundary work (robin_coeffs + push_step)
    double march_seconds = 0.0;  // interior Crank-Nicolson solves
};

using StepObserver = std::function<void(int m, const std::vector<cdouble>& u)>;

/// March op.N steps of the interior scheme closed by the transparent Robin
/// conditions streamed from the precomputed boundary operator (one history
/// per side). u0 is sampled on g and must satisfy |u0(+-x0)| <= 1e-13 max|u0|.
/// Refuses operators whose potential descriptor differs from vp.
TbcRun run_tbc(const SpatialGrid& g, const BindingPotential& V, const VectorPotential& vp,
               const BoundaryOperator& op, const std::vector<cdouble>& u0,
               const StepObserver& observer = {});

struct DirichletRun {
    std::vector<cdouble> u_omega;  // final state restricted to [-x0, x0]
    double max_edge = 0.0;         // max |u| seen adjacent to +-L (support check)
};

/// Same interior scheme on the enlarged domain [-L, L] (grid spacing g.dx,
/// nodes aligned with g) with u(+-L) = 0; the observer and the returned state
/// see the restriction to [-x0, x0]. u0 is sampled at enlarged-grid nodes.
DirichletRun run_dirichlet_reference(const SpatialGrid& g, double L, const BindingPotential& V,
                                     const VectorPotential& vp, int N, double dt,
                                     const std::function<cdouble(double)>& u0,
                                     const StepObserver& observer = {});

}  // namespace tbc

#endif
