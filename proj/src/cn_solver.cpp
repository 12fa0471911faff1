#include "tbc/cn_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tbc {

SpatialGrid SpatialGrid::make(double x0, int J) {
    if (x0 <= 0.0 || J < 16) throw std::invalid_argument("SpatialGrid: x0 > 0, J >= 16");
    return {x0, J, 2.0 * x0 / J};
}

BindingPotential BindingPotential::zero() { return {}; }

BindingPotential BindingPotential::gaussian(double Vmax, double beta, double center) {
    if (beta <= 0.0) throw std::invalid_argument("BindingPotential: beta > 0");
    BindingPotential p;
    p.kind_ = Kind::Gaussian;
    p.vmax_ = std::fabs(Vmax);
    p.amp_ = Vmax;
    p.beta_ = beta;
    p.center_ = center;
    return p;
}

BindingPotential BindingPotential::tabulated(std::vector<double> x, std::vector<double> v) {
    if (x.size() != v.size() || x.size() < 2)
        throw std::invalid_argument("BindingPotential: need >= 2 samples");
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] <= x[i - 1]) throw std::invalid_argument("BindingPotential: x not increasing");
    BindingPotential p;
    p.kind_ = Kind::Tabulated;
    for (double vi : v) p.vmax_ = std::max(p.vmax_, std::fabs(vi));
    p.xs_ = std::move(x);
    p.vs_ = std::move(v);
    return p;
}

double BindingPotential::eval(double x) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Gaussian: {
            double z = (x - center_) / beta_;
            return amp_ * std::exp(-0.5 * z * z);
        }
        case Kind::Tabulated: {
            if (x <= xs_.front() || x >= xs_.back()) return 0.0;
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            size_t i = size_t(it - xs_.begin());
            double f = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            return vs_[i - 1] * (1.0 - f) + vs_[i] * f;
        }
    }
    return 0.0;
}

void BindingPotential::check_support(double x0) const {
    if (vmax_ == 0.0) return;
    double tol = 1e-14 * vmax_;
    if (std::fabs(eval(x0)) > tol || std::fabs(eval(-x0)) > tol)
        throw std::invalid_argument("BindingPotential: not compactly supported in [-x0, x0]");
}

CNStepper::CNStepper(const SpatialGrid& g, const BindingPotential& V, const VectorPotential& vp,
                     double dt)
    : g_(g), vp_(vp), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("CNStepper: dt > 0");
    size_t n = size_t(g.J) + 1;
    V_.resize(n);
    for (int j = 0; j <= g.J; ++j) V_[size_t(j)] = V.eval(g.node(j));
    a_.resize(n);
    b_.resize(n);
    c_.resize(n);
    r_.resize(n);
}

void CNStepper::assemble(const std::vector<cdouble>& u, int m) {
    if (int(u.size()) != g_.J + 1) throw std::invalid_argument("CNStepper: state size");
    int J = g_.J;
    double dx = g_.dx, w = 1.0 / (dx * dx);
    double Am = vp_.eval_A(m * dt_), Ap = vp_.eval_A((m - 1) * dt_);
    cdouble idt(0.0, 1.0 / dt_);
    // rows of (i/dt) I - H_m/2 and rhs ((i/dt) I + H_{m-1}/2) u^{m-1}
    cdouble am = 0.5 * w + cdouble(0.0, Am / (4.0 * dx));
    cdouble cm = 0.5 * w - cdouble(0.0, Am / (4.0 * dx));
    cdouble ap = -0.5 * w - cdouble(0.0, Ap / (4.0 * dx));
    cdouble cp = -0.5 * w + cdouble(0.0, Ap / (4.0 * dx));
    for (int j = 1; j < J; ++j) {
        a_[size_t(j)] = am;
        b_[size_t(j)] = idt - w - 0.5 * V_[size_t(j)];
        c_[size_t(j)] = cm;
        r_[size_t(j)] = (idt + w + 0.5 * V_[size_t(j)]) * u[size_t(j)] +
                        ap * u[size_t(j) - 1] + cp * u[size_t(j) + 1];
    }
}

void CNStepper::solve(std::vector<cdouble>& u, int m) {
    int J = g_.J;
    // Thomas elimination on rows 0..J (a_[0] and c_[J] unused)
    for (int j = 1; j <= J; ++j) {
        cdouble piv = b_[size_t(j) - 1];
        if (std::abs(piv) < 1e-300)
            throw std::runtime_error("cn_step: singular tridiagonal system at step " +
                                     std::to_string(m));
        cdouble f = a_[size_t(j)] / piv;
        b_[size_t(j)] -= f * c_[size_t(j) - 1];
        r_[size_t(j)] -= f * r_[size_t(j) - 1];
    }
    if (std::abs(b_[size_t(J)]) < 1e-300)
        throw std::runtime_error("cn_step: singular tridiagonal system at step " +
                                 std::to_string(m));
    u[size_t(J)] = r_[size_t(J)] / b_[size_t(J)];
    for (int j = J - 1; j >= 0; --j)
        u[size_t(j)] = (r_[size_t(j)] - c_[size_t(j)] * u[size_t(j) + 1]) / b_[size_t(j)];
}

void CNStepper::step(std::vector<cdouble>& u, int m, const Robin& left, const Robin& right) {
    assemble(u, m);
    int J = g_.J;
    double h2 = 2.0 * g_.dx;
    {
        // left row: alpha u_0 + beta (-3u_0 + 4u_1 - u_2)/(2dx) = gamma,
        // u_2 eliminated against interior row 1
        cdouble f0 = left.alpha - 3.0 * left.beta / h2;
        cdouble f1 = 4.0 * left.beta / h2;
        cdouble f2 = -left.beta / h2;
        cdouble s = f2 / c_[1];
        b_[0] = f0 - s * a_[1];
        c_[0] = f1 - s * b_[1];
        r_[0] = left.gamma - s * r_[1];
    }
    {
        // right row: alpha u_J + beta (3u_J - 4u_{J-1} + u_{J-2})/(2dx) = gamma
        cdouble e2 = right.alpha + 3.0 * right.beta / h2;
        cdouble e1 = -4.0 * right.beta / h2;
        cdouble e0 = right.beta / h2;
        cdouble s = e0 / a_[size_t(J) - 1];
        a_[size_t(J)] = e1 - s * b_[size_t(J) - 1];
        b_[size_t(J)] = e2 - s * c_[size_t(J) - 1];
        r_[size_t(J)] = right.gamma - s * r_[size_t(J) - 1];
    }
    solve(u, m);
}

void CNStepper::step_dirichlet(std::vector<cdouble>& u, int m) {
    assemble(u, m);
    int J = g_.J;
    b_[0] = 1.0;
    c_[0] = 0.0;
    r_[0] = 0.0;
    a_[size_t(J)] = 0.0;
    b_[size_t(J)] = 1.0;
    r_[size_t(J)] = 0.0;
    solve(u, m);
}

namespace {

double max_abs(const std::vector<cdouble>& u) {
    double m = 0.0;
    for (const cdouble& z : u) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TbcRun run_tbc(const SpatialGrid& g, const BindingPotential& V, const VectorPotential& vp,
               const BoundaryOperator& op, const std::vector<cdouble>& u0,
               const StepObserver& observer) {
    if (op.descriptor != vp.descriptor())
        throw std::invalid_argument("run_tbc: operator was precomputed for a different A(t)");
    if (int(u0.size()) != g.J + 1) throw std::invalid_argument("run_tbc: u0 size != J+1");
    V.check_support(g.x0);
    double m0 = max_abs(u0);
    if (std::max(std::abs(u0.front()), std::abs(u0.back())) > 1e-13 * m0 && m0 > 0.0)
        throw std::invalid_argument("run_tbc: u0 not supported inside (-x0, x0)");

    int N = op.N, J = g.J;
    double dt = op.grid.dt;
    CNStepper stepper(g, V, vp, dt);
    BoundaryHistory histL(op), histR(op);
    TbcRun out;
    out.u = u0;
    auto& tr = out.traces;
    tr.uL.assign(size_t(N) + 1, cdouble(0.0));
    tr.vL.assign(size_t(N) + 1, cdouble(0.0));
    tr.uR.assign(size_t(N) + 1, cdouble(0.0));
    tr.vR.assign(size_t(N) + 1, cdouble(0.0));
    tr.uL[0] = u0.front();
    tr.uR[0] = u0.back();
    tr.vL[0] = (-3.0 * u0[0] + 4.0 * u0[1] - u0[2]) / (2.0 * g.dx);
    tr.vR[0] = (3.0 * u0[size_t(J)] - 4.0 * u0[size_t(J) - 1] + u0[size_t(J) - 2]) / (2.0 * g.dx);
    if (observer) observer(0, out.u);

    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };
    for (int m = 1; m <= N; ++m) {
        double Am = vp.eval_A(m * dt);
        auto t0 = clock::now();
        BoundaryHistory::Robin rl = histL.robin_coeffs(m, Side::Left, Am);
        BoundaryHistory::Robin rr = histR.robin_coeffs(m, Side::Right, Am);
        auto t1 = clock::now();
        stepper.step(out.u, m, rl, rr);
        auto t2 = clock::now();
        // v from the Robin relation itself, keeping the recorded history
        // exactly consistent with the identity the TBC enforces
        cdouble uL = out.u.front(), uR = out.u.back();
        cdouble vL = (rl.gamma - rl.alpha * uL) / rl.beta;
        cdouble vR = (rr.gamma - rr.alpha * uR) / rr.beta;
        histL.push_step(uL, vL, Am);
        histR.push_step(uR, vR, Am);
        out.tbc_seconds += secs(t0, t1) + secs(t2, clock::now());
        out.march_seconds += secs(t1, t2);
        tr.uL[size_t(m)] = uL;
        tr.vL[size_t(m)] = vL;
        tr.uR[size_t(m)] = uR;
        tr.vR[size_t(m)] = vR;
        if (observer) observer(m, out.u);
    }
    return out;
}

DirichletRun run_dirichlet_reference(const SpatialGrid& g, double L, const BindingPotential& V,
                                     const VectorPotential& vp, int N, double dt,
                                     const std::function<cdouble(double)>& u0,
                                     const StepObserver& observer) {
    if (L <= g.x0) throw std::invalid_argument("run_dirichlet_reference: L > x0 required");
    double shift_nodes = (L - g.x0) / g.dx;
    int off = int(std::llround(shift_nodes));
    if (std::fabs(shift_nodes - off) > 1e-9)
        throw std::invalid_argument("run_dirichlet_reference: L not aligned with the grid");
    int JL = g.J + 2 * off;
    SpatialGrid big{L, JL, g.dx};
    CNStepper stepper(big, V, vp, dt);
    std::vector<cdouble> u(size_t(JL) + 1);
    for (int j = 0; j <= JL; ++j) u[size_t(j)] = u0(big.node(j));
    u.front() = 0.0;
    u.back() = 0.0;

    DirichletRun out;
    std::vector<cdouble> restr(size_t(g.J) + 1);
    auto emit = [&](int m) {
        std::copy(u.begin() + off, u.begin() + off + g.J + 1, restr.begin());
        if (observer) observer(m, restr);
    };
    emit(0);
    for (int m = 1; m <= N; ++m) {
        stepper.step_dirichlet(u, m);
        out.max_edge = std::max({out.max_edge, std::abs(u[1]), std::abs(u[size_t(JL) - 1])});
        emit(m);
    }
    out.u_omega = restr;
    return out;
}

}  // namespace tbc
