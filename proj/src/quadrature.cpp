#include "tbc/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "tbc/gauss.hpp"

namespace tbc {

namespace {

const double kInvSqrt4Pi = 1.0 / std::sqrt(4.0 * M_PI);
const cdouble kCS = kInvSqrt4Pi * std::polar(1.0, -0.25 * M_PI);  // S-kernel prefactor

inline cdouble cis(double ph) {
    return {std::cos(ph), std::sin(ph)};
}

}  // namespace

EntryEvaluator::EntryEvaluator(const VectorPotential& vp, const TimeGrid& grid,
                               const QuadConfig& q)
    : vp_(vp), grid_(grid), quad_(q) {
    if (q.base_order < 8) throw std::invalid_argument("QuadConfig: base_order >= 8");
    if (!(q.tol > 0.0)) throw std::invalid_argument("QuadConfig: tol > 0");
}

void EntryEvaluator::clear_cache() {
    cache_.clear();
    phi_samples_.clear();
    cached_nodes_ = 0;
}

const EntryEvaluator::PanelSet& EntryEvaluator::panels(int k, int depth) {
    const GaussRule& gl = gauss_rule(quad_.base_order);
    size_t total = ((size_t)1 << depth) * gl.x.size();
    bool cacheable = total <= 2048;  // deep sets are rare; don't hoard them

    long long key = (long long)k * 64 + depth;
    if (cacheable) {
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        if (cached_nodes_ > (8u << 20)) clear_cache();  // ~256 MB ceiling
        cached_nodes_ += total;
    }

    double dt = grid_.dt;
    double a = grid_.t(k - 1);
    int npan = 1 << depth;
    double h = dt / npan;
    PanelSet& ps = cacheable ? cache_[key] : scratch_;
    ps.s.clear();
    ps.phi.clear();
    ps.frac.clear();
    ps.w.clear();
    ps.s.reserve(total);
    ps.phi.reserve(total);
    ps.frac.reserve(total);
    ps.w.reserve(total);
    for (int p = 0; p < npan; ++p) {
        double lo = a + p * h;
        double c = lo + 0.5 * h, r = 0.5 * h;
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double s = c + r * gl.x[i];
            ps.s.push_back(s);
            ps.phi.push_back(vp_.eval_phi(s));
            ps.frac.push_back((s - a) / dt);
            ps.w.push_back(gl.w[i] * r);
        }
    }
    return ps;
}

// Depth from the kernel phase variation over hat subinterval [t_{k-1}, t_k],
// sampled at five points (with a safety factor; the adaptive check catches
// any underestimate).
int EntryEvaluator::phase_depth(int m, int k) const {
    if (vp_.is_zero()) return 0;
    auto it = phi_samples_.find(k);
    if (it == phi_samples_.end()) {
        std::array<double, 5> ph;
        double a = grid_.t(k - 1);
        for (int i = 0; i < 5; ++i) ph[i] = vp_.eval_phi(a + grid_.dt * (0.25 * i));
        it = const_cast<EntryEvaluator*>(this)->phi_samples_.emplace(k, ph).first;
    }
    double tm = grid_.t(m);
    double phim = vp_.eval_phi(tm);
    double a = grid_.t(k - 1);
    double var = 0.0, prev = 0.0;
    for (int i = 0; i < 5; ++i) {
        double d = tm - (a + grid_.dt * (0.25 * i));
        double dphi = phim - it->second[i];
        double f = dphi * dphi * 0.25 / d;
        if (i) var += std::abs(f - prev);
        prev = f;
    }
    double npan = 2.0 * var / quad_.phase_budget + 1.0;
    int depth = 0;
    while ((1 << depth) < npan && depth < quad_.max_subdiv) ++depth;
    return depth;
}

cdouble EntryEvaluator::regular_at_depth(int m, int k, bool rising, bool dstar, int depth) {
    const PanelSet& ps = panels(k, depth);
    double tm = grid_.t(m);
    double phim = vp_.eval_phi(tm);
    cdouble acc(0.0, 0.0);
    size_t n = ps.s.size();
    if (!dstar) {
        for (size_t i = 0; i < n; ++i) {
            double d = tm - ps.s[i];
            double dphi = phim - ps.phi[i];
            double eta = rising ? ps.frac[i] : 1.0 - ps.frac[i];
            double amp = ps.w[i] * eta / std::sqrt(d);
            acc += amp * cis(dphi * dphi * 0.25 / d);
        }
        return kCS * acc;
    }
    for (size_t i = 0; i < n; ++i) {
        double d = tm - ps.s[i];
        double dphi = phim - ps.phi[i];
        double eta = rising ? ps.frac[i] : 1.0 - ps.frac[i];
        double amp = ps.w[i] * eta * dphi / (2.0 * d * std::sqrt(d));
        acc += amp * cis(dphi * dphi * 0.25 / d);
    }
    return kCS * cdouble(0.0, 1.0) * acc;
}

cdouble EntryEvaluator::regular_subinterval(int m, int k, bool rising, bool dstar) {
    int d0 = phase_depth(m, k);
    cdouble r = regular_at_depth(m, k, rising, dstar, d0);
    if (!quad_.adaptive) return r;
    double tol = 0.5 * quad_.tol;
    int dmax = std::min(quad_.max_subdiv, d0 + 12);  // cost guard
    for (int d = d0 + 1; d <= dmax; ++d) {
        cdouble r2 = regular_at_depth(m, k, rising, dstar, d);
        if (std::abs(r2 - r) <= tol) return r2;
        r = r2;
    }
    throw QuadratureFailure(m, k, "quadrature tolerance unreachable at max_subdiv");
}

// tau-substituted integrand on [0, tau_max], s = t_m - tau^2, with hat value
// eta = c0 + c1 * tau^2.
cdouble EntryEvaluator::singular_at_depth(int m, double a, double c0, double c1, bool dstar,
                                          int depth) {
    const GaussRule& gl = gauss_rule(quad_.base_order);
    double tm = grid_.t(m);
    double tau_max = std::sqrt(tm - a);
    int npan = 1 << depth;
    double h = tau_max / npan;
    cdouble acc(0.0, 0.0);
    for (int p = 0; p < npan; ++p) {
        double c = (p + 0.5) * h, r = 0.5 * h;
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double tau = c + r * gl.x[i];
            double t2 = tau * tau;
            double dphi = vp_.phi_diff_delta(tm, t2);
            double eta = c0 + c1 * t2;
            double ph = dphi * dphi * 0.25 / t2;
            double w = gl.w[i] * r;
            if (!dstar) {
                acc += (2.0 * w * eta) * cis(ph);
            } else {
                acc += (w * eta * dphi / t2) * cis(ph);
            }
        }
    }
    return dstar ? kCS * cdouble(0.0, 1.0) * acc : kCS * acc;
}

cdouble EntryEvaluator::singular_subinterval(int m, double a, double c0, double c1,
                                             bool dstar) {
    // phase variation in tau, sampled
    double tm = grid_.t(m);
    double tau_max = std::sqrt(tm - a);
    double var = 0.0, prev = 0.0;
    for (int i = 0; i < 5; ++i) {
        double tau = tau_max * (0.02 + 0.245 * i);
        double dphi = vp_.phi_diff_delta(tm, tau * tau);
        double f = dphi * dphi * 0.25 / (tau * tau);
        if (i) var += std::abs(f - prev);
        prev = f;
    }
    double npan = 2.0 * var / quad_.phase_budget + 1.0;
    int d0 = 0;
    while ((1 << d0) < npan && d0 < quad_.max_subdiv) ++d0;

    cdouble r = singular_at_depth(m, a, c0, c1, dstar, d0);
    if (!quad_.adaptive) return r;
    double tol = 0.5 * quad_.tol;
    int dmax = std::min(quad_.max_subdiv, d0 + 12);  // cost guard
    for (int d = d0 + 1; d <= dmax; ++d) {
        cdouble r2 = singular_at_depth(m, a, c0, c1, dstar, d);
        if (std::abs(r2 - r) <= tol) return r2;
        r = r2;
    }
    throw QuadratureFailure(m, 0, "singular quadrature tolerance unreachable");
}

cdouble EntryEvaluator::entry(int m, int n, bool dstar) {
    if (!(1 <= n && n <= m && m <= grid_.N))
        throw std::domain_error("entry: require 1 <= n <= m <= N");
    if (dstar && vp_.is_zero()) return {0.0, 0.0};

    double dt = grid_.dt;
    cdouble acc(0.0, 0.0);
    if (n == m) {
        // single rising subinterval [t_{m-1}, t_m], singular right endpoint
        return singular_subinterval(m, grid_.t(m - 1), 1.0, -1.0 / dt, dstar);
    }
    // rising part [t_{n-1}, t_n]
    acc += regular_subinterval(m, n, true, dstar);
    // falling part [t_n, t_{n+1}]
    if (n == m - 1) {
        acc += singular_subinterval(m, grid_.t(m - 1), 0.0, 1.0 / dt, dstar);
    } else {
        acc += regular_subinterval(m, n + 1, false, dstar);
    }
    return acc;
}

EntryEvaluator::cpair EntryEvaluator::regular_both_at_depth(int m, int k, bool rising,
                                                            int depth) {
    const PanelSet& ps = panels(k, depth);
    double tm = grid_.t(m);
    double phim = vp_.eval_phi(tm);
    cdouble acc_s(0.0, 0.0), acc_d(0.0, 0.0);
    size_t n = ps.s.size();
    for (size_t i = 0; i < n; ++i) {
        double d = tm - ps.s[i];
        double dphi = phim - ps.phi[i];
        double eta = rising ? ps.frac[i] : 1.0 - ps.frac[i];
        double w = ps.w[i] * eta / std::sqrt(d);
        cdouble e = cis(dphi * dphi * 0.25 / d);
        acc_s += w * e;
        acc_d += (w * dphi / (2.0 * d)) * e;
    }
    return {kCS * acc_s, kCS * cdouble(0.0, 1.0) * acc_d};
}

EntryEvaluator::cpair EntryEvaluator::regular_both(int m, int k, bool rising) {
    int d0 = phase_depth(m, k);
    cpair r = regular_both_at_depth(m, k, rising, d0);
    if (!quad_.adaptive) return r;
    double tol = 0.5 * quad_.tol;
    int dmax = std::min(quad_.max_subdiv, d0 + 12);
    for (int d = d0 + 1; d <= dmax; ++d) {
        cpair r2 = regular_both_at_depth(m, k, rising, d);
        if (std::abs(r2.first - r.first) <= tol && std::abs(r2.second - r.second) <= tol)
            return r2;
        r = r2;
    }
    throw QuadratureFailure(m, k, "quadrature tolerance unreachable at max_subdiv");
}

EntryEvaluator::cpair EntryEvaluator::singular_both_at_depth(int m, double a, double c0,
                                                             double c1, int depth) {
    const GaussRule& gl = gauss_rule(quad_.base_order);
    double tm = grid_.t(m);
    double tau_max = std::sqrt(tm - a);
    int npan = 1 << depth;
    double h = tau_max / npan;
    cdouble acc_s(0.0, 0.0), acc_d(0.0, 0.0);
    for (int p = 0; p < npan; ++p) {
        double c = (p + 0.5) * h, r = 0.5 * h;
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double tau = c + r * gl.x[i];
            double t2 = tau * tau;
            double dphi = vp_.phi_diff_delta(tm, t2);
            double eta = c0 + c1 * t2;
            cdouble e = cis(dphi * dphi * 0.25 / t2);
            double w = gl.w[i] * r * eta;
            acc_s += (2.0 * w) * e;
            acc_d += (w * dphi / t2) * e;
        }
    }
    return {kCS * acc_s, kCS * cdouble(0.0, 1.0) * acc_d};
}

EntryEvaluator::cpair EntryEvaluator::singular_both(int m, double a, double c0, double c1) {
    double tm = grid_.t(m);
    double tau_max = std::sqrt(tm - a);
    double var = 0.0, prev = 0.0;
    for (int i = 0; i < 5; ++i) {
        double tau = tau_max * (0.02 + 0.245 * i);
        double dphi = vp_.phi_diff_delta(tm, tau * tau);
        double f = dphi * dphi * 0.25 / (tau * tau);
        if (i) var += std::abs(f - prev);
        prev = f;
    }
    double npan = 2.0 * var / quad_.phase_budget + 1.0;
    int d0 = 0;
    while ((1 << d0) < npan && d0 < quad_.max_subdiv) ++d0;

    cpair r = singular_both_at_depth(m, a, c0, c1, d0);
    if (!quad_.adaptive) return r;
    double tol = 0.5 * quad_.tol;
    int dmax = std::min(quad_.max_subdiv, d0 + 12);
    for (int d = d0 + 1; d <= dmax; ++d) {
        cpair r2 = singular_both_at_depth(m, a, c0, c1, d);
        if (std::abs(r2.first - r.first) <= tol && std::abs(r2.second - r.second) <= tol)
            return r2;
        r = r2;
    }
    throw QuadratureFailure(m, 0, "singular quadrature tolerance unreachable");
}

EntryEvaluator::cpair EntryEvaluator::entry_SD(int m, int n) {
    if (!(1 <= n && n <= m && m <= grid_.N))
        throw std::domain_error("entry: require 1 <= n <= m <= N");
    double dt = grid_.dt;
    if (n == m) return singular_both(m, grid_.t(m - 1), 1.0, -1.0 / dt);
    cpair acc = regular_both(m, n, true);
    cpair f = (n == m - 1) ? singular_both(m, grid_.t(m - 1), 0.0, 1.0 / dt)
                           : regular_both(m, n + 1, false);
    return {acc.first + f.first, acc.second + f.second};
}

cdouble entry_S(const VectorPotential& vp, const TimeGrid& grid, int m, int n,
                const QuadConfig& q) {
    EntryEvaluator ev(vp, grid, q);
    return ev.entry_S(m, n);
}

cdouble entry_D(const VectorPotential& vp, const TimeGrid& grid, int m, int n,
                const QuadConfig& q) {
    EntryEvaluator ev(vp, grid, q);
    return ev.entry_D(m, n);
}

namespace {

cdouble gl_panel(const std::function<cdouble(double)>& f, double a, double b, int order) {
    const GaussRule& gl = gauss_rule(order);
    double c = 0.5 * (a + b), r = 0.5 * (b - a);
    cdouble acc(0.0, 0.0);
    for (size_t i = 0; i < gl.x.size(); ++i) acc += gl.w[i] * f(c + r * gl.x[i]);
    return r * acc;
}

cdouble adapt_rec(const std::function<cdouble(double)>& f, double a, double b, double tol,
                  int order, int depth, cdouble whole, long& budget) {
    double mid = 0.5 * (a + b);
    cdouble left = gl_panel(f, a, mid, order);
    cdouble right = gl_panel(f, mid, b, order);
    budget -= 2;
    // budget guard: a tolerance below roundoff would otherwise force a full
    // binary tree to max_depth
    if (std::abs(left + right - whole) <= tol || depth <= 0 || budget <= 0)
        return left + right;
    return adapt_rec(f, a, mid, 0.5 * tol, order, depth - 1, left, budget) +
           adapt_rec(f, mid, b, 0.5 * tol, order, depth - 1, right, budget);
}

}  // namespace

cdouble adaptive_integrate(const std::function<cdouble(double)>& f, double a, double b,
                           double tol, int order, int max_depth) {
    long budget = 400000;
    return adapt_rec(f, a, b, tol, order, max_depth, gl_panel(f, a, b, order), budget);
}

}  // namespace tbc
