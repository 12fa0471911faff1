#include "tbc/layer_eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tbc/fresnel.hpp"
#include "tbc/gauss.hpp"

namespace tbc {

namespace {

constexpr double kV0 = 6.0;      // kernel phase at the head/tail split
constexpr int kFitSamples = 24;  // tail fit: sample count and degree in 1/y
constexpr int kFitDegree = 12;

const cdouble kPrefS = std::polar(0.5 / std::sqrt(M_PI), -M_PI / 4);   // 1/sqrt(4 pi i)
const cdouble kPrefD = std::polar(0.25 / std::sqrt(M_PI), M_PI / 4);   // sqrt(i)/(4 sqrt(pi))

struct LayerCtx {
    double c0, t;
    const Density& dens;
    const VectorPotential& vp;
    double tol;
    bool dl;         // double layer
    double kink_dt;  // hat-node spacing of the density (0 = analytic density)
};

double phase_at(const LayerCtx& cx, double s) {
    double c = cx.c0 + cx.vp.phi_diff(cx.t, s);
    return c * c / (4.0 * (cx.t - s));
}

cdouble integrand_s(const LayerCtx& cx, double s) {
    double d = cx.t - s;
    double c = cx.c0 + cx.vp.phi_diff(cx.t, s);
    double amp = cx.dl ? c / (d * std::sqrt(d)) : 1.0 / std::sqrt(d);
    return std::polar(amp, c * c / (4.0 * d)) * cx.dens(s);
}

// Oscillatory quadrature by phase marching: panel widths chosen from the
// analytic phase derivative so each Gauss-Legendre panel sees <= ~1 rad
// (the history phase can total 1e5 rad for strong pulses, where two-level
// adaptive bisection stalls or accepts spuriously). hcap bounds the panel
// width additionally, to resolve steep amplitudes.
cdouble osc_march(const std::function<cdouble(double)>& f,
                  const std::function<double(double)>& dph, double a, double b,
                  const std::function<double(double)>& hcap) {
    const GaussRule& g = gauss_rule(16);
    const double budget = 1.0;
    cdouble acc = 0.0;
    double span = b - a, s = a;
    long panels = 0;
    while (b - s > 1e-15 * span) {
        double r0 = std::fabs(dph(s));
        double h = std::min({budget / (r0 + 1e-300), b - s, hcap(s), span});
        while (h > 1e-14 * span) {
            double r = std::max({r0, std::fabs(dph(s + h)), std::fabs(dph(s + 0.5 * h))});
            if (h * r <= 1.5 * budget) break;
            h = budget / r;
        }
        double mid = s + 0.5 * h;
        for (size_t q = 0; q < g.x.size(); ++q)
            acc += 0.5 * h * g.w[q] * f(mid + 0.5 * h * g.x[q]);
        s += h;
        if (++panels > 10'000'000) throw std::runtime_error("osc_march: panel budget exceeded");
    }
    return acc;
}

double dphase_at(const LayerCtx& cx, double s) {
    double d = cx.t - s;
    double c = cx.c0 + cx.vp.phi_diff(cx.t, s);
    return c * (c - 2.0 * cx.vp.eval_A(s) * d) / (4.0 * d * d);
}

/// Regular part over gaps D = t - s >= tau0^2; the kernel phase there is
/// <= ~kV0^2. tau0 is passed directly: the gap tau0^2 can be far below
/// ulp(t), so it must never be reconstructed from t - s_cut.
cdouble main_part(const LayerCtx& cx, double tau0) {
    double s_cut = std::max(0.0, cx.t - tau0 * tau0);
    if (s_cut <= 0.0) return 0.0;
    auto f = [&](double s) { return integrand_s(cx, s); };
    if (cx.kink_dt <= 0.0) {
        // Integrate D in [tau0^2, 1e-6 t] in the variable tau = sqrt(D),
        // where the tiny gap is exact.
        double d_cut = tau0 * tau0, d_mid = std::max(d_cut, 1e-6 * cx.t);
        double s_mid = cx.t - d_mid;
        cdouble acc = 0.0;
        if (s_mid > 0.0)
            acc += osc_march(
                f, [&](double s) { return dphase_at(cx, s); }, 0.0, s_mid,
                [&](double s) { return 0.5 * (cx.t - s); });
        if (d_mid > d_cut) {
            auto ft = [&](double tau) {
                double tau2 = tau * tau;
                double s = std::max(0.0, cx.t - tau2);
                double c = cx.c0 + cx.vp.phi_diff_delta(cx.t, tau2);
                cdouble ph = std::polar(1.0, c * c / (4.0 * tau2));
                return (cx.dl ? 2.0 * c / tau2 : 2.0) * ph * cx.dens(s);
            };
            auto dpht = [&](double tau) {
                double tau2 = tau * tau;
                double c = cx.c0 + cx.vp.phi_diff_delta(cx.t, tau2);
                double A = cx.vp.eval_A(std::max(0.0, cx.t - tau2));
                return -c * (c - 2.0 * A * tau2) / (2.0 * tau2 * tau);
            };
            double ta = std::sqrt(d_cut), tb = std::sqrt(d_mid);
            // hcap tau/4 resolves the tau^{-2} amplitude of the double layer
            acc += osc_march(ft, dpht, ta, tb, [](double tau) { return 0.25 * tau; });
        }
        return acc;
    }
    // piecewise-linear density: one panel per hat subinterval, split so the
    // kernel phase varies by <= ~1 rad per Gauss panel; the panel touching the
    // cut (steep amplitude and phase) goes to the adaptive rule
    const GaussRule& g = gauss_rule(12);
    double dt = cx.kink_dt;
    int npan = int(std::ceil(s_cut / dt - 1e-12));
    cdouble acc = 0.0;
    for (int kp = 0; kp < npan; ++kp) {
        double a = kp * dt, b = std::min(a + dt, s_cut);
        if (b <= a) continue;
        double var = 0.0, prev = phase_at(cx, a);
        for (int q = 1; q <= 4; ++q) {
            double ph = phase_at(cx, a + (b - a) * q / 4.0);
            var += std::fabs(ph - prev);
            prev = ph;
        }
        int np = 1 + int(var);
        if (np > 4096 || b >= s_cut - 1e-14 * cx.t) {
            acc += osc_march(
                f, [&](double s) { return dphase_at(cx, s); }, a, b,
                [&](double s) { return 0.5 * (cx.t - s); });
            continue;
        }
        double h = (b - a) / np;
        for (int i = 0; i < np; ++i) {
            double mid = a + (i + 0.5) * h;
            for (size_t q = 0; q < g.x.size(); ++q)
                acc += 0.5 * h * g.w[q] * f(mid + 0.5 * h * g.x[q]);
        }
    }
    return acc;
}

// Singular head: with s = t - tau^2 the integral over (s_cut, t) becomes
//   int_0^{tau0} H(tau) e^{i y(tau)^2} dtau,   y = |c0 + dphi(tau^2)| / (2 tau),
// with H_S = 2 sigma, H_D = 2 (c0 + dphi) mu / tau^2. tau0 keeps |dphi| below
// |c0|/8, so y is monotone and y0 = y(tau0) >= (7/8) kV0. Changing variables
// to y and expanding W(y) = H * (-dtau/dy) in powers of 1/y (least-squares at
// Chebyshev nodes in u = 1/y) reduces the head to Fresnel moments G_k(y0).
cdouble tail_part(const LayerCtx& cx, double tau0) {
    double sgn = cx.c0 > 0.0 ? 1.0 : -1.0;
    double a0 = std::fabs(cx.c0);
    double u0 = 2.0 * tau0 / std::fabs(cx.c0 + cx.vp.phi_diff_delta(cx.t, tau0 * tau0));
    auto tau_of_y = [&](double y) {
        double tau = a0 / (2.0 * y);
        for (int it = 0; it < 50; ++it) {
            double next = std::fabs(cx.c0 + cx.vp.phi_diff_delta(cx.t, tau * tau)) / (2.0 * y);
            bool done = std::fabs(next - tau) <= 1e-15 * tau;
            tau = next;
            if (done) break;
        }
        return tau;
    };
    Eigen::MatrixXcd V(kFitSamples, kFitDegree + 1);
    Eigen::VectorXcd r(kFitSamples);
    for (int i = 0; i < kFitSamples; ++i) {
        double u = 0.5 * u0 * (1.0 + std::cos(M_PI * (i + 0.5) / kFitSamples));
        double tau = tau_of_y(1.0 / u);
        double tau2 = tau * tau;
        double s = std::max(0.0, cx.t - tau2);
        double ctau = cx.c0 + cx.vp.phi_diff_delta(cx.t, tau2);
        double dtau_dy = 2.0 * tau2 / (std::fabs(ctau) - 2.0 * tau2 * sgn * cx.vp.eval_A(s));
        cdouble h = cx.dl ? 2.0 * ctau * cx.dens(s) / tau2 : 2.0 * cx.dens(s);
        r(i) = h * dtau_dy;
        double p = 1.0;
        for (int j = 0; j <= kFitDegree; ++j) {
            V(i, j) = p;
            p *= u;
        }
    }
    Eigen::VectorXcd w = V.colPivHouseholderQr().solve(r);
    std::vector<cdouble> G = fresnel_G(1.0 / u0, kFitDegree);
    cdouble acc = 0.0;
    for (int j = 0; j <= kFitDegree; ++j) acc += w(j) * G[size_t(j)];
    return acc;
}

cdouble layer_eval(const LayerCtx& cx) {
    if (cx.t <= 0.0) return 0.0;
    if (cx.c0 == 0.0) throw std::invalid_argument("layer_eval: c0 must be nonzero");
    double ab = cx.vp.A_bound(cx.t);
    double tau0 = std::min(std::sqrt(cx.t), std::fabs(cx.c0) / (2.0 * kV0));
    if (ab > 0.0) tau0 = std::min(tau0, std::sqrt(std::fabs(cx.c0) / (8.0 * ab)));
    return (cx.dl ? kPrefD : kPrefS) * (main_part(cx, tau0) + tail_part(cx, tau0));
}

}  // namespace

cdouble single_layer_eval(double c0, double t, const Density& sigma, const VectorPotential& vp,
                          double tol) {
    LayerCtx cx{c0, t, sigma, vp, tol, false, 0.0};
    return layer_eval(cx);
}

cdouble double_layer_eval(double c0, double t, const Density& mu, const VectorPotential& vp,
                          double tol) {
    LayerCtx cx{c0, t, mu, vp, tol, true, 0.0};
    return layer_eval(cx);
}

cdouble dstar_eval(double t, const Density& mu, const VectorPotential& vp, double tol) {
    (void)tol;  // accuracy is set by the ~1 rad/panel march
    if (t <= 0.0) return 0.0;
    auto g = [&](double tau) {
        double tau2 = tau * tau;
        if (tau2 == 0.0) return 2.0 * vp.eval_A(t) * mu(t);
        double r = vp.phi_diff_delta(t, tau2) / tau2;  // -> A(t) as tau -> 0
        return 2.0 * r * std::polar(1.0, r * r * tau2 / 4.0) * mu(std::max(0.0, t - tau2));
    };
    auto dph = [&](double tau) {
        double tau2 = tau * tau;
        if (tau2 == 0.0) return 0.0;
        double dphi = vp.phi_diff_delta(t, tau2);
        double s = std::max(0.0, t - tau2);
        return -dphi * (dphi - 2.0 * vp.eval_A(s) * tau2) / (2.0 * tau2 * tau);
    };
    double b = std::sqrt(t);
    return kPrefD * osc_march(g, dph, 0.0, b, [b](double) { return b; });
}

cdouble exterior_eval(double x, double x0, int m, double dt, const std::vector<cdouble>& u_trace,
                      const std::vector<cdouble>& v_trace, const VectorPotential& vp,
                      double tol) {
    if (std::fabs(x) <= x0) throw std::invalid_argument("exterior_eval: need |x| > x0");
    if (int(u_trace.size()) < m + 1 || int(v_trace.size()) < m + 1)
        throw std::invalid_argument("exterior_eval: need trace nodes 0..m");
    if (m < 1) return 0.0;
    double t = m * dt;
    std::vector<cdouble> q(size_t(m) + 1);
    for (int n = 0; n <= m; ++n)
        q[size_t(n)] =
            v_trace[size_t(n)] - cdouble(0.0, vp.eval_A(n * dt)) * u_trace[size_t(n)];
    auto interp = [m, dt](const std::vector<cdouble>& a, double s) {
        double xg = s / dt;
        int n = std::clamp(int(std::floor(xg)), 0, m - 1);
        double f = xg - n;
        return a[size_t(n)] * (1.0 - f) + a[size_t(n) + 1] * f;
    };
    Density sigma = [&](double s) { return interp(q, s); };
    Density mu = [&](double s) { return interp(u_trace, s); };
    double c0 = x > 0.0 ? x - x0 : x + x0;
    LayerCtx cs{c0, t, sigma, vp, tol, false, dt};
    LayerCtx cd{c0, t, mu, vp, tol, true, dt};
    cdouble val = layer_eval(cs) + layer_eval(cd);
    return (x > 0.0 ? cdouble(0.0, -1.0) : cdouble(0.0, 1.0)) * val;
}

JumpCheck jump_check(Side side, double t, const Density& mu, const VectorPotential& vp,
                     double eps0, int levels, double tol) {
    double sgn = side == Side::Right ? 1.0 : -1.0;
    std::vector<double> h(size_t(levels), 0.0);
    std::vector<cdouble> val(size_t(levels), cdouble(0.0));
    for (int k = 0; k < levels; ++k) {
        h[size_t(k)] = std::ldexp(eps0, -k);
        val[size_t(k)] = double_layer_eval(sgn * h[size_t(k)], t, mu, vp, tol);
    }
    for (int j = 1; j < levels; ++j)  // Neville to eps = 0
        for (int i = levels - 1; i >= j; --i)
            val[size_t(i)] = (h[size_t(i)] * val[size_t(i) - 1] -
                              h[size_t(i) - size_t(j)] * val[size_t(i)]) /
                             (h[size_t(i)] - h[size_t(i) - size_t(j)]);
    JumpCheck out;
    out.side_limit = val[size_t(levels) - 1];
    out.jump_formula = sgn * cdouble(0.0, 0.5) * mu(t) + dstar_eval(t, mu, vp, tol);
    out.abs_err = std::abs(out.side_limit - out.jump_formula);
    return out;
}

}  // namespace tbc
