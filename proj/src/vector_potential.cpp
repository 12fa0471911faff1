#include "tbc/vector_potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tbc {

namespace {

// sin(x t)/x, stable at x -> 0
double sinc_over(double x, double t) {
    double xt = x * t;
    if (std::abs(xt) < 1e-5) return t * (1.0 - xt * xt / 6.0);
    return std::sin(xt) / x;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

VectorPotential VectorPotential::zero() {
    VectorPotential vp;
    vp.kind_ = Kind::Zero;
    vp.descriptor_ = "vector_potential.kind = zero";
    return vp;
}

VectorPotential VectorPotential::pulse(const PulseParams& p) {
    if (!(p.T_pulse > 0.0)) throw std::invalid_argument("pulse: T_pulse must be positive");
    VectorPotential vp;
    vp.kind_ = Kind::Pulse;
    vp.pulse_ = p;
    vp.phi_end_ = vp.pulse_phi(p.T_pulse);
    vp.descriptor_ = "vector_potential.A0 = " + fmt_double(p.A0) +
                     "\nvector_potential.T = " + fmt_double(p.T_pulse) +
                     "\nvector_potential.kind = pulse" +
                     "\nvector_potential.omega = " + fmt_double(p.omega);
    return vp;
}

VectorPotential VectorPotential::tabulated(std::vector<double> t, std::vector<double> a) {
    if (t.size() < 2 || t.size() != a.size())
        throw std::invalid_argument("tabulated: need >= 2 matching samples");
    if (t.front() != 0.0) throw std::invalid_argument("tabulated: first sample must be at t = 0");
    for (size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw std::invalid_argument("tabulated: times must increase");

    VectorPotential vp;
    vp.kind_ = Kind::Tabulated;
    vp.knots_ = std::move(t);
    vp.vals_ = std::move(a);

    // natural cubic spline second derivatives (Thomas on the tridiagonal system)
    size_t n = vp.knots_.size();
    vp.m2_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
        for (size_t i = 1; i + 1 < n; ++i) {
            double h0 = vp.knots_[i] - vp.knots_[i - 1];
            double h1 = vp.knots_[i + 1] - vp.knots_[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] = 6.0 * ((vp.vals_[i + 1] - vp.vals_[i]) / h1 -
                                (vp.vals_[i] - vp.vals_[i - 1]) / h0);
        }
        for (size_t i = 1; i < n - 2; ++i) {
            double h = vp.knots_[i + 1] - vp.knots_[i];  // sub-diagonal entry
            double w = h / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (size_t i = n - 2; i-- > 0;) {
            double x = rhs[i];
            if (i + 1 < n - 2) x -= upper[i] * vp.m2_[i + 2];
            vp.m2_[i + 1] = x / diag[i];
        }
    }

    // exact cumulative integrals of the spline at each knot
    vp.cum_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        double h = vp.knots_[i + 1] - vp.knots_[i];
        // int of cubic segment: trapezoid minus curvature correction
        double seg = 0.5 * h * (vp.vals_[i] + vp.vals_[i + 1]) -
                     h * h * h * (vp.m2_[i] + vp.m2_[i + 1]) / 24.0;
        vp.cum_[i + 1] = vp.cum_[i] + seg;
    }
    vp.phi_end_ = vp.cum_.back();
    vp.descriptor_ = "vector_potential.kind = table\nvector_potential.samples =";
    for (size_t i = 0; i < n; ++i)
        vp.descriptor_ += " " + fmt_double(vp.knots_[i]) + ":" + fmt_double(vp.vals_[i]);
    return vp;
}

double VectorPotential::pulse_A(double t) const {
    if (t >= pulse_.T_pulse) return 0.0;
    double s = std::sin(M_PI * t / pulse_.T_pulse);
    return pulse_.A0 * s * s * std::cos(pulse_.omega * t);
}

double VectorPotential::pulse_A_dot(double t) const {
    if (t >= pulse_.T_pulse) return 0.0;
    double w = M_PI / pulse_.T_pulse;
    double s = std::sin(w * t);
    return pulse_.A0 * (w * std::sin(2.0 * w * t) * std::cos(pulse_.omega * t) -
                        pulse_.omega * s * s * std::sin(pulse_.omega * t));
}

// phi = (A0/2) [ sin(w t)/w - ( sin((W+w)t)/(W+w) + sin((W-w)t)/(W-w) )/2 ],
// W = 2 pi / T_pulse; the sinc helper covers w = 0 and w = W.
double VectorPotential::pulse_phi(double t) const {
    if (t >= pulse_.T_pulse) return phi_end_;
    double W = 2.0 * M_PI / pulse_.T_pulse;
    double w = pulse_.omega;
    return 0.5 * pulse_.A0 *
           (sinc_over(w, t) - 0.5 * (sinc_over(W + w, t) + sinc_over(W - w, t)));
}

double VectorPotential::spline_A(double t) const {
    if (t >= knots_.back()) return 0.0;
    size_t i = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
    if (i == 0) i = 1;
    --i;
    if (i + 1 >= knots_.size()) i = knots_.size() - 2;
    double h = knots_[i + 1] - knots_[i];
    double a = (knots_[i + 1] - t) / h, b = (t - knots_[i]) / h;
    return a * vals_[i] + b * vals_[i + 1] +
           ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * h * h / 6.0;
}

double VectorPotential::spline_A_dot(double t) const {
    if (t >= knots_.back()) return 0.0;
    size_t i = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
    if (i == 0) i = 1;
    --i;
    if (i + 1 >= knots_.size()) i = knots_.size() - 2;
    double h = knots_[i + 1] - knots_[i];
    double a = (knots_[i + 1] - t) / h, b = (t - knots_[i]) / h;
    return (vals_[i + 1] - vals_[i]) / h +
           ((1.0 - 3.0 * a * a) * m2_[i] + (3.0 * b * b - 1.0) * m2_[i + 1]) * h / 6.0;
}

double VectorPotential::spline_phi(double t) const {
    if (t >= knots_.back()) return phi_end_;
    size_t i = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
    if (i == 0) i = 1;
    --i;
    if (i + 1 >= knots_.size()) i = knots_.size() - 2;
    double h = knots_[i + 1] - knots_[i];
    double a = (knots_[i + 1] - t) / h, b = (t - knots_[i]) / h;
    // integral of the segment from knots_[i] to t
    double seg = h * (0.5 * (1.0 - a * a) * vals_[i] + 0.5 * b * b * vals_[i + 1] +
                      h * h / 24.0 * ((1.0 - a * a) * (a * a + 1.0) - 2.0 * (1.0 - a * a)) * m2_[i] +
                      h * h / 24.0 * (b * b * b * b - 2.0 * b * b) * m2_[i + 1]);
    return cum_[i] + seg;
}

double VectorPotential::eval_A(double t) const {
    if (t < 0.0) throw std::domain_error("eval_A: t must be >= 0");
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Pulse: return pulse_A(t);
        default: return spline_A(t);
    }
}

double VectorPotential::eval_A_dot(double t) const {
    if (t < 0.0) throw std::domain_error("eval_A_dot: t must be >= 0");
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Pulse: return pulse_A_dot(t);
        default: return spline_A_dot(t);
    }
}

double VectorPotential::eval_phi(double t) const {
    if (t < 0.0) throw std::domain_error("eval_phi: t must be >= 0");
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Pulse: return pulse_phi(t);
        default: return spline_phi(t);
    }
}

// For t - s below ~1e-4 the direct difference phi(t) - phi(s) loses digits
// against the O(1) size of phi itself; a 4-point Gauss rule on A over [s, t]
// recovers the difference to absolute accuracy far below 1e-17 there.
double VectorPotential::phi_diff(double t, double s) const {
    if (kind_ == Kind::Zero) return 0.0;
    double d = t - s;
    if (d > 1e-4 || d <= 0.0) return eval_phi(t) - eval_phi(s);
    static const double gx[2] = {0.33998104358485626, 0.86113631159405258};
    static const double gw[2] = {0.65214515486254614, 0.34785484513745386};
    double c = 0.5 * (t + s), h = 0.5 * d, acc = 0.0;
    for (int k = 0; k < 2; ++k)
        acc += gw[k] * (eval_A(c + h * gx[k]) + eval_A(c - h * gx[k]));
    return h * acc;
}

double VectorPotential::phi_diff_delta(double t, double delta) const {
    if (kind_ == Kind::Zero || delta == 0.0) return 0.0;
    if (delta > 1e-4) return eval_phi(t) - eval_phi(t - delta);
    static const double gx[2] = {0.33998104358485626, 0.86113631159405258};
    static const double gw[2] = {0.65214515486254614, 0.34785484513745386};
    // nodes t - delta*u, u in (0,1): evaluation-point rounding is O(ulp(t)),
    // which perturbs A, not the interval length
    double h = 0.5 * delta, acc = 0.0;
    for (int k = 0; k < 2; ++k)
        acc += gw[k] * (eval_A(t - h * (1.0 - gx[k])) + eval_A(t - h * (1.0 + gx[k])));
    return h * acc;
}

double VectorPotential::A_bound(double T) const {
    (void)T;
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Pulse: return std::abs(pulse_.A0);
        default: {
            double m = 0.0;
            for (double v : vals_) m = std::max(m, std::abs(v));
            return 1.5 * m + 1e-30;  // spline overshoot margin
        }
    }
}

double VectorPotential::max_excursion(double T) const {
    if (!(T > 0.0)) throw std::domain_error("max_excursion: T must be positive");
    if (kind_ == Kind::Zero) return 0.0;
    const int n = 32768;
    double m = 0.0;
    for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(eval_phi(T * i / n)));
    return m;
}

}  // namespace tbc
