#include "tbc/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace tbc {

cdouble gaussian_wavepacket(double x, const WavepacketParams& p) {
    double X = x - p.mu;
    return std::exp(cdouble(-X * X / (4.0 * p.alpha * p.alpha), p.k * X)) / std::sqrt(p.alpha);
}

cdouble free_evolution(double x, double t, const WavepacketParams& p) {
    double X = x - p.mu;
    cdouble a2it(p.alpha * p.alpha, t);
    cdouble z = cdouble(2.0 * p.alpha * p.alpha * p.k, X);  // iX + 2 alpha^2 k
    cdouble expo = z * z / (4.0 * a2it) - p.alpha * p.alpha * p.k * p.k;
    return std::sqrt(p.alpha / a2it) * std::exp(expo);
}

cdouble free_evolution_dx(double x, double t, const WavepacketParams& p) {
    double X = x - p.mu;
    cdouble a2it(p.alpha * p.alpha, t);
    cdouble z = cdouble(2.0 * p.alpha * p.alpha * p.k, X);
    return free_evolution(x, t, p) * cdouble(0.0, 1.0) * z / (2.0 * a2it);
}

cdouble shifted_reference(double x, double t, const WavepacketParams& p,
                          const VectorPotential& vp) {
    return free_evolution(x + vp.eval_phi(t), t, p);
}

cdouble shifted_reference_dx(double x, double t, const WavepacketParams& p,
                             const VectorPotential& vp) {
    return free_evolution_dx(x + vp.eval_phi(t), t, p);
}

namespace {

/// int_{s0}^{s1} (c0 + c1 s) / sqrt(tm - s) ds, s1 <= tm, exact.
double abel_piece(double tm, double s0, double s1, double c0, double c1) {
    double w0 = tm - s0, w1 = tm - s1;  // w0 >= w1 >= 0
    double r0 = std::sqrt(w0), r1 = std::sqrt(w1);
    return (c0 + c1 * tm) * 2.0 * (r0 - r1) - c1 * (2.0 / 3.0) * (w0 * r0 - w1 * r1);
}

/// Hat-basis Abel weights w_n = int_0^{tm} eta_n(s)/sqrt(tm - s) ds, n = 0..m.
void abel_weights(int m, double dt, std::vector<double>& w) {
    w.assign(size_t(m) + 1, 0.0);
    double tm = m * dt;
    for (int n = 0; n <= m; ++n) {
        double tn = n * dt;
        if (n > 0)  // rising piece (s - t_{n-1})/dt on [t_{n-1}, t_n]
            w[size_t(n)] += abel_piece(tm, tn - dt, tn, -(tn - dt) / dt, 1.0 / dt);
        if (n < m)  // falling piece (t_{n+1} - s)/dt on [t_n, t_{n+1}]
            w[size_t(n)] += abel_piece(tm, tn, tn + dt, (tn + dt) / dt, -1.0 / dt);
    }
}

}  // namespace

cdouble ntd_classical(const std::vector<cdouble>& v, int m, double dt) {
    if (int(v.size()) < m + 1) throw std::invalid_argument("ntd_classical: need nodes 0..m");
    static thread_local std::vector<double> w;
    abel_weights(m, dt, w);
    cdouble acc = 0.0;
    for (int n = 0; n <= m; ++n) acc += w[size_t(n)] * v[size_t(n)];
    return std::polar(1.0 / std::sqrt(M_PI), -3.0 * M_PI / 4.0) * acc;
}

cdouble dtn_classical(const std::vector<cdouble>& u, int m, double dt) {
    if (int(u.size()) < m + 1) throw std::invalid_argument("dtn_classical: need nodes 0..m");
    double tm = m * dt;
    cdouble acc = 0.0;
    for (int n = 1; n <= m; ++n) {
        // u' = (u_n - u_{n-1})/dt on (t_{n-1}, t_n)
        double w0 = tm - (n - 1) * dt, w1 = tm - n * dt;
        acc += (u[size_t(n)] - u[size_t(n) - 1]) / dt * 2.0 * (std::sqrt(w0) - std::sqrt(w1));
    }
    return std::polar(1.0 / std::sqrt(M_PI), 3.0 * M_PI / 4.0) * acc;
}

double l2_norm(const std::vector<cdouble>& u, double dx) {
    double s = 0.0;
    for (const cdouble& z : u) s += std::norm(z);
    return std::sqrt(dx * s);
}

double l2_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b, double dx) {
    if (a.size() != b.size()) throw std::invalid_argument("l2_diff: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(dx * s);
}

}  // namespace tbc
