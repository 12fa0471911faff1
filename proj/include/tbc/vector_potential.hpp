#ifndef TBC_VECTOR_POTENTIAL_HPP
#define TBC_VECTOR_POTENTIAL_HPP

#include <string>
#include <vector>

namespace tbc {

/// sin^2-envelope pulse A(t) = A0 sin^2(pi t / T_pulse) cos(omega t) on
/// [0, T_pulse], zero afterwards.
struct PulseParams {
    double A0 = 0.0;
    double omega = 0.0;
    double T_pulse = 0.0;
};

// Applied vector potential A(t) together with its exact antiderivative
// phi(t) = int_0^t A. The boundary kernels depend on A only through
// differences phi(t) - phi(s), so phi must be accurate to near machine
// precision; the pulse family therefore uses closed-form antiderivatives.
// Immutable after construction.
class VectorPotential {
public:
    enum class Kind { Zero, Pulse, Tabulated };

    static VectorPotential zero();
    static VectorPotential pulse(const PulseParams& p);
    // Samples (t_i, A_i) with t_0 = 0, t strictly increasing. A is a natural
    // cubic spline through the samples, extended by zero past the last sample;
    // phi integrates the spline exactly so it stays C^1.
    static VectorPotential tabulated(std::vector<double> t, std::vector<double> a);

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    const PulseParams& pulse_params() const { return pulse_; }

    /// A(t). Requires t >= 0.
    double eval_A(double t) const;
    /// phi(t) = int_0^t A(s) ds. Requires t >= 0.
    double eval_phi(double t) const;
    /// dA/dt, used by the near-diagonal kernel expansions.
    double eval_A_dot(double t) const;
    /// phi(t) - phi(s), evaluated to full precision even when t - s is tiny.
    double phi_diff(double t, double s) const;
    /// phi(t) - phi(t - delta) parametrized by the gap itself, so the result
    /// stays accurate relative to delta even when delta << ulp(t).
    double phi_diff_delta(double t, double delta) const;
    /// sup over t in [0,T] of |A(t)| (cheap bound, not a tight sup).
    double A_bound(double T) const;

    /// max over a dense sampling of [0,T] of |phi(t)|. Requires T > 0.
    double max_excursion(double T) const;

    /// Canonical one-line descriptor, used for operator compatibility checks.
    const std::string& descriptor() const { return descriptor_; }

private:
    VectorPotential() = default;

    double pulse_A(double t) const;
    double pulse_phi(double t) const;
    double pulse_A_dot(double t) const;
    double spline_A(double t) const;
    double spline_phi(double t) const;
    double spline_A_dot(double t) const;

    Kind kind_ = Kind::Zero;
    PulseParams pulse_;
    double phi_end_ = 0.0;  // phi at the end of the pulse / table

    // tabulated data: knots, values, spline second derivatives, cumulative
    // integrals of the spline up to each knot
    std::vector<double> knots_, vals_, m2_, cum_;

    std::string descriptor_;
};

}  // namespace tbc

#endif
