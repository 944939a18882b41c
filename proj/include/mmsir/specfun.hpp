#pragma once

// Special functions for the conjugate-beamforming SIR distributions.
//
// Everything here is parameterized by delta = 2/eta, the exponent of the
// propagation process. The central object is the Kummer function with unit
// first parameter, M(z) = 1F1(1; 1-delta; z), whose reciprocal (times e^z)
// is the Laplace transform of 1/rho.

#include <complex>

namespace mmsir {

using cplx = std::complex<double>;

/// Propagation exponent pair (delta, eta) with delta = 2/eta and 0 < delta < 1.
class Delta {
public:
    static Delta from_eta(double eta);
    static Delta from_delta(double delta);

    double value() const noexcept { return delta_; }
    double eta() const noexcept { return eta_; }

private:
    Delta(double delta, double eta) : delta_(delta), eta_(eta) {}
    double delta_;
    double eta_;
};

/// 1F1(1; 1-delta; z) for any finite complex z.
///
/// Relative error is below 1e-10 everywhere; in the right half-plane it is
/// typically a few ulp. Overflows to infinity for Re z beyond ~700.
cplx kummer_1f1_unit_a(Delta delta, cplx z);

/// e^{-z} 1F1(1; 1-delta; z). Finite for all Re z >= 0, which is where the
/// Laplace transform of 1/rho, e^s / 1F1(1; 1-delta; s), is evaluated.
cplx kummer_1f1_unit_a_scaled(Delta delta, cplx z);

/// Real-axis convenience, x >= 0.
double kummer_1f1_unit_a(Delta delta, double x);

/// 1F1(-delta; 1-delta; x) on the real line (entire in x).
double kummer_1f1_neg_delta(Delta delta, double x);

/// s^delta * gamma(-delta, s) for real s of either sign, from the lower
/// incomplete gamma series. For s < 0 the factor s^delta s^-delta cancels
/// analytically, so the result is real without a branch choice.
double lower_gamma_neg_delta_scaled(Delta delta, double s);

/// Continued-fraction part of the upper incomplete gamma function:
/// returns h with Gamma(a, z) = e^{-z} z^a h. Valid for |arg z| < pi.
cplx upper_gamma_cf(double a, cplx z);

/// B_delta(x) from the closed-form rho CDF on [1/2, 1); requires x > 0.
double b_delta(Delta delta, double x);

/// Negative root s* of s^delta gamma(-delta, s) = 0.
double solve_s_star(Delta delta);

/// delta-dependent constants of the closed-form rho CDF. Immutable.
struct AnalyticEnv {
    Delta delta;
    double s_star;
    double epsilon;
    double sinc_delta;
    double b_at_one;  ///< B_delta(1), cached for the constant bridge

    static AnalyticEnv make(Delta delta);
    static AnalyticEnv from_eta(double eta) { return make(Delta::from_eta(eta)); }
};

/// epsilon = log(1 - 2^delta sinc(delta) + B_delta(1)) / s* - 2.
double epsilon_const(const AnalyticEnv& env);

namespace detail {

// Individual evaluation regimes of kummer_1f1_unit_a_scaled, exposed so the
// switch boundaries can be cross-checked.
cplx kummer_scaled_series(Delta delta, cplx z);
cplx kummer_scaled_reflected_series(Delta delta, cplx z);
cplx kummer_scaled_continued_fraction(Delta delta, cplx z);
cplx kummer_scaled_asymptotic(Delta delta, cplx z);

/// Radius beyond which the large-|z| expansion is used.
inline constexpr double kAsymptoticRadius = 30.0;

/// Gauss 2F1(a, b; c; w) by direct series, 0 <= w < 1.
double hyp2f1_series(double a, double b, double c, double w);

}  // namespace detail

}  // namespace mmsir
