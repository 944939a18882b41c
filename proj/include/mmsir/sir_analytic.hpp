#pragma once

// Spatial SIR distributions of a conjugate-beamforming cell: the CDF of the
// single-user local-average SIR rho, and the per-user SIR CDFs for uniform
// and equal-SIR power allocation with fixed or Poisson user counts.

#include <optional>
#include <string>
#include <vector>

#include "mmsir/gil_pelaez.hpp"
#include "mmsir/specfun.hpp"

namespace mmsir {

enum class RhoMethodKind { ClosedForm, GilPelaez, EulerInversion };

/// Abate-Whitt Euler summation parameters.
struct EulerParams {
    double A = 18.4;
    int B = 11;
    int Q = 15;

    static EulerParams precise() { return {18.4, 11, 15}; }
    static EulerParams relaxed(int q = 20) { return {9.21, 5, q}; }
    void validate() const;
};

struct RhoMethod {
    RhoMethodKind kind = RhoMethodKind::GilPelaez;
    QuadratureSettings quadrature{};
    EulerParams euler{};

    static RhoMethod closed_form() { return {RhoMethodKind::ClosedForm, {}, {}}; }
    static RhoMethod gil_pelaez(QuadratureSettings q = {}) { return {RhoMethodKind::GilPelaez, q, {}}; }
    static RhoMethod euler_inversion(EulerParams e = EulerParams::precise()) {
        return {RhoMethodKind::EulerInversion, {}, e};
    }
};

std::string to_string(RhoMethodKind kind);

enum class Allocation { Uniform, EqualSir };

std::string to_string(Allocation a);

/// Users per cell: a fixed count, or Poisson with the given mean.
struct CellLoadModel {
    enum class Kind { Fixed, Poisson };
    Kind kind = Kind::Fixed;
    int k = 1;
    double mean = 1.0;

    static CellLoadModel fixed(int k) { return {Kind::Fixed, k, static_cast<double>(k)}; }
    static CellLoadModel poisson(double mean) { return {Kind::Poisson, 0, mean}; }
    bool is_fixed() const { return kind == Kind::Fixed; }
    /// K for fixed loads, the mean for Poisson loads.
    double nominal() const { return is_fixed() ? k : mean; }
};

struct SirScenario {
    int n_antennas = 100;
    CellLoadModel load = CellLoadModel::fixed(10);
    Allocation allocation = Allocation::Uniform;
    Delta delta = Delta::from_eta(4.0);

    void validate() const;
    /// N_a/K, with K replaced by its mean for Poisson loads.
    double ratio() const { return n_antennas / load.nominal(); }
};

/// Sampled distribution function.
struct CdfCurve {
    enum class Provenance { Analytic, Empirical };
    std::vector<double> abscissa;
    std::vector<double> values;
    bool abscissa_db = true;
    std::string method;
    Provenance provenance = Provenance::Analytic;
    std::optional<double> ci_halfwidth;

    /// Non-decreasing within `slack` and inside [0, 1].
    bool is_valid(double slack = 1e-9) const;
};

/// F_rho(theta).
double rho_cdf(double theta, const AnalyticEnv& env, const RhoMethod& method);
double rho_cdf(double theta, Delta delta, const RhoMethod& method);

/// Laplace transform of 1/rho, E[exp(-s/rho)] = e^s / 1F1(1; 1-delta; s).
cplx laplace_inverse_rho(Delta delta, cplx s);

double sir_unif_cdf_fixed(double theta, const SirScenario& sc, const RhoMethod& method);
double sir_eq_cdf_fixed(double theta, const SirScenario& sc, const RhoMethod& method);
double sir_unif_cdf_poisson(double theta, const SirScenario& sc, const RhoMethod& method);
double sir_eq_cdf_poisson(double theta, const SirScenario& sc, const RhoMethod& method);

/// Dispatches on allocation and load. Equal-SIR CDFs are always computed by
/// Gil-Pelaez with the method's quadrature settings: there is no closed
/// form, and Euler inversion rings on the concentrated harmonic mean.
double sir_cdf(double theta, const SirScenario& sc, const RhoMethod& method);

/// Deterministic equal-SIR limit (N_a/K)(1 - delta).
double hardening_limit(const SirScenario& sc);

/// E[1/rho] = delta / (1 - delta).
double mean_inverse_rho(Delta delta);

/// CDF of the per-user SIR on a grid of thresholds in dB.
CdfCurve sir_cdf_curve(const std::vector<double>& theta_db, const SirScenario& sc,
                       const RhoMethod& method);

double db_to_linear(double db);
double linear_to_db(double x);

namespace detail {

/// Poisson(mean) probabilities conditioned on K >= 1, indices [lo, hi]
/// chosen so the neglected mass is below `mass_eps`.
struct PoissonWindow {
    int lo;
    int hi;
    std::vector<double> weights;  // weights[k - lo]
};
PoissonWindow poisson_window(double mean, double mass_eps = 1e-10);

/// P(K >= k | K >= 1) for K ~ Poisson(mean).
double poisson_conditional_tail(double mean, int k);

/// Clamp to [0,1] after checking the excursion is numerical noise.
double clamp_probability(double p, double slack);

}  // namespace detail

}  // namespace mmsir
