#include "mmsir/sir_analytic.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

constexpr double kPi = std::numbers::pi;
// |a w| from which the power-law tail of 1F1(1;1-d;i a w) is used
constexpr double kTailArgument = 20.0;

void check_theta(double theta) {
    if (std::isnan(theta) || !(theta > 0.0)) throw DomainError("theta must be > 0");
}

// theta / (N_a/k - theta); +inf at and beyond the support bound.
double reduced_threshold(double theta, double ratio) {
    if (theta >= ratio) return INFINITY;
    return theta / (ratio - theta);
}

// Chernoff bound on P(mean of k iid 1/rho > 1/theta), using the moment
// generating function 1/1F1(-d;1-d;s) which is finite for 0 < s < -s*.
double chernoff_bound(const AnalyticEnv& env, double theta, int k) {
    double best = 1.0;
    for (double t : {0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005}) {
        const double s = -env.s_star * (1.0 - t);
        const double f = kummer_1f1_neg_delta(env.delta, s);
        if (!(f > 0.0)) continue;
        best = std::min(best, std::exp(k * (-s / theta - std::log(f))));
    }
    return best;
}

double closed_form_rho(double theta, const AnalyticEnv& env) {
    const double d = env.delta.value();
    if (theta < 1.0 / (2.0 + env.epsilon)) return std::exp(env.s_star / theta);
    if (theta < 0.5) return 1.0 - std::pow(2.0, d) * env.sinc_delta + env.b_at_one;
    if (theta < 1.0) {
        return 1.0 - std::pow(theta, -d) * env.sinc_delta + b_delta(env.delta, theta / (1.0 - theta));
    }
    return 1.0 - std::pow(theta, -d) * env.sinc_delta;
}

cplx expm1(cplx z) {
    const double s = std::sin(z.imag() / 2.0);
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// 1 - F for a variable X whose 1/X has Laplace transform `lt`, at X = theta.
// discretization error of the Euler scheme is about e^{-A}
double euler_slack(const EulerParams& p) { return std::max(1e-6, 4.0 * std::exp(-p.A)); }

template <class Lt>
double euler_upper_tail(const Lt& lt, double theta, const EulerParams& p) {
    const int n_max = p.Q + p.B;
    std::vector<double> partial(n_max + 1);
    double acc = 0.0;
    for (int q = 0; q <= n_max; ++q) {
        const cplx t(p.A / 2.0, kPi * q);
        const double term = (lt(theta * t) / t).real() * (q % 2 ? -1.0 : 1.0) / (q == 0 ? 2.0 : 1.0);
        acc += term;
        partial[q] = acc;
    }
    double sum = 0.0;
    for (int b = 0; b <= p.B; ++b) sum += boost::math::binomial_coefficient<double>(p.B, b) * partial[p.Q + b];
    return std::exp(p.A / 2.0) / std::ldexp(1.0, p.B) * sum;
}

double gp_rho(double theta, const AnalyticEnv& env, const QuadratureSettings& q) {
    if (chernoff_bound(env, theta, 1) < q.tolerance * 1e-2) return 0.0;
    const Delta delta = env.delta;
    const auto phi = [&](double w) {
        return std::exp(cplx(0.0, w)) / kummer_1f1_unit_a_scaled(delta, cplx(0.0, theta * w));
    };
    const double value =
        gil_pelaez_cdf(phi, kummer_power_tail(delta, 1.0 + theta, theta, 1), kTailArgument / theta, q);
    return detail::clamp_probability(value, 10.0 * q.tolerance);
}

// CDF of the harmonic mean of k iid rho's at theta, by Gil-Pelaez.
double harmonic_mean_cdf(double theta, const AnalyticEnv& env, int k, const RhoMethod& method) {
    if (std::isinf(theta)) return 1.0;
    const Delta delta = env.delta;
    const QuadratureSettings& q = method.quadrature;
    q.validate();
    if (chernoff_bound(env, theta, k) < q.tolerance * 1e-2) return 0.0;
    // P(rho_K < theta) through the scaled variable: characteristic argument a = theta/(k(1+theta)).
    const double a = theta / (k * (1.0 + theta));
    const auto phi = [&](double w) {
        const cplx z(0.0, a * w);
        return std::exp(cplx(0.0, w * (1.0 - k * a)) - double(k) * std::log(kummer_1f1_unit_a_scaled(delta, z)));
    };
    const double value = gil_pelaez_cdf(phi, kummer_power_tail(delta, 1.0, a, k), kTailArgument / a, q);
    return detail::clamp_probability(value, 10.0 * q.tolerance);
}

// Sum_k w_k F_k(theta) + P(K >= ceil(N_a/theta) | K >= 1).
template <class Conditional>
double poisson_mixture(double theta, const SirScenario& sc, Conditional&& conditional) {
    const double n = sc.n_antennas;
    const double mean = sc.load.mean;
    // first saturated count
    const int k_sat = static_cast<int>(std::min(std::ceil(n / theta), 2.0e9));
    const detail::PoissonWindow win = detail::poisson_window(mean);
    double total = 0.0;
    for (int k = win.lo; k <= win.hi && k < k_sat; ++k) {
        const double w = win.weights[k - win.lo];
        if (w < 1e-16) continue;
        total += w * conditional(k, reduced_threshold(theta, n / k));
    }
    total += detail::poisson_conditional_tail(mean, std::max(k_sat, 1));
    return detail::clamp_probability(total, 1e-6);
}

}  // namespace

void EulerParams::validate() const {
    if (!(A > 0.0) || B < 0 || Q < 1) throw DomainError("invalid Euler inversion parameters");
}

std::string to_string(RhoMethodKind kind) {
    switch (kind) {
        case RhoMethodKind::ClosedForm: return "closed";
        case RhoMethodKind::GilPelaez: return "gilpelaez";
        case RhoMethodKind::EulerInversion: return "euler";
    }
    return "?";
}

std::string to_string(Allocation a) { return a == Allocation::Uniform ? "uniform" : "equal_sir"; }

void SirScenario::validate() const {
    if (n_antennas < 1) throw DomainError("n_antennas must be >= 1");
    if (load.is_fixed()) {
        if (load.k < 1) throw DomainError("load must be >= 1 for per-user statistics");
        if (load.k > n_antennas) throw DomainError("fixed K must not exceed N_a");
    } else if (!(load.mean > 0.0) || !std::isfinite(load.mean)) {
        throw DomainError("Poisson load mean must be > 0");
    }
}

bool CdfCurve::is_valid(double slack) const {
    if (abscissa.size() != values.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= -slack && values[i] <= 1.0 + slack)) return false;
        if (i > 0 && values[i] < values[i - 1] - slack) return false;
        if (i > 0 && !(abscissa[i] > abscissa[i - 1])) return false;
    }
    return true;
}

cplx laplace_inverse_rho(Delta delta, cplx s) { return 1.0 / kummer_1f1_unit_a_scaled(delta, s); }

double mean_inverse_rho(Delta delta) { return delta.value() / (1.0 - delta.value()); }

double rho_cdf(double theta, const AnalyticEnv& env, const RhoMethod& method) {
    check_theta(theta);
    if (std::isinf(theta)) return 1.0;
    switch (method.kind) {
        case RhoMethodKind::ClosedForm: return closed_form_rho(theta, env);
        case RhoMethodKind::GilPelaez: return gp_rho(theta, env, method.quadrature);
        case RhoMethodKind::EulerInversion: {
            method.euler.validate();
            const auto lt = [&](cplx s) { return laplace_inverse_rho(env.delta, s); };
            return detail::clamp_probability(1.0 - euler_upper_tail(lt, theta, method.euler),
                                             euler_slack(method.euler));
        }
    }
    return NAN;
}

double rho_cdf(double theta, Delta delta, const RhoMethod& method) {
    return rho_cdf(theta, AnalyticEnv::make(delta), method);
}

double sir_unif_cdf_fixed(double theta, const SirScenario& sc, const RhoMethod& method) {
    check_theta(theta);
    sc.validate();
    const double t = reduced_threshold(theta, sc.ratio());
    if (std::isinf(t)) return 1.0;
    return rho_cdf(t, AnalyticEnv::make(sc.delta), method);
}

double sir_eq_cdf_fixed(double theta, const SirScenario& sc, const RhoMethod& method) {
    check_theta(theta);
    sc.validate();
    const double t = reduced_threshold(theta, sc.ratio());
    if (std::isinf(t)) return 1.0;
    return harmonic_mean_cdf(t, AnalyticEnv::make(sc.delta), sc.load.k, method);
}

double sir_unif_cdf_poisson(double theta, const SirScenario& sc, const RhoMethod& method) {
    check_theta(theta);
    sc.validate();
    const AnalyticEnv env = AnalyticEnv::make(sc.delta);
    return poisson_mixture(theta, sc, [&](int, double t) { return rho_cdf(t, env, method); });
}

double sir_eq_cdf_poisson(double theta, const SirScenario& sc, const RhoMethod& method) {
    check_theta(theta);
    sc.validate();
    const QuadratureSettings& q = method.quadrature;
    q.validate();
    const double n = sc.n_antennas;
    if (theta >= n) return 1.0;
    const double mean = sc.load.mean;
    const double a = theta / n;
    const double norm = -std::expm1(-mean);
    const Delta delta = sc.delta;
    // e^{iw} (exp(mean/M) - 1) / (e^mean - 1), without overflow or cancellation
    const auto phi = [&](double w) {
        const cplx z(0.0, a * w);
        const cplx x = mean * std::exp(-z) / kummer_1f1_unit_a_scaled(delta, z);
        const cplx num = std::abs(x) < 1.0 ? std::exp(-mean) * expm1(x)
                                           : std::exp(x - mean) - std::exp(-mean);
        return std::exp(cplx(0.0, w)) * num / norm;
    };
    const detail::PoissonWindow win = detail::poisson_window(mean, 1e-14);
    std::vector<PowerTail> tail;
    for (int k = win.lo; k <= win.hi; ++k) {
        const double w = win.weights[k - win.lo];
        if (w < 1e-16) continue;
        for (const PowerTail& t : kummer_power_tail(delta, 1.0, a, k, w)) tail.push_back(t);
    }
    const double value = gil_pelaez_cdf(phi, tail, kTailArgument / a, q);
    return detail::clamp_probability(value, 10.0 * q.tolerance);
}

double sir_cdf(double theta, const SirScenario& sc, const RhoMethod& method) {
    const bool fixed = sc.load.is_fixed();
    if (sc.allocation == Allocation::Uniform) {
        return fixed ? sir_unif_cdf_fixed(theta, sc, method) : sir_unif_cdf_poisson(theta, sc, method);
    }
    RhoMethod m = method;
    if (m.kind == RhoMethodKind::ClosedForm) m.kind = RhoMethodKind::GilPelaez;
    return fixed ? sir_eq_cdf_fixed(theta, sc, m) : sir_eq_cdf_poisson(theta, sc, m);
}

double hardening_limit(const SirScenario& sc) {
    sc.validate();
    if (sc.allocation != Allocation::EqualSir) {
        throw DomainError("hardening limit is defined for equal-SIR allocation");
    }
    return sc.ratio() * (1.0 - sc.delta.value());
}

CdfCurve sir_cdf_curve(const std::vector<double>& theta_db, const SirScenario& sc,
                       const RhoMethod& method) {
    CdfCurve curve;
    curve.abscissa = theta_db;
    curve.abscissa_db = true;
    curve.method = to_string(method.kind);
    curve.values.reserve(theta_db.size());
    for (double db : theta_db) curve.values.push_back(sir_cdf(db_to_linear(db), sc, method));
    return curve;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

namespace detail {

PoissonWindow poisson_window(double mean, double mass_eps) {
    if (!(mean > 0.0)) throw DomainError("Poisson mean must be > 0");
    const double spread = 10.0 * std::sqrt(mean);
    int lo = std::max(1, static_cast<int>(std::floor(mean - spread)));
    int hi = std::max(lo, static_cast<int>(std::ceil(mean + spread)));
    const double norm = -std::expm1(-mean);
    // widen until the neglected conditional mass is below mass_eps
    while (boost::math::gamma_p(hi + 1.0, mean) / norm > mass_eps) hi += 1 + hi / 8;
    // P(1 <= K < lo) = Q(lo, mean) - e^{-mean}
    while (lo > 1 && (boost::math::gamma_q(lo, mean) - std::exp(-mean)) / norm > mass_eps) {
        lo = std::max(1, lo - 1 - lo / 8);
    }
    PoissonWindow w{lo, hi, {}};
    w.weights.reserve(hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        w.weights.push_back(std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)) / norm);
    }
    return w;
}

double poisson_conditional_tail(double mean, int k) {
    if (k <= 1) return 1.0;
    // P(K >= k) is the regularized lower incomplete gamma P(k, mean)
    return boost::math::gamma_p(static_cast<double>(k), mean) / -std::expm1(-mean);
}

double clamp_probability(double p, double slack) {
    if (!std::isfinite(p) || p < -slack || p > 1.0 + slack) {
        throw AccuracyError("probability outside [0,1] beyond numerical slack", p,
                            p < 0.0 ? -p : p - 1.0);
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace detail

}  // namespace mmsir
