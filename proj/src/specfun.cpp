#include "mmsir/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-300;
constexpr double kSeriesEps = 1e-17;
constexpr int kMaxSeriesTerms = 2000;
constexpr int kMaxContinuedFractionTerms = 20000;

// Cancellation in the Maclaurin sum grows like exp(|z| - Re z); below this
// the loss stays under ~3e3 ulp.
constexpr double kSeriesCancellationBudget = 8.0;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

enum class Regime { Series, ReflectedSeries, ContinuedFraction, Asymptotic };

Regime select_regime(cplx z) {
    const double r = std::abs(z);
    if (r > detail::kAsymptoticRadius) return Regime::Asymptotic;
    if (z.real() >= 0.0) {
        return r - z.real() <= kSeriesCancellationBudget ? Regime::Series
                                                          : Regime::ContinuedFraction;
    }
    return r + z.real() <= kSeriesCancellationBudget ? Regime::ReflectedSeries
                                                      : Regime::ContinuedFraction;
}

// sum_n z^n / (b)_n  =  1F1(1; b; z)
cplx unit_a_series(double b, cplx z) {
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        term *= z / (b + n);
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum) && n > std::abs(z)) return sum;
    }
    throw AccuracyError("1F1(1;b;z) series did not converge", std::abs(sum), std::abs(term));
}

// 1F1(-delta; 1-delta; w) = 1 - delta * sum_{n>=1} w^n / (n! (n - delta))
cplx neg_delta_series(double delta, cplx w) {
    cplx power = 1.0;
    cplx sum = 0.0;
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        power *= w / static_cast<double>(n);
        const cplx term = power / (n - delta);
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum) && n > std::abs(w)) {
            return 1.0 - delta * sum;
        }
    }
    throw AccuracyError("1F1(-delta;1-delta;w) series did not converge", std::abs(sum),
                        std::abs(power));
}

// (delta/z) sum_s (1+delta)_s (-1/z)^s, truncated at its smallest term.
cplx algebraic_asymptotic_part(double delta, cplx z) {
    const cplx minus_inv = -1.0 / z;
    cplx term = 1.0;
    cplx sum = 1.0;
    double last = 1.0;
    for (int s = 0; s < kMaxSeriesTerms; ++s) {
        const cplx next = term * (1.0 + delta + s) * minus_inv;
        const double mag = std::abs(next);
        if (mag >= last) break;  // divergent tail starts here
        sum += next;
        term = next;
        last = mag;
        if (mag <= kSeriesEps * std::abs(sum)) break;
    }
    return delta / z * sum;
}

// Exponentially-weighted and algebraic parts: M(z) = e^z * dominant + algebraic.
struct Split {
    cplx dominant;
    cplx algebraic;
};

Split split_large(double delta, cplx z, Regime regime) {
    const cplx dominant = std::tgamma(1.0 - delta) * std::pow(z, delta);
    if (regime == Regime::Asymptotic) return {dominant, algebraic_asymptotic_part(delta, z)};
    return {dominant, delta * upper_gamma_cf(-delta, z)};
}

void check_finite(cplx z) {
    if (!finite(z)) throw DomainError("kummer_1f1_unit_a: non-finite argument");
}

}  // namespace

Delta Delta::from_eta(double eta) {
    if (!std::isfinite(eta) || !(eta > 2.0)) {
        throw DomainError("path-loss exponent eta must be finite and > 2");
    }
    return Delta(2.0 / eta, eta);
}

Delta Delta::from_delta(double delta) {
    if (!std::isfinite(delta) || !(delta > 0.0) || !(delta < 1.0)) {
        throw DomainError("delta must lie in (0, 1)");
    }
    return Delta(delta, 2.0 / delta);
}

namespace detail {

cplx kummer_scaled_series(Delta delta, cplx z) {
    return std::exp(-z) * unit_a_series(1.0 - delta.value(), z);
}

cplx kummer_scaled_reflected_series(Delta delta, cplx z) {
    return neg_delta_series(delta.value(), -z);
}

cplx kummer_scaled_continued_fraction(Delta delta, cplx z) {
    const Split s = split_large(delta.value(), z, Regime::ContinuedFraction);
    return s.dominant + std::exp(-z) * s.algebraic;
}

cplx kummer_scaled_asymptotic(Delta delta, cplx z) {
    const Split s = split_large(delta.value(), z, Regime::Asymptotic);
    return s.dominant + std::exp(-z) * s.algebraic;
}

double hyp2f1_series(double a, double b, double c, double w) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 200000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * w;
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) return sum;
    }
    throw AccuracyError("2F1 series did not converge", sum, term);
}

}  // namespace detail

cplx kummer_1f1_unit_a_scaled(Delta delta, cplx z) {
    check_finite(z);
    switch (select_regime(z)) {
        case Regime::Series: return detail::kummer_scaled_series(delta, z);
        case Regime::ReflectedSeries: return detail::kummer_scaled_reflected_series(delta, z);
        case Regime::ContinuedFraction:
            return detail::kummer_scaled_continued_fraction(delta, z);
        case Regime::Asymptotic: return detail::kummer_scaled_asymptotic(delta, z);
    }
    return {};
}

cplx kummer_1f1_unit_a(Delta delta, cplx z) {
    check_finite(z);
    const Regime regime = select_regime(z);
    switch (regime) {
        case Regime::Series: return unit_a_series(1.0 - delta.value(), z);
        case Regime::ReflectedSeries:
            return std::exp(z) * neg_delta_series(delta.value(), -z);
        case Regime::ContinuedFraction:
        case Regime::Asymptotic: {
            const Split s = split_large(delta.value(), z, regime);
            // e^z underflows harmlessly deep in the left half-plane
            return std::exp(z) * s.dominant + s.algebraic;
        }
    }
    return {};
}

double kummer_1f1_unit_a(Delta delta, double x) {
    return kummer_1f1_unit_a(delta, cplx(x, 0.0)).real();
}

double kummer_1f1_neg_delta(Delta delta, double x) {
    if (!std::isfinite(x)) throw DomainError("kummer_1f1_neg_delta: non-finite argument");
    return neg_delta_series(delta.value(), cplx(x, 0.0)).real();
}

double lower_gamma_neg_delta_scaled(Delta delta, double s) {
    if (!std::isfinite(s)) throw DomainError("lower_gamma_neg_delta_scaled: non-finite argument");
    const double d = delta.value();
    double power = 1.0;
    double sum = -1.0 / d;  // n = 0 term: 1 / (0 - delta)
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        power *= -s / n;
        const double term = power / (n - d);
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum) && n > std::abs(s)) return sum;
    }
    throw AccuracyError("lower incomplete gamma series did not converge", sum, power);
}

cplx upper_gamma_cf(double a, cplx z) {
    check_finite(z);
    if (z.real() <= 0.0 && z.imag() == 0.0) {
        throw DomainError("upper_gamma_cf: argument on the branch cut");
    }
    // Modified Lentz evaluation of the Legendre continued fraction.
    cplx b = z + 1.0 - a;
    cplx c = 1.0 / kTiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < kMaxContinuedFractionTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw AccuracyError("incomplete gamma continued fraction did not converge", std::abs(h),
                        std::abs(d * c - 1.0));
}

double b_delta(Delta delta, double x) {
    if (std::isnan(x) || !(x > 0.0)) throw DomainError("b_delta requires x > 0");
    if (std::isinf(x)) return 0.0;
    const double d = delta.value();
    const double a = 1.0;
    const double b = d + 1.0;
    const double c = 2.0 * d + 2.0;
    // Pfaff: 2F1(a,b;c;-1/x) = x/(1+x) * 2F1(a, c-b; c; 1/(1+x)); here c-b = b.
    const double w = 1.0 / (1.0 + x);
    double f;
    if (w <= 0.9) {
        f = detail::hyp2f1_series(a, c - b, c, w);
    } else {
        // w near 1: connect to 1-w (c - a - b' = delta is never an integer)
        const double bb = c - b;
        const double g1 = std::tgamma(c) * std::tgamma(c - a - bb) /
                          (std::tgamma(c - a) * std::tgamma(c - bb));
        const double g2 = std::tgamma(c) * std::tgamma(a + bb - c) /
                          (std::tgamma(a) * std::tgamma(bb));
        f = g1 * detail::hyp2f1_series(a, bb, a + bb - c + 1.0, 1.0 - w) +
            std::pow(1.0 - w, c - a - bb) * g2 *
                detail::hyp2f1_series(c - a, c - bb, c - a - bb + 1.0, 1.0 - w);
    }
    const double hyp = x / (1.0 + x) * f;
    const double g = std::tgamma(1.0 - d);
    return hyp * d / (std::pow(x, 1.0 + 2.0 * d) * std::tgamma(2.0 * d + 2.0) * g * g);
}

double solve_s_star(Delta delta) {
    // The root of s^delta gamma(-delta, s) coincides with that of
    // 1F1(-delta; 1-delta; -s), a real entire function decreasing in -s.
    const auto f = [&](double s) { return kummer_1f1_neg_delta(delta, -s); };
    double lo = -2.0;
    double hi = -0.1;
    if (!(f(hi) > 0.0)) throw NumericError("solve_s_star: upper bracket end is not positive");
    while (f(lo) > 0.0) {
        lo *= 2.0;
        if (lo < -1024.0) throw NumericError("solve_s_star: could not bracket the root");
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double epsilon_const(const AnalyticEnv& env) {
    const double d = env.delta.value();
    const double at_half = 1.0 - std::pow(2.0, d) * env.sinc_delta + env.b_at_one;
    return std::log(at_half) / env.s_star - 2.0;
}

AnalyticEnv AnalyticEnv::make(Delta delta) {
    const double d = delta.value();
    AnalyticEnv env{delta, solve_s_star(delta), 0.0, std::sin(kPi * d) / (kPi * d),
                    b_delta(delta, 1.0)};
    env.epsilon = epsilon_const(env);
    return env;
}

}  // namespace mmsir
