#include "mmsir/spectral_eff.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

const double kLog2e = std::numbers::log2e;

// 1 / 1F1(1; 1-delta; z) for real z >= 0, free of overflow.
double inv_kummer(Delta delta, double z) {
    return std::exp(-z) / kummer_1f1_unit_a_scaled(delta, cplx(z, 0.0)).real();
}

// (1 - e^{-c z}) / z
double ramp(double c, double z) { return -std::expm1(-c * z) / z; }

}  // namespace

namespace detail {

// int_0^inf f(z) dz, split at 1 with z = 1/u on the outer part.
template <class F>
double semi_infinite(F f) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err_in = 0.0, err_out = 0.0;
    const double inner = GK::integrate(f, 0.0, 1.0, 15, 1e-12, &err_in);
    const auto mapped = [&](double u) {
        const double z = 1.0 / u;
        return f(z) * z * z;
    };
    const double outer = GK::integrate(mapped, 0.0, 1.0, 15, 1e-12, &err_out);
    const double value = inner + outer;
    if (err_in + err_out > 1e-8 * std::abs(value) + 1e-14) {
        throw AccuracyError("semi-infinite quadrature did not converge", value, err_in + err_out);
    }
    return value;
}

double avg_user_se_unif_fixed_generic(int n_antennas, int k, Delta delta) {
    const double c = static_cast<double>(n_antennas) / k;
    return kLog2e * semi_infinite([&](double z) { return ramp(c, z) * inv_kummer(delta, z); });
}

double avg_user_se_unif_fixed_eta4(int n_antennas, int k) {
    const double c = static_cast<double>(n_antennas) / k;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    return kLog2e * semi_infinite([&](double z) {
               const double r = std::sqrt(z);
               return ramp(c, z) * std::exp(-z) / (std::exp(-z) + sqrt_pi * r * std::erf(r));
           });
}

}  // namespace detail

double sir_support(const SirScenario& sc) {
    return sc.load.is_fixed() ? sc.ratio() : static_cast<double>(sc.n_antennas);
}

double se_cdf(double zeta, const SirScenario& sc, const RhoMethod& method) {
    if (std::isnan(zeta) || zeta < 0.0) throw DomainError("zeta must be >= 0");
    if (zeta == 0.0) return 0.0;
    return sir_cdf(std::exp2(zeta) - 1.0, sc, method);
}

double se_percentile(double p, const SirScenario& sc, const RhoMethod& method) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("percentile must lie in (0, 1)");
    sc.validate();
    double lo = 0.0;
    double hi = std::log2(1.0 + sir_support(sc));
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double f = se_cdf(mid, sc, method);
        if (std::abs(f - p) < 1e-5) return mid;
        (f < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double avg_user_se(const SirScenario& sc) {
    sc.validate();
    const Delta delta = sc.delta;
    const double n = sc.n_antennas;
    if (sc.load.is_fixed()) {
        const int k = sc.load.k;
        if (sc.allocation == Allocation::Uniform) {
            return delta.value() == 0.5 ? detail::avg_user_se_unif_fixed_eta4(sc.n_antennas, k)
                                        : detail::avg_user_se_unif_fixed_generic(sc.n_antennas, k, delta);
        }
        return kLog2e * detail::semi_infinite([&](double z) {
                   return ramp(1.0, z) * std::pow(inv_kummer(delta, z / n), k);
               });
    }
    const double mean = sc.load.mean;
    const detail::PoissonWindow win = detail::poisson_window(mean, 1e-14);
    if (sc.allocation == Allocation::Uniform) {
        return kLog2e * detail::semi_infinite([&](double z) {
                   double s = 0.0;  // E[1 - e^{-z N_a/K} | K >= 1]
                   for (int k = win.lo; k <= win.hi; ++k) s -= win.weights[k - win.lo] * std::expm1(-z * n / k);
                   return s / z * inv_kummer(delta, z);
               });
    }
    const double norm = -std::expm1(-mean);
    return kLog2e * detail::semi_infinite([&](double z) {
               // (e^{x} - 1) / (e^{mean} - 1) with x = mean / 1F1
               const double x = mean * inv_kummer(delta, z / n);
               return ramp(1.0, z) * std::exp(x - mean) * -std::expm1(-x) / norm;
           });
}

double avg_sum_se(const SirScenario& sc) {
    sc.validate();
    if (sc.load.is_fixed()) return sc.load.k * avg_user_se(sc);
    const Delta delta = sc.delta;
    const double n = sc.n_antennas;
    const double mean = sc.load.mean;
    if (sc.allocation == Allocation::Uniform) {
        const detail::PoissonWindow win = detail::poisson_window(mean, 1e-14);
        const double norm = -std::expm1(-mean);
        return kLog2e * detail::semi_infinite([&](double z) {
                   double s = 0.0;  // E[K (1 - e^{-z N_a/K})], unconditional
                   for (int k = win.lo; k <= win.hi; ++k) {
                       s -= norm * win.weights[k - win.lo] * k * std::expm1(-z * n / k);
                   }
                   return s / z * inv_kummer(delta, z);
               });
    }
    return kLog2e * detail::semi_infinite([&](double z) {
               const double inv = inv_kummer(delta, z / n);
               return ramp(1.0, z) * mean * std::exp(mean * inv - mean) * inv;
           });
}

double evaluate(const SeQuery& q, const RhoMethod& method) {
    return std::visit(
        [&](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, SeQuery::CdfAt>) return se_cdf(t.zeta, q.scenario, method);
            else if constexpr (std::is_same_v<T, SeQuery::Percentile>) return se_percentile(t.p, q.scenario, method);
            else if constexpr (std::is_same_v<T, SeQuery::AverageUser>) return avg_user_se(q.scenario);
            else return avg_sum_se(q.scenario);
        },
        q.target);
}

}  // namespace mmsir
