#include "mmsir/gil_pelaez.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPanel = 2.0 * kPi;
constexpr int kTailOrders = 3;   // powers of the e^{-z} correction
constexpr int kTailSeries = 5;   // terms of the algebraic series per order
constexpr double kAsymptoticStart = 40.0;

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double integrate(F f, double a, double b, double* err = nullptr) {
    double error = 0.0;
    const double v = GK::integrate(f, a, b, 12, 1e-11, &error);
    if (err) *err = error;
    return v;
}

// (1/M)-expansion coefficients: Sum_s c_s x^s raised to the m-th power.
std::vector<double> poly_pow(const std::vector<double>& c, int m, int order) {
    std::vector<double> out(order + 1, 0.0);
    out[0] = 1.0;
    for (int r = 0; r < m; ++r) {
        std::vector<double> next(order + 1, 0.0);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) next[i + j] += out[i] * c[j];
        out = std::move(next);
    }
    return out;
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(tolerance > 0.0) || tolerance > 1e-3) {
        throw DomainError("quadrature tolerance must lie in (0, 1e-3]");
    }
    if (max_panels < 1) throw DomainError("max_panels must be positive");
}

std::vector<PowerTail> kummer_power_tail(Delta delta, double nu, double a, int k, double weight) {
    // M(z) = e^z D (1 + u),  D = Gamma(1-d) z^d,
    // u = e^{-z} (d/Gamma(1-d)) z^{-1-d} Sum_s (1+d)_s (-1/z)^s
    const double d = delta.value();
    const double g = std::tgamma(1.0 - d);
    std::vector<double> alg(kTailSeries + 1);
    alg[0] = 1.0;
    for (int s = 1; s <= kTailSeries; ++s) alg[s] = -alg[s - 1] * (d + s);
    const cplx log_ia(std::log(a), kPi / 2.0);

    std::vector<PowerTail> out;
    double binom = 1.0;  // binomial(-k, m)
    for (int m = 0; m <= kTailOrders; ++m) {
        if (m > 0) binom *= -(k + m - 1.0) / m;
        const std::vector<double> series = poly_pow(alg, m, kTailSeries);
        const double pref = weight * binom * std::pow(d / g, m) * std::pow(g, -k);
        for (int s = 0; s <= kTailSeries; ++s) {
            if (series[s] == 0.0) continue;
            const double power = k * d + m * (1.0 + d) + s;
            out.push_back({pref * series[s] * std::exp(-power * log_ia),
                           nu - (k + m) * a, power});
        }
    }
    return out;
}

cplx oscillatory_power_integral(double nu, double q, double omega) {
    if (nu == 0.0) return std::pow(omega, 1.0 - q) / (q - 1.0);
    if (nu < 0.0) return std::conj(oscillatory_power_integral(-nu, q, omega));
    const double start = (kAsymptoticStart + q) / nu;
    cplx head = 0.0;
    double from = omega;
    if (omega < start) {
        // log-variable quadrature: only a handful of oscillations remain
        const double u0 = std::log(omega), u1 = std::log(start);
        const int pieces = 1 + static_cast<int>(nu * (start - omega) / kPi);
        const double h = (u1 - u0) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double lo = u0 + p * h, hi = lo + h;
            const double re = integrate(
                [&](double u) { return std::cos(nu * std::exp(u)) * std::exp(u * (1.0 - q)); }, lo, hi);
            const double im = integrate(
                [&](double u) { return std::sin(nu * std::exp(u)) * std::exp(u * (1.0 - q)); }, lo, hi);
            head += cplx(re, im);
        }
        from = start;
    }
    // repeated integration by parts
    const cplx inv = 1.0 / cplx(0.0, nu * from);
    cplx term = 1.0, sum = 1.0;
    double last = 1.0;
    for (int n = 0; n < 200; ++n) {
        const cplx next = term * (q + n) * inv;
        const double mag = std::abs(next);
        if (mag >= last) break;
        sum += next;
        term = next;
        last = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    const cplx lead = -std::exp(cplx(0.0, nu * from)) * std::pow(from, -q) / cplx(0.0, nu);
    return head + lead * sum;
}

namespace {

double tail_integral(const std::vector<PowerTail>& tail, double omega) {
    double total = 0.0;
    for (const PowerTail& t : tail) {
        const double q = t.power + 1.0;
        const double mag = std::abs(t.coeff) * std::pow(omega, 1.0 - q);
        if (!(mag > 1e-18)) continue;
        total += (t.coeff * oscillatory_power_integral(t.freq, q, omega)).imag();
    }
    return total;
}

}  // namespace

double gil_pelaez_cdf(const std::function<cplx(double)>& phi, const std::vector<PowerTail>& tail,
                      double omega_hint, const QuadratureSettings& settings) {
    settings.validate();
    const auto integrand = [&](double w) { return phi(w).imag() / w; };
    const double target = settings.tolerance * kPi / 10.0;

    double start = std::clamp(omega_hint, 2.0 * kPanel, 100.0 * kPanel);
    int panels = static_cast<int>(std::ceil(start / kPanel));
    double body = 0.0;
    int done = 0;
    const auto extend = [&](int upto) {
        if (upto > settings.max_panels) return false;
        for (; done < upto; ++done) body += integrate(integrand, done * kPanel, (done + 1) * kPanel);
        return true;
    };
    extend(panels);
    double previous = body + tail_integral(tail, panels * kPanel);
    int settled = 0;
    for (;;) {
        const int next = panels * 2;
        if (!extend(next)) {
            throw AccuracyError("Gil-Pelaez integral did not settle", 0.5 - previous / kPi,
                                std::abs(previous - (body + tail_integral(tail, done * kPanel))) / kPi);
        }
        panels = next;
        const double current = body + tail_integral(tail, panels * kPanel);
        const double change = std::abs(current - previous);
        previous = current;
        if (change < target) {
            if (++settled == 2) break;
        } else {
            settled = 0;
        }
    }
    return 0.5 - previous / kPi;
}

}  // namespace mmsir
