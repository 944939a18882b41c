#pragma once

// Independent high-precision reference implementations used only by tests.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>

namespace oracle {

using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_cplx = boost::multiprecision::cpp_complex_50;

// 1F1(1; b; z) by the raw Maclaurin series in 50-digit arithmetic.
inline std::complex<double> kummer_unit_a(double delta, std::complex<double> z) {
    const mp_real b = mp_real(1) - mp_real(delta);
    const mp_cplx zz(mp_real(z.real()), mp_real(z.imag()));
    mp_cplx term(1);
    mp_cplx sum(1);
    const mp_real eps("1e-45");
    for (int n = 0; n < 4000; ++n) {
        term *= zz / (b + n);
        sum += term;
        if (n > 2 * abs(zz) && abs(term) < eps * abs(sum)) break;
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// B_delta(x) from the Euler integral of 2F1(1, 1+d; 2+2d; -1/x).
inline double b_delta(double d, double x) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t) { return std::pow(t * (1.0 - t), d) / (1.0 + t / x); };
    const double integral = ts.integrate(f, 0.0, 1.0);
    const double beta = std::tgamma(1.0 + d) * std::tgamma(1.0 + d) / std::tgamma(2.0 + 2.0 * d);
    const double hyp = integral / beta;
    const double g = std::tgamma(1.0 - d);
    return d * hyp / (std::pow(x, 1.0 + 2.0 * d) * std::tgamma(2.0 * d + 2.0) * g * g);
}

}  // namespace oracle
