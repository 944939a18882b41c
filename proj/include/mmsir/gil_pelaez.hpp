#pragma once

// Gil-Pelaez inversion of characteristic functions whose large-omega
// behaviour is a finite sum of oscillating power laws.

#include <functional>
#include <vector>

#include "mmsir/specfun.hpp"

namespace mmsir {

struct QuadratureSettings {
    double tolerance = 1e-7;  ///< absolute target on the CDF value
    int max_panels = 400000;

    void validate() const;
};

/// coeff * exp(i freq w) * w^-power
struct PowerTail {
    cplx coeff;
    double freq;
    double power;
};

/// Large-omega expansion of  weight * exp(i nu w) * 1F1(1; 1-delta; i a w)^-K.
std::vector<PowerTail> kummer_power_tail(Delta delta, double nu, double a, int k,
                                         double weight = 1.0);

/// int_W^inf exp(i nu w) w^-q dw for q > 1, W > 0.
cplx oscillatory_power_integral(double nu, double q, double omega);

/// 1/2 - (1/pi) int_0^inf Im{phi(w)} / w dw.
///
/// `tail` must describe phi for w beyond `omega_hint`; the integral is
/// extended by doubling until two successive estimates settle.
double gil_pelaez_cdf(const std::function<cplx(double)>& phi, const std::vector<PowerTail>& tail,
                      double omega_hint, const QuadratureSettings& settings);

}  // namespace mmsir
