#pragma once

// Spectral efficiency log2(1 + SIR): distributions, percentiles and spatial
// averages per user and per BS.

#include <variant>

#include "mmsir/sir_analytic.hpp"

namespace mmsir {

/// P[log2(1 + SIR) < zeta].
double se_cdf(double zeta, const SirScenario& sc, const RhoMethod& method);

/// zeta with F(zeta) = p, by bisection.
double se_percentile(double p, const SirScenario& sc, const RhoMethod& method);

/// Spatially averaged user spectral efficiency (b/s/Hz). Poisson loads are
/// conditioned on the BS serving at least one user.
double avg_user_se(const SirScenario& sc);

/// Spatially averaged sum spectral efficiency per BS (b/s/Hz). Poisson
/// loads use the unconditional pmf; an idle BS contributes zero.
double avg_sum_se(const SirScenario& sc);

/// Largest attainable SIR: N_a/K, or N_a for Poisson loads (one user).
double sir_support(const SirScenario& sc);

struct SeQuery {
    struct CdfAt {
        double zeta;
    };
    struct Percentile {
        double p;
    };
    struct AverageUser {};
    struct AverageSum {};

    SirScenario scenario;
    std::variant<CdfAt, Percentile, AverageUser, AverageSum> target;
};

double evaluate(const SeQuery& q, const RhoMethod& method);

namespace detail {

/// Uniform allocation, fixed K, generic Kummer evaluation.
double avg_user_se_unif_fixed_generic(int n_antennas, int k, Delta delta);

/// Same quantity at delta = 1/2 through 1F1(1;1/2;z) = 1 + e^z sqrt(pi z) erf(sqrt z).
double avg_user_se_unif_fixed_eta4(int n_antennas, int k);

}  // namespace detail

}  // namespace mmsir
