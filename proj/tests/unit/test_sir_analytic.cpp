#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

#include "mmsir/errors.hpp"
#include "mmsir/sir_analytic.hpp"

using namespace mmsir;

namespace {

SirScenario fixed_scenario(int n, int k, Allocation a, double eta = 4.0) {
    return {n, CellLoadModel::fixed(k), a, Delta::from_eta(eta)};
}

SirScenario poisson_scenario(int n, double mean, Allocation a, double eta = 4.0) {
    return {n, CellLoadModel::poisson(mean), a, Delta::from_eta(eta)};
}

// Poisson(mean) pmf conditioned on K >= 1, in 50-digit arithmetic.
std::vector<double> hp_poisson_weights(double mean, int k_max) {
    using R = boost::multiprecision::cpp_bin_float_50;
    const R m(mean);
    const R norm = exp(m) - 1;
    std::vector<double> w(k_max + 1, 0.0);
    R term(1);
    for (int k = 1; k <= k_max; ++k) {
        term *= m / k;
        w[k] = static_cast<double>(term / norm);
    }
    return w;
}

const double kGrid[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

}  // namespace

TEST_CASE("closed-form rho CDF at theta = 1") {
    const double v = rho_cdf(1.0, Delta::from_delta(0.5), RhoMethod::closed_form());
    CHECK(v == doctest::Approx(1.0 - 2.0 / std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("rho CDF rejects non-positive thresholds") {
    const Delta d = Delta::from_delta(0.5);
    for (const RhoMethod& m : {RhoMethod::closed_form(), RhoMethod::gil_pelaez(), RhoMethod::euler_inversion()}) {
        CHECK_THROWS_AS(rho_cdf(0.0, d, m), DomainError);
        CHECK_THROWS_AS(rho_cdf(-1.0, d, m), DomainError);
        CHECK_THROWS_AS(rho_cdf(NAN, d, m), DomainError);
    }
    QuadratureSettings bad;
    bad.tolerance = 1e-2;
    CHECK_THROWS_AS(rho_cdf(1.0, d, RhoMethod::gil_pelaez(bad)), DomainError);
}

TEST_CASE("three methods agree on the rho CDF") {
    for (double d : {0.5, 4.0 / 7.0}) {
        const AnalyticEnv env = AnalyticEnv::make(Delta::from_delta(d));
        for (double theta : kGrid) {
            INFO("delta=" << d << " theta=" << theta);
            const double gp = rho_cdf(theta, env, RhoMethod::gil_pelaez());
            const double eu = rho_cdf(theta, env, RhoMethod::euler_inversion());
            CHECK(std::abs(gp - eu) <= 2e-3);
            if (theta >= 1.0 / (2.0 + env.epsilon)) {
                CHECK(std::abs(rho_cdf(theta, env, RhoMethod::closed_form()) - gp) <= 2e-3);
            }
        }
    }
}

TEST_CASE("Gil-Pelaez and Euler agree tightly") {
    const AnalyticEnv env = AnalyticEnv::make(Delta::from_delta(0.5));
    for (double theta : {0.1, 0.3, 0.45, 0.55, 0.9, 1.1, 3.0, 30.0}) {
        CHECK(rho_cdf(theta, env, RhoMethod::gil_pelaez()) ==
              doctest::Approx(rho_cdf(theta, env, RhoMethod::euler_inversion())).epsilon(1e-5));
    }
    // where the closed form is exact the agreement is to quadrature tolerance
    for (double theta : {0.5, 0.75, 1.0, 2.0, 8.0}) {
        CHECK(std::abs(rho_cdf(theta, env, RhoMethod::gil_pelaez()) -
                       rho_cdf(theta, env, RhoMethod::closed_form())) < 1e-7);
    }
}

TEST_CASE("relaxed Euler profile reaches four digits") {
    const AnalyticEnv env = AnalyticEnv::make(Delta::from_delta(0.5));
    for (double theta : {0.5, 1.0, 4.0}) {
        CHECK(std::abs(rho_cdf(theta, env, RhoMethod::euler_inversion(EulerParams::relaxed())) -
                       rho_cdf(theta, env, RhoMethod::closed_form())) < 3e-4);
    }
}

TEST_CASE("deep lower tail follows exp(s*/theta)") {
    QuadratureSettings tight;
    tight.tolerance = 1e-11;
    const Delta d = Delta::from_delta(0.5);
    const double gp = rho_cdf(0.05, d, RhoMethod::gil_pelaez(tight));
    const double asym = std::exp(solve_s_star(d) / 0.05);
    CHECK(gp > asym / 2.0);
    CHECK(gp < asym * 2.0);
}

TEST_CASE("closed-form bridge is flat between 1/(2+eps) and 1/2") {
    for (double eta : {3.5, 4.0, 4.2}) {
        const AnalyticEnv env = AnalyticEnv::from_eta(eta);
        const double left = rho_cdf(1.0 / (2.0 + env.epsilon), env, RhoMethod::closed_form());
        const double right = rho_cdf(0.5, env, RhoMethod::closed_form());
        const double just_below = rho_cdf(std::nextafter(1.0 / (2.0 + env.epsilon), 0.0), env,
                                          RhoMethod::closed_form());
        CHECK(std::abs(left - right) < 1e-9);
        CHECK(std::abs(just_below - right) < 1e-9);
    }
}

TEST_CASE("uniform SIR depends on N_a and K only through their ratio") {
    const SirScenario a = fixed_scenario(100, 10, Allocation::Uniform);
    const SirScenario b = fixed_scenario(50, 5, Allocation::Uniform);
    for (double db = -10.0; db <= 10.0; db += 0.5) {
        const double t = db_to_linear(db);
        CHECK(sir_unif_cdf_fixed(t, a, RhoMethod::closed_form()) ==
              sir_unif_cdf_fixed(t, b, RhoMethod::closed_form()));
        CHECK(sir_unif_cdf_fixed(t, a, RhoMethod::gil_pelaez()) ==
              sir_unif_cdf_fixed(t, b, RhoMethod::gil_pelaez()));
        CHECK(std::abs(sir_unif_cdf_fixed(t, a, RhoMethod::euler_inversion()) -
                       sir_unif_cdf_fixed(t, b, RhoMethod::euler_inversion())) <= 1e-9);
    }
}

TEST_CASE("support bound of the fixed-K CDFs") {
    for (Allocation al : {Allocation::Uniform, Allocation::EqualSir}) {
        const SirScenario sc = fixed_scenario(100, 10, al);
        CHECK(sir_cdf(10.0, sc, RhoMethod::gil_pelaez()) == 1.0);
        CHECK(sir_cdf(50.0, sc, RhoMethod::euler_inversion()) == 1.0);
        CHECK(sir_cdf(9.99, sc, RhoMethod::gil_pelaez()) < 1.0);
    }
    CHECK(sir_cdf(100.0, poisson_scenario(100, 10, Allocation::Uniform), RhoMethod::closed_form()) == 1.0);
    CHECK(sir_cdf(250.0, poisson_scenario(100, 10, Allocation::EqualSir), RhoMethod::gil_pelaez()) == 1.0);
}

TEST_CASE("3% below 0 dB at N_a/K = 5") {
    const SirScenario sc = fixed_scenario(50, 10, Allocation::Uniform);
    const double f = sir_unif_cdf_fixed(1.0, sc, RhoMethod::gil_pelaez());
    CHECK(f == doctest::Approx(0.03).epsilon(0.005 / 0.03));
    CHECK(f <= 0.03);
}

TEST_CASE("asymptotic branch is only asymptotically exact at 3 dB, N_a/K = 10") {
    const SirScenario sc = fixed_scenario(100, 10, Allocation::Uniform);
    const double t = db_to_linear(3.0);
    const double closed = sir_unif_cdf_fixed(t, sc, RhoMethod::closed_form());
    const double gp = sir_unif_cdf_fixed(t, sc, RhoMethod::gil_pelaez());
    CHECK(gp == doctest::Approx(sir_unif_cdf_fixed(t, sc, RhoMethod::euler_inversion())).epsilon(1e-5));
    CHECK(closed / gp == doctest::Approx(1.17).epsilon(0.05));
}

TEST_CASE("equal-SIR with one user equals uniform") {
    const SirScenario eq = fixed_scenario(10, 1, Allocation::EqualSir);
    const SirScenario un = fixed_scenario(10, 1, Allocation::Uniform);
    for (double db : {-5.0, 0.0, 3.0, 6.0, 9.0, 9.9}) {
        const double t = db_to_linear(db);
        CHECK(std::abs(sir_cdf(t, eq, RhoMethod::gil_pelaez()) - sir_cdf(t, un, RhoMethod::gil_pelaez())) < 1e-6);
    }
}

TEST_CASE("equal-SIR hardening around 7 dB") {
    const SirScenario small = fixed_scenario(100, 10, Allocation::EqualSir);
    const double f7 = sir_cdf(db_to_linear(7.0), small, RhoMethod::gil_pelaez());
    const double f6 = sir_cdf(db_to_linear(6.0), small, RhoMethod::gil_pelaez());
    const double f8 = sir_cdf(db_to_linear(8.0), small, RhoMethod::gil_pelaez());
    CHECK(f6 < 0.5);
    CHECK(f8 > 0.5);  // median within 1 dB of 7 dB
    QuadratureSettings tight;
    tight.tolerance = 1e-10;
    CHECK(std::abs(f7 - sir_cdf(db_to_linear(7.0), small, RhoMethod::gil_pelaez(tight))) < 1e-7);

    const SirScenario big = fixed_scenario(1000, 100, Allocation::EqualSir);
    CHECK(sir_cdf(db_to_linear(6.0), big, RhoMethod::gil_pelaez()) < 0.05);
    CHECK(sir_cdf(db_to_linear(8.0), big, RhoMethod::gil_pelaez()) > 0.95);
}

TEST_CASE("hardening limit") {
    CHECK(hardening_limit(fixed_scenario(100, 10, Allocation::EqualSir)) == 5.0);
    CHECK(linear_to_db(hardening_limit(fixed_scenario(100, 10, Allocation::EqualSir))) ==
          doctest::Approx(6.99).epsilon(1e-3));
    CHECK(hardening_limit(fixed_scenario(50, 10, Allocation::EqualSir, 3.5)) ==
          doctest::Approx(5.0 * (1.0 - 4.0 / 7.0)));
    CHECK(hardening_limit(poisson_scenario(100, 10.0, Allocation::EqualSir)) == 5.0);
    SirScenario near_inf = fixed_scenario(100, 10, Allocation::EqualSir);
    near_inf.delta = Delta::from_delta(1e-9);
    CHECK(hardening_limit(near_inf) == doctest::Approx(10.0));
    CHECK_THROWS_AS(hardening_limit(fixed_scenario(100, 10, Allocation::Uniform)), DomainError);
    CHECK(mean_inverse_rho(Delta::from_delta(0.5)) == 1.0);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(sir_cdf(1.0, fixed_scenario(100, 0, Allocation::Uniform), RhoMethod::closed_form()),
                    DomainError);
    CHECK_THROWS_AS(sir_cdf(1.0, fixed_scenario(10, 11, Allocation::Uniform), RhoMethod::closed_form()),
                    DomainError);
    CHECK_THROWS_AS(sir_cdf(1.0, poisson_scenario(10, 0.0, Allocation::Uniform), RhoMethod::closed_form()),
                    DomainError);
}

TEST_CASE("Poisson uniform CDF equals an explicit mixture over K") {
    const SirScenario sc = poisson_scenario(100, 10.0, Allocation::Uniform);
    const std::vector<double> w = hp_poisson_weights(10.0, 60);
    for (double db : {0.0, 5.0, 10.0}) {
        const double t = db_to_linear(db);
        double oracle = 0.0;
        for (int k = 1; k <= 60; ++k) {
            oracle += w[k] * sir_unif_cdf_fixed(t, fixed_scenario(100, k, Allocation::Uniform),
                                                RhoMethod::gil_pelaez());
        }
        CHECK(sir_unif_cdf_poisson(t, sc, RhoMethod::gil_pelaez()) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("Poisson equal-SIR CDF equals an explicit mixture over K") {
    const SirScenario sc = poisson_scenario(100, 10.0, Allocation::EqualSir);
    const std::vector<double> w = hp_poisson_weights(10.0, 60);
    for (double db : {5.0, 7.0}) {
        const double t = db_to_linear(db);
        double oracle = 0.0;
        for (int k = 1; k <= 60; ++k) {
            oracle += w[k] * sir_eq_cdf_fixed(t, fixed_scenario(100, k, Allocation::EqualSir),
                                              RhoMethod::gil_pelaez());
        }
        CHECK(std::abs(sir_eq_cdf_poisson(t, sc, RhoMethod::gil_pelaez()) - oracle) < 1e-6);
    }
}

TEST_CASE("Poisson equal-SIR collapses to K = 1 for a vanishing mean") {
    const SirScenario tiny = poisson_scenario(100, 1e-6, Allocation::EqualSir);
    const SirScenario one = fixed_scenario(100, 1, Allocation::EqualSir);
    for (double db : {0.0, 10.0, 15.0, 19.0}) {
        const double t = db_to_linear(db);
        CHECK(std::abs(sir_eq_cdf_poisson(t, tiny, RhoMethod::gil_pelaez()) -
                       sir_eq_cdf_fixed(t, one, RhoMethod::gil_pelaez())) < 1e-5);
    }
}

TEST_CASE("large Poisson loads behave as a fixed ratio") {
    const SirScenario pu = poisson_scenario(10000, 1000.0, Allocation::Uniform);
    const SirScenario fu = fixed_scenario(10000, 1000, Allocation::Uniform);
    const RhoMethod m = RhoMethod::euler_inversion();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = db_to_linear(-10.0 + 19.0 * i / 49.0);
        worst = std::max(worst, std::abs(sir_cdf(t, pu, m) - sir_cdf(t, fu, m)));
    }
    CHECK(worst < 1e-2);
    // the fixed-K curve saturates at N_a/K while Poisson loads below the mean do not
    const double edge = db_to_linear(10.0);
    CHECK(sir_cdf(edge, fu, m) == 1.0);
    CHECK(sir_cdf(edge, pu, m) < 0.99);

    const SirScenario pe = poisson_scenario(10000, 1000.0, Allocation::EqualSir);
    CHECK(sir_cdf(db_to_linear(6.5), pe, RhoMethod::gil_pelaez()) < 1e-3);
    CHECK(sir_cdf(db_to_linear(7.5), pe, RhoMethod::gil_pelaez()) > 1.0 - 1e-3);
}

TEST_CASE("explicit Poisson uniform form deviates from the exact one") {
    const SirScenario sc = poisson_scenario(100, 10.0, Allocation::Uniform);
    double worst = 0.0;
    for (double db = -5.0; db <= 10.0; db += 1.0) {
        const double t = db_to_linear(db);
        worst = std::max(worst, std::abs(sir_cdf(t, sc, RhoMethod::closed_form()) -
                                         sir_cdf(t, sc, RhoMethod::gil_pelaez())));
    }
    CHECK(worst > 1e-4);
    CHECK(worst < 1e-2);
}

TEST_CASE("CDF curves are monotone and bounded") {
    std::vector<double> grid;
    for (double db = -15.0; db <= 12.0; db += 0.25) grid.push_back(db);
    for (const SirScenario& sc : {fixed_scenario(100, 10, Allocation::Uniform),
                                  poisson_scenario(100, 10.0, Allocation::Uniform)}) {
        for (const RhoMethod& m : {RhoMethod::closed_form(), RhoMethod::euler_inversion()}) {
            const CdfCurve c = sir_cdf_curve(grid, sc, m);
            CHECK(c.is_valid());
            if (sc.load.is_fixed()) CHECK(c.values.back() == 1.0);
        }
    }
    for (const SirScenario& sc : {fixed_scenario(100, 10, Allocation::EqualSir),
                                  poisson_scenario(100, 10.0, Allocation::EqualSir)}) {
        const CdfCurve c = sir_cdf_curve(grid, sc, RhoMethod::gil_pelaez());
        CHECK(c.is_valid());
    }
}

TEST_CASE("Poisson window covers the mass") {
    for (double mean : {0.01, 1.0, 10.0, 1000.0}) {
        const detail::PoissonWindow w = detail::poisson_window(mean);
        double sum = 0.0;
        for (double x : w.weights) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(w.hi >= std::ceil(mean + 10.0 * std::sqrt(mean)));
    }
    CHECK(detail::poisson_conditional_tail(10.0, 1) == 1.0);
    CHECK(detail::poisson_conditional_tail(10.0, 11) ==
          doctest::Approx(0.41696). epsilon(1e-4));
}
