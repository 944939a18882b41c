#include <doctest.h>

#include <cmath>

#include "mmsir/errors.hpp"
#include "mmsir/spectral_eff.hpp"

using namespace mmsir;

namespace {

SirScenario make(Allocation a, bool poisson, int n = 100, double k = 10.0) {
    return {n, poisson ? CellLoadModel::poisson(k) : CellLoadModel::fixed(static_cast<int>(k)), a,
            Delta::from_eta(4.0)};
}

const RhoMethod kGp = RhoMethod::gil_pelaez();

}  // namespace

TEST_CASE("SE CDF basics") {
    const SirScenario sc = make(Allocation::Uniform, false);
    CHECK(se_cdf(0.0, sc, kGp) == 0.0);
    CHECK_THROWS_AS(se_cdf(-0.1, sc, kGp), DomainError);
    CHECK(se_cdf(std::log2(11.0), sc, kGp) == 1.0);
    CHECK(se_cdf(2.0, sc, kGp) == sir_cdf(3.0, sc, kGp));
}

TEST_CASE("SE percentile bounds") {
    const SirScenario sc = make(Allocation::Uniform, false);
    CHECK_THROWS_AS(se_percentile(0.0, sc, kGp), DomainError);
    CHECK_THROWS_AS(se_percentile(1.0, sc, kGp), DomainError);
    CHECK(se_percentile(1.0 - 1e-9, sc, RhoMethod::closed_form()) ==
          doctest::Approx(std::log2(11.0)).epsilon(1e-6));
    const double z = se_percentile(0.3, sc, kGp);
    CHECK(std::abs(se_cdf(z, sc, kGp) - 0.3) < 1e-5);
}

TEST_CASE("3%-ile user spectral efficiency, printed values") {
    CHECK(se_percentile(0.03, make(Allocation::Uniform, false), kGp) == doctest::Approx(1.60).epsilon(0.02 / 1.60));
    CHECK(se_percentile(0.03, make(Allocation::EqualSir, false), kGp) == doctest::Approx(2.20).epsilon(0.02 / 2.20));
    CHECK(se_percentile(0.03, make(Allocation::Uniform, true), kGp) == doctest::Approx(1.51).epsilon(0.02 / 1.51));
    CHECK(se_percentile(0.03, make(Allocation::EqualSir, true), kGp) == doctest::Approx(1.94).epsilon(0.02 / 1.94));
}

TEST_CASE("average spectral efficiencies, printed values") {
    CHECK(std::abs(avg_user_se(make(Allocation::Uniform, false)) - 2.76) <= 0.02);
    CHECK(std::abs(avg_user_se(make(Allocation::EqualSir, false)) - 2.61) <= 0.02);
    CHECK(std::abs(avg_user_se(make(Allocation::Uniform, true)) - 2.84) <= 0.02);
    CHECK(std::abs(avg_user_se(make(Allocation::EqualSir, true)) - 2.69) <= 0.02);
    CHECK(std::abs(avg_sum_se(make(Allocation::Uniform, false)) - 27.6) <= 0.02);
    CHECK(std::abs(avg_sum_se(make(Allocation::Uniform, true)) - 27.08) <= 0.02);
    CHECK(std::abs(avg_sum_se(make(Allocation::EqualSir, true)) - 25.56) <= 0.02);
    // the tabulated 26.1 is ten times the rounded 2.61
    const double eq_sum = avg_sum_se(make(Allocation::EqualSir, false));
    CHECK(eq_sum == doctest::Approx(26.0763154).epsilon(1e-8));
    CHECK(std::round(avg_user_se(make(Allocation::EqualSir, false)) * 100.0) * 10.0 / 100.0 == doctest::Approx(26.1));
}

TEST_CASE("frozen high-precision averages") {
    CHECK(avg_user_se(make(Allocation::Uniform, false)) == doctest::Approx(2.76021087543).epsilon(1e-9));
    CHECK(avg_user_se(make(Allocation::EqualSir, false)) == doctest::Approx(2.60763154331).epsilon(1e-9));
    CHECK(avg_user_se(make(Allocation::Uniform, true)) == doctest::Approx(2.83753970151).epsilon(1e-9));
    CHECK(avg_user_se(make(Allocation::EqualSir, true)) == doctest::Approx(2.68793672601).epsilon(1e-9));
    CHECK(avg_sum_se(make(Allocation::Uniform, true)) == doctest::Approx(27.0750052).epsilon(1e-8));
    CHECK(avg_sum_se(make(Allocation::EqualSir, true)) == doctest::Approx(25.5594261).epsilon(1e-8));
}

TEST_CASE("delta = 1/2 closed form agrees with the generic path") {
    for (int k : {1, 5, 10, 20}) {
        CHECK(std::abs(detail::avg_user_se_unif_fixed_eta4(100, k) -
                       detail::avg_user_se_unif_fixed_generic(100, k, Delta::from_delta(0.5))) < 1e-8);
    }
    // N_a/K = 5 gives 1.97
    CHECK(std::abs(avg_user_se(make(Allocation::Uniform, false, 50, 10.0)) - 1.97) < 0.01);
}

TEST_CASE("fairness ordering") {
    for (bool poisson : {false, true}) {
        for (double k : {5.0, 10.0, 20.0}) {
            const SirScenario un = make(Allocation::Uniform, poisson, 100, k);
            const SirScenario eq = make(Allocation::EqualSir, poisson, 100, k);
            INFO("poisson=" << poisson << " k=" << k);
            CHECK(se_percentile(0.03, eq, kGp) >= se_percentile(0.03, un, kGp));
            CHECK(avg_sum_se(un) >= avg_sum_se(eq));
        }
    }
}

TEST_CASE("average equals the integral of the complementary CDF") {
    for (Allocation al : {Allocation::Uniform, Allocation::EqualSir}) {
        const SirScenario sc = make(al, false);
        const RhoMethod m = al == Allocation::Uniform ? RhoMethod::euler_inversion() : kGp;
        const double top = std::log2(1.0 + sir_support(sc));
        const int n = 400;
        double integral = 0.0;
        double prev = 1.0;
        for (int i = 1; i <= n; ++i) {
            const double cur = 1.0 - se_cdf(top * i / n, sc, m);
            integral += 0.5 * (prev + cur) * top / n;
            prev = cur;
        }
        CHECK(std::abs(integral - avg_user_se(sc)) < 1e-2);
    }
}

TEST_CASE("equal-SIR average hardens to log2(1 + (1-delta) N_a/K)") {
    const double limit = std::log2(1.0 + 0.5 * 10.0);
    double prev = 1.0;
    for (int k : {10, 100, 1000}) {
        const double gap = std::abs(avg_user_se(make(Allocation::EqualSir, false, 10 * k, k)) - limit);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("query dispatch") {
    const SirScenario sc = make(Allocation::Uniform, false);
    CHECK(evaluate({sc, SeQuery::AverageUser{}}, kGp) == avg_user_se(sc));
    CHECK(evaluate({sc, SeQuery::AverageSum{}}, kGp) == avg_sum_se(sc));
    CHECK(evaluate({sc, SeQuery::CdfAt{2.0}}, kGp) == se_cdf(2.0, sc, kGp));
    CHECK(evaluate({sc, SeQuery::Percentile{0.5}}, kGp) == se_percentile(0.5, sc, kGp));
}
