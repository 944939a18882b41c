// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance                      run all ten, exit 1 on any failure
//   acceptance --only 1 3           run a subset
//   acceptance --expect-fail 1 2    exit 0 iff exactly these fail

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mmsir/errors.hpp"
#include "mmsir/mc_engine.hpp"
#include "mmsir/sir_analytic.hpp"
#include "mmsir/specfun.hpp"
#include "mmsir/spectral_eff.hpp"

using namespace mmsir;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

template <class... T>
std::string fmt(const char* f, T... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SirScenario scenario(int n, CellLoadModel load, Allocation a, double eta = 4.0) {
    return {n, load, a, Delta::from_eta(eta)};
}

const RhoMethod kGp = RhoMethod::gil_pelaez();

Outcome s_star_table() {
    struct Row {
        double eta, printed;
    };
    const Row rows[] = {{3.5, -0.672}, {3.6, -0.710}, {3.7, -0.747}, {3.8, -0.783},
                        {3.9, -0.819}, {4.0, -0.854}, {4.1, -0.888}, {4.2, -0.922}};
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0, worst_eta = 0.0;
    int bad = 0;
    for (const Row& r : rows) {
        const double gap = std::abs(solve_s_star(Delta::from_eta(r.eta)) - r.printed);
        if (gap > 5e-4) ++bad;
        if (gap > worst) worst = gap, worst_eta = r.eta;
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && secs < 1.0,
            fmt("%d/8 rows within 5e-4; worst |s* - printed| = %.3g at eta = %.1f; %.3f s", 8 - bad, worst,
                worst_eta, secs)};
}

Outcome se_table() {
    struct Entry {
        const char* what;
        Allocation alloc;
        bool poisson;
        int kind;  // 0: 3%-ile, 1: average user, 2: average sum
        double printed;
    };
    const Entry entries[] = {
        {"3%-ile Unif fixed", Allocation::Uniform, false, 0, 1.60},
        {"3%-ile Unif Poisson", Allocation::Uniform, true, 0, 1.51},
        {"3%-ile Eq fixed", Allocation::EqualSir, false, 0, 2.20},
        {"3%-ile Eq Poisson", Allocation::EqualSir, true, 0, 1.94},
        {"user Unif fixed", Allocation::Uniform, false, 1, 2.76},
        {"user Unif Poisson", Allocation::Uniform, true, 1, 2.84},
        {"user Eq fixed", Allocation::EqualSir, false, 1, 2.61},
        {"user Eq Poisson", Allocation::EqualSir, true, 1, 2.69},
        {"sum Unif fixed", Allocation::Uniform, false, 2, 27.6},
        {"sum Unif Poisson", Allocation::Uniform, true, 2, 27.08},
        {"sum Eq fixed", Allocation::EqualSir, false, 2, 26.1},
        {"sum Eq Poisson", Allocation::EqualSir, true, 2, 25.56},
    };
    const auto t0 = std::chrono::steady_clock::now();
    int good = 0;
    std::string misses;
    for (const Entry& e : entries) {
        const SirScenario sc =
            scenario(100, e.poisson ? CellLoadModel::poisson(10.0) : CellLoadModel::fixed(10), e.alloc);
        const double v = e.kind == 0 ? se_percentile(0.03, sc, kGp) : e.kind == 1 ? avg_user_se(sc) : avg_sum_se(sc);
        if (std::abs(v - e.printed) <= 0.02) {
            ++good;
        } else {
            misses += fmt("; %s = %.4f vs %.2f", e.what, v, e.printed);
        }
    }
    const double secs = seconds_since(t0);
    return {good == 12 && secs < 60.0, fmt("%d/12 entries within 0.02 b/s/Hz", good) + misses + fmt("; %.1f s", secs)};
}

Outcome dimensioning() {
    const double f5 = sir_cdf(1.0, scenario(50, CellLoadModel::fixed(10), Allocation::Uniform), kGp);
    const double f45 = sir_cdf(1.0, scenario(45, CellLoadModel::fixed(10), Allocation::Uniform), kGp);
    return {f5 <= 0.03 && f45 > 0.03, fmt("F(0 dB) = %.5f at N_a/K = 5, %.5f at N_a/K = 4.5", f5, f45)};
}

Outcome hardening() {
    const std::array<std::array<int, 2>, 3> sizes{{{100, 10}, {400, 40}, {1600, 160}}};
    std::vector<double> below, above;
    for (const auto& [n, k] : sizes) {
        const SirScenario sc = scenario(n, CellLoadModel::fixed(k), Allocation::EqualSir);
        below.push_back(sir_cdf(db_to_linear(6.0), sc, kGp));
        above.push_back(1.0 - sir_cdf(db_to_linear(8.0), sc, kGp));
    }
    const bool monotone = below[0] > below[1] && below[1] > below[2] && above[0] > above[1] && above[1] > above[2];
    const bool vanishing = below[2] < 0.05 && above[2] < 0.05;
    const double limit = hardening_limit(scenario(100, CellLoadModel::fixed(10), Allocation::EqualSir));
    const double marker = std::round(linear_to_db(limit) * 10.0) / 10.0;
    return {monotone && vanishing && limit == 5.0 && marker == 7.0,
            fmt("F(6 dB) = %.4f, %.4f, %.2e; 1-F(8 dB) = %.4f, %.4f, %.2e; limit %.17g = %.4f dB -> %.1f dB", below[0],
                below[1], below[2], above[0], above[1], above[2], limit, linear_to_db(limit), marker)};
}

Outcome cross_method() {
    const double thetas[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    double closed_gap = 0.0, euler_gap = 0.0, skipped_gap = 0.0;
    for (double d : {0.5, 0.571}) {
        const AnalyticEnv env = AnalyticEnv::make(Delta::from_delta(d));
        for (double t : thetas) {
            const double gp = rho_cdf(t, env, kGp);
            euler_gap = std::max(euler_gap, std::abs(gp - rho_cdf(t, env, RhoMethod::euler_inversion())));
            const double cf = std::abs(gp - rho_cdf(t, env, RhoMethod::closed_form()));
            // below 1/(2+eps) the closed form is only asymptotic
            if (t >= 1.0 / (2.0 + env.epsilon)) {
                closed_gap = std::max(closed_gap, cf);
            } else {
                skipped_gap = std::max(skipped_gap, cf);
            }
        }
    }
    return {closed_gap <= 2e-3 && euler_gap <= 2e-3,
            fmt("max |closed - GP| = %.2e (theta >= 1/(2+eps)), max |GP - Euler| = %.2e; asymptotic branch at "
                "theta = 0.25 differs by %.2e",
                closed_gap, euler_gap, skipped_gap)};
}

Outcome montecarlo_vs_analytic() {
    std::vector<double> grid;
    for (int i = 0; i <= 800; ++i) grid.push_back(-15.0 + 0.05 * i);
    std::string detail;
    bool ok = true;
    for (Allocation a : {Allocation::Uniform, Allocation::EqualSir}) {
        McConfig c;
        c.layout = LayoutSpec::hex(499);
        c.prop.sigma_db = 10.0;
        c.allocation = a;
        c.target_samples = 200'000;
        c.seed = 2024;
        const McResult r = run_montecarlo(c);
        const EmpiricalCdf e = estimate_cdf(r.sir_db);
        const CdfCurve curve = sir_cdf_curve(grid, scenario(100, CellLoadModel::fixed(10), a), kGp);
        const CdfComparison cmp = compare_cdfs(curve, e, {0.1, 0.5, 0.9});
        detail += fmt("%s%s gaps", detail.empty() ? "" : "; ", to_string(a).c_str());
        for (const PercentileGap& g : cmp.percentiles) {
            ok = ok && g.available && std::abs(g.gap) <= 1.0;
            detail += g.available ? fmt(" %+.2f", g.gap) : std::string(" n/a");
        }
        detail += fmt(" dB (n = %.0f, median CI +-%.2f%%)", static_cast<double>(e.size()), 100.0 * e.ci_halfwidth(0.5));
    }
    return {ok, detail};
}

Outcome mean_inverse_rho_property() {
    PropagationParams p;
    p.sigma_db = 10.0;
    std::string detail;
    bool ok = true;
    for (double eta : {4.0, 3.5}) {
        p.eta = eta;
        const MeanEstimate e = estimate_mean_inverse_rho(1.0, 1000, p, 100'000, 7);
        const double target = mean_inverse_rho(Delta::from_eta(eta));
        const double z = (e.mean - target) / e.std_error;
        ok = ok && std::abs(z) <= 3.0;
        detail += fmt("%sdelta %.3f: %.4f +- %.4f vs %.4f (z = %+.2f)", detail.empty() ? "" : "; ", 2.0 / eta, e.mean,
                      e.std_error, target, z);
    }
    return {ok, detail};
}

std::shared_ptr<const Layout> hex127() {
    static const auto lay = [] {
        Rng rng(0);
        return std::make_shared<const Layout>(generate_layout(LayoutSpec::hex(127), rng));
    }();
    return lay;
}

NetworkSnapshot random_snapshot(std::uint64_t index, int k) {
    PropagationParams p;
    p.sigma_db = 10.0;
    p.l_ref_db = -128.0;
    Rng rng = snapshot_rng(99, index);
    return drop_users(hex127(), UserPolicy::fixed(k), p, rng, index);
}

Outcome reductions() {
    const double rho_snr = NoiseParams::example7().rho_snr();
    int exact = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto snap = random_snapshot(i, 10);
        bool same = true;
        for (Allocation a : {Allocation::Uniform, Allocation::EqualSir}) {
            const auto sir = snapshot_sir(snap, 100, a);
            same = same && sir == snapshot_sir_contaminated(snap, 100, a, PilotSets{});
            const auto quiet = snapshot_sinr(snap, 100, a, 0.0, rho_snr);
            for (std::size_t u = 0; u < sir.size(); ++u) worst = std::max(worst, std::abs(quiet[u] / sir[u] - 1.0));
        }
        exact += same;
    }
    return {exact == 100 && worst <= 1e-9,
            fmt("empty P identical on %d/100 snapshots; max |SINR/SIR - 1| at zero noise = %.2e", exact, worst)};
}

Outcome effective_reuse() {
    PropagationParams p;
    p.sigma_db = 10.0;
    const MeanEstimate e =
        estimate_effective_reuse(LayoutSpec::ppp(500), p, 10, PilotConfig::random_search(1.0 / 7.0, 500), 100, 1);
    return {std::abs(e.mean - 8.5) <= 0.5,
            fmt("mean effective reuse %.3f +- %.3f over %.0f layouts", e.mean, e.std_error,
                static_cast<double>(e.layouts))};
}

Outcome invariants() {
    std::vector<std::string> failed;
    std::vector<double> grid;
    for (int i = 0; i <= 160; ++i) grid.push_back(-10.0 + 0.25 * i);

    // distribution functions
    bool valid = true;
    for (Allocation a : {Allocation::Uniform, Allocation::EqualSir}) {
        for (CellLoadModel load : {CellLoadModel::fixed(10), CellLoadModel::poisson(10.0)}) {
            valid = valid && sir_cdf_curve(grid, scenario(100, load, a), kGp).is_valid();
        }
    }
    valid = valid && sir_cdf_curve(grid, scenario(100, CellLoadModel::fixed(10), Allocation::Uniform),
                                   RhoMethod::closed_form())
                         .is_valid();
    McConfig c;
    c.layout = LayoutSpec::hex(127);
    c.prop.sigma_db = 8.0;
    c.target_samples = 2000;
    c.seed = 5;
    valid = valid && estimate_cdf(run_montecarlo(c).sir_db).to_curve(grid).is_valid(0.0);
    if (!valid) failed.push_back("CDF bounds");

    // (100, 10) and (50, 5)
    bool ratio = true;
    for (double db : grid) {
        const double t = db_to_linear(db);
        ratio = ratio && sir_cdf(t, scenario(100, CellLoadModel::fixed(10), Allocation::Uniform), kGp) ==
                             sir_cdf(t, scenario(50, CellLoadModel::fixed(5), Allocation::Uniform), kGp);
    }
    if (!ratio) failed.push_back("ratio invariance");

    // one user per cell
    bool single = true;
    for (double db : {-5.0, 0.0, 3.0, 6.0, 9.0}) {
        const double t = db_to_linear(db);
        single = single && std::abs(sir_cdf(t, scenario(10, CellLoadModel::fixed(1), Allocation::EqualSir), kGp) -
                                    sir_cdf(t, scenario(10, CellLoadModel::fixed(1), Allocation::Uniform), kGp)) <
                               1e-6;
    }
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto snap = random_snapshot(1000 + i, 1);
        single = single && snapshot_sir(snap, 100, Allocation::EqualSir) == snapshot_sir(snap, 100, Allocation::Uniform);
    }
    if (!single) failed.push_back("K = 1 equivalence");

    bool equal = true;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto eq = snapshot_sir(random_snapshot(i, 10), 100, Allocation::EqualSir);
        const auto [lo, hi] = std::minmax_element(eq.begin(), eq.end());
        equal = equal && (*hi - *lo) <= 1e-12 * *hi;
    }
    if (!equal) failed.push_back("equal-SIR equality");

    // every cell and its six neighbours use all 7 groups; every 4-cluster all 4;
    // co-pilot cells are never adjacent
    const std::array<std::array<int, 2>, 6> nb{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
    bool pattern = true;
    for (const auto& a : hex127()->axial) {
        std::set<int> seven{hex_pilot_group(a, 7)};
        std::set<int> four;
        for (const auto& d : nb) {
            const std::array<int, 2> b{a[0] + d[0], a[1] + d[1]};
            seven.insert(hex_pilot_group(b, 7));
            pattern = pattern && hex_pilot_group(b, 7) != hex_pilot_group(a, 7) &&
                      hex_pilot_group(b, 4) != hex_pilot_group(a, 4);
        }
        for (const auto& d : std::array<std::array<int, 2>, 4>{{{0, 0}, {1, 0}, {0, 1}, {-1, 1}}}) {
            four.insert(hex_pilot_group({a[0] + d[0], a[1] + d[1]}, 4));
        }
        pattern = pattern && seven.size() == 7 && four.size() == 4;
    }
    if (!pattern) failed.push_back("hex reuse patterns");

    std::string detail = "CDF bounds, ratio invariance, K = 1 equivalence, equal-SIR equality, hex reuse patterns";
    if (failed.empty()) return {true, detail + ": all hold"};
    detail = "violated:";
    for (const auto& f : failed) detail += " " + f + ";";
    return {false, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only, expect_fail;
    app.add_option("--only", only, "criteria to run");
    app.add_option("--expect-fail", expect_fail, "criteria known to fail");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "s* reference values", s_star_table},
        {2, "spectral-efficiency reference values", se_table},
        {3, "dimensioning at 3% outage", dimensioning},
        {4, "equal-SIR hardening", hardening},
        {5, "three methods for F_rho", cross_method},
        {6, "Monte-Carlo vs analytic, hex, sigma 10 dB", montecarlo_vs_analytic},
        {7, "E[1/rho] = delta/(1-delta)", mean_inverse_rho_property},
        {8, "contamination reductions", reductions},
        {9, "random pilot search effective reuse", effective_reuse},
        {10, "invariant suite", invariants},
    };

    std::set<int> failed;
    int ran = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) failed.insert(c.id);
        std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - static_cast<int>(failed.size()), ran);
    if (app.count("--expect-fail") == 0) return failed.empty() ? 0 : 1;

    std::set<int> expected;
    for (int id : expect_fail) {
        if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
    }
    if (failed == expected) {
        if (!expected.empty()) std::printf("failures match the known deviations\n");
        return 0;
    }
    for (int id : failed) {
        if (!expected.count(id)) std::printf("unexpected failure: %d\n", id);
    }
    for (int id : expected) {
        if (!failed.count(id)) std::printf("expected failure did not occur: %d\n", id);
    }
    return 1;
}
