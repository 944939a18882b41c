#include "mmsir/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

struct ServingTerms {
    double g;          // G_(k)
    double inv_rho;    // 1/rho_k
};

ServingTerms serving_terms(const NetworkSnapshot& snap, int u) {
    const double* g = snap.user_gains(static_cast<std::size_t>(u));
    const std::size_t n = snap.n_bs();
    double interference = 0.0;
    for (std::size_t j = 1; j < n; ++j) interference += g[j];
    if (!(interference > 0.0)) throw NumericError("snapshot has no interference at a BS-0 user");
    return {g[0], interference / g[0]};
}

std::vector<double> to_db(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return linear_to_db(x); });
    return out;
}

}  // namespace

void NoiseParams::validate() const {
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) throw DomainError("bandwidth must be > 0");
    for (double v : {tx_power_dbm, noise_psd_dbm_hz, user_nf_db, bs_nf_db, pilot_backoff_db, rho_snr_db}) {
        if (!std::isfinite(v)) throw DomainError("noise parameters must be finite");
    }
    const double implied = implied_rho_snr_db(pilot_backoff_db, user_nf_db, bs_nf_db);
    if (std::abs(implied - rho_snr_db) > 1e-9) {
        throw DomainError("rho_snr_db must equal pilot_backoff_db - (user_nf_db - bs_nf_db)");
    }
}

double NoiseParams::noise_to_power() const {
    return db_to_linear(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + user_nf_db - tx_power_dbm);
}

double NoiseParams::rho_snr() const { return db_to_linear(rho_snr_db); }

std::vector<double> inverse_rho(const NetworkSnapshot& snap) {
    const auto& users = snap.cell_users(0);
    std::vector<double> out;
    out.reserve(users.size());
    for (int u : users) out.push_back(serving_terms(snap, u).inv_rho);
    return out;
}

std::vector<double> snapshot_sir(const NetworkSnapshot& snap, int n_antennas, Allocation alloc) {
    return snapshot_sinr(snap, n_antennas, alloc, 0.0, 1.0);
}

std::vector<double> snapshot_sinr(const NetworkSnapshot& snap, int n_antennas, Allocation alloc,
                                  double noise_to_power, double rho_snr) {
    if (n_antennas < 1) throw DomainError("n_antennas must be >= 1");
    if (!(noise_to_power >= 0.0) || !(rho_snr >= 0.0)) throw DomainError("noise terms must be >= 0");
    const auto& users = snap.cell_users(0);
    const std::size_t k = users.size();
    if (k == 0) return {};
    const double na = static_cast<double>(n_antennas);
    const double per_user = na / static_cast<double>(k);
    std::vector<double> denom(k);
    for (std::size_t i = 0; i < k; ++i) {
        const ServingTerms t = serving_terms(snap, users[i]);
        const double s = noise_to_power / t.g;
        denom[i] = (1.0 + rho_snr * s) * (1.0 + t.inv_rho + s);
    }
    std::vector<double> out(k);
    if (alloc == Allocation::Uniform) {
        for (std::size_t i = 0; i < k; ++i) out[i] = per_user / denom[i];
    } else {
        const double common = na / std::accumulate(denom.begin(), denom.end(), 0.0);
        std::fill(out.begin(), out.end(), common);
    }
    return out;
}

std::vector<double> snapshot_sinr(const NetworkSnapshot& snap, int n_antennas, Allocation alloc,
                                  const NoiseParams& noise) {
    noise.validate();
    return snapshot_sinr(snap, n_antennas, alloc, noise.noise_to_power(), noise.rho_snr());
}

std::vector<double> snapshot_sir_contaminated(const NetworkSnapshot& snap, int n_antennas,
                                              Allocation alloc, const PilotSets& pilots) {
    if (n_antennas < 1) throw DomainError("n_antennas must be >= 1");
    const auto& users = snap.cell_users(0);
    const std::size_t k = users.size();
    if (k == 0) return {};
    const auto& p = pilots.contaminators;
    for (int ell : p) {
        if (ell <= 0 || static_cast<std::size_t>(ell) >= snap.n_bs()) {
            throw DomainError("contaminating BS index out of range");
        }
        if (snap.cell_users(static_cast<std::size_t>(ell)).size() < k) {
            throw DomainError("contaminating cell serves fewer users than the reference cell");
        }
    }
    const double na = static_cast<double>(n_antennas);
    const double per_user = na / static_cast<double>(k);
    std::vector<double> denom(k);
    for (std::size_t slot = 0; slot < k; ++slot) {
        const int u0 = users[slot];
        const ServingTerms t = serving_terms(snap, u0);
        double a = 0.0;  // sum_P G_(ell,k) / G_(k)
        double b = 0.0;
        for (int ell : p) {
            const auto e = static_cast<std::size_t>(ell);
            const int uk = snap.cell_users(e)[slot];
            a += snap.gain(0, static_cast<std::size_t>(uk)) / t.g;
            const double g_ell_k = snap.gain(e, static_cast<std::size_t>(u0));
            double pilots_at_ell = 0.0;  // sum_{l in P} G_{ell,(l,k)}
            for (int l : p) {
                const int ul = snap.cell_users(static_cast<std::size_t>(l))[slot];
                pilots_at_ell += snap.gain(e, static_cast<std::size_t>(ul));
            }
            b += (g_ell_k / t.g) * per_user / (1.0 + pilots_at_ell / g_ell_k);
        }
        denom[slot] = (1.0 + a) * (1.0 + t.inv_rho + b);
    }
    std::vector<double> out(k);
    if (alloc == Allocation::Uniform) {
        for (std::size_t i = 0; i < k; ++i) out[i] = per_user / denom[i];
    } else {
        const double common = na / std::accumulate(denom.begin(), denom.end(), 0.0);
        std::fill(out.begin(), out.end(), common);
    }
    return out;
}

double ci_halfwidth(double p, std::size_t n) {
    if (n == 0) throw DomainError("ci_halfwidth: no samples");
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    for (double v : sorted_) {
        if (std::isnan(v)) throw DomainError("EmpiricalCdf: NaN sample");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    if (sorted_.empty()) return 0.0;
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
    if (sorted_.empty()) throw DomainError("quantile of an empty sample");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
    const auto n = static_cast<double>(sorted_.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
    idx = std::clamp<std::size_t>(idx, 1, sorted_.size());
    return sorted_[idx - 1];
}

double EmpiricalCdf::ci_halfwidth(double p) const { return mmsir::ci_halfwidth(p, sorted_.size()); }

CdfCurve EmpiricalCdf::to_curve(const std::vector<double>& grid, bool db) const {
    CdfCurve c;
    c.abscissa = grid;
    c.abscissa_db = db;
    c.method = "montecarlo";
    c.provenance = CdfCurve::Provenance::Empirical;
    c.values.reserve(grid.size());
    for (double x : grid) c.values.push_back((*this)(x));
    c.ci_halfwidth = ci_halfwidth(0.5);
    return c;
}

EmpiricalCdf estimate_cdf(std::vector<double> samples) {
    if (samples.size() < 100) throw DomainError("estimate_cdf needs at least 100 samples");
    return EmpiricalCdf(std::move(samples));
}

std::optional<double> curve_quantile(const CdfCurve& curve, double p) {
    const auto& v = curve.values;
    const auto& x = curve.abscissa;
    if (v.empty() || v.size() != x.size()) return std::nullopt;
    const auto it = std::lower_bound(v.begin(), v.end(), p);
    if (it == v.end()) return std::nullopt;
    const auto i = static_cast<std::size_t>(it - v.begin());
    if (i == 0) {
        if (v[0] == p) return x[0];
        return std::nullopt;
    }
    const double t = (p - v[i - 1]) / (v[i] - v[i - 1]);
    return x[i - 1] + t * (x[i] - x[i - 1]);
}

CdfComparison compare_cdfs(const CdfCurve& analytic, const EmpiricalCdf& empirical,
                           const std::vector<double>& percentiles) {
    CdfComparison out;
    const double n = static_cast<double>(empirical.size());
    for (double p : percentiles) {
        PercentileGap g;
        g.p = p;
        const auto a = curve_quantile(analytic, p);
        const bool in_range = n > 0 && p >= 1.0 / n && p <= 1.0 - 1.0 / n;
        if (a && in_range) {
            g.available = true;
            g.analytic = *a;
            g.empirical = empirical.quantile(p);
            g.gap = g.empirical - g.analytic;
        }
        out.percentiles.push_back(g);
    }
    for (std::size_t i = 0; i < analytic.abscissa.size(); ++i) {
        out.sup_gap = std::max(out.sup_gap, std::abs(analytic.values[i] - empirical(analytic.abscissa[i])));
    }
    return out;
}

void McConfig::validate() const {
    layout.validate();
    prop.validate();
    pilot.validate();
    if (n_antennas < 1) throw DomainError("n_antennas must be >= 1");
    if (load.is_fixed()) {
        if (load.k < 1) throw DomainError("load must be >= 1 for per-user statistics");
        if (load.k > n_antennas) throw DomainError("fixed K must not exceed N_a");
    } else if (!(load.mean > 0.0) || !std::isfinite(load.mean)) {
        throw DomainError("Poisson load mean must be > 0");
    }
    if (measure == Measure::Sinr) {
        noise.validate();
        if (pilot.mode != PilotMode::NoContamination) {
            throw DomainError("SINR runs do not model pilot contamination");
        }
    }
    if (pilot.mode == PilotMode::HexPattern && layout.kind != LayoutKind::HexLattice) {
        throw DomainError("hex pilot patterns need a hexagonal layout");
    }
    if (target_samples == 0 && snapshots == 0) throw DomainError("need a sample target or a snapshot count");
}

UserPolicy McConfig::user_policy() const {
    if (load.is_fixed()) return UserPolicy::fixed(load.k);
    return UserPolicy::ppp(load.mean * layout.bs_density, n_antennas);
}

SnapshotOutcome run_snapshot(const McConfig& cfg, std::uint64_t index,
                             const std::shared_ptr<const Layout>& fixed_layout) {
    const std::uint64_t seed = snapshot_seed(cfg.seed, index);
    Rng rng(seed);
    std::shared_ptr<const Layout> layout = fixed_layout;
    if (!layout) layout = std::make_shared<const Layout>(generate_layout(cfg.layout, rng));
    NetworkSnapshot snap = drop_users(layout, cfg.user_policy(), cfg.prop, rng, seed);
    SnapshotOutcome out;
    const int k0 = static_cast<int>(snap.cell_users(0).size());
    if (k0 == 0) return out;
    std::vector<double> lin;
    switch (cfg.pilot.mode) {
        case PilotMode::NoContamination:
            lin = cfg.measure == Measure::Sir ? snapshot_sir(snap, cfg.n_antennas, cfg.allocation)
                                              : snapshot_sinr(snap, cfg.n_antennas, cfg.allocation, cfg.noise);
            break;
        case PilotMode::HexPattern: {
            const PilotSets sets = build_pilot_sets(snap, cfg.pilot, k0, rng);
            populate_cells(snap, sets.contaminators, k0, rng);
            lin = snapshot_sir_contaminated(snap, cfg.n_antennas, cfg.allocation, sets);
            break;
        }
        case PilotMode::RandomSearch: {
            std::vector<int> others(snap.n_bs() - 1);
            std::iota(others.begin(), others.end(), 1);
            populate_cells(snap, others, k0, rng);
            const PilotSets sets = build_pilot_sets(snap, cfg.pilot, k0, rng);
            out.effective_reuse = sets.effective_reuse(snap.n_bs());
            lin = snapshot_sir_contaminated(snap, cfg.n_antennas, cfg.allocation, sets);
            break;
        }
    }
    out.values = to_db(lin);
    return out;
}

McResult run_montecarlo(const McConfig& cfg) {
    cfg.validate();
    std::shared_ptr<const Layout> fixed_layout;
    if (cfg.layout.kind == LayoutKind::HexLattice) {
        Rng unused(0);
        fixed_layout = std::make_shared<const Layout>(generate_layout(cfg.layout, unused));
    }
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t batch = 16ULL * threads;
    McResult res;
    double reuse_sum = 0.0;
    std::uint64_t next = 0;
    const std::uint64_t limit = cfg.snapshots ? cfg.snapshots : cfg.max_snapshots;
    const auto done = [&] {
        return cfg.snapshots ? res.snapshots >= cfg.snapshots : res.sir_db.size() >= cfg.target_samples;
    };
    while (!done()) {
        if (next >= limit) throw BudgetError("snapshot budget exhausted", cfg.seed);
        const std::uint64_t count = std::min(batch, limit - next);
        std::vector<SnapshotOutcome> outcomes(count);
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&](unsigned w) {
            try {
                for (std::uint64_t i = w; i < count; i += threads) {
                    outcomes[i] = run_snapshot(cfg, next + i, fixed_layout);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);
        for (std::uint64_t i = 0; i < count && !done(); ++i) {
            ++res.snapshots;
            if (outcomes[i].values.empty()) ++res.empty_snapshots;
            res.sir_db.insert(res.sir_db.end(), outcomes[i].values.begin(), outcomes[i].values.end());
            reuse_sum += outcomes[i].effective_reuse;
        }
        next += count;
    }
    if (cfg.pilot.mode == PilotMode::RandomSearch && res.snapshots > res.empty_snapshots) {
        res.mean_effective_reuse = reuse_sum / static_cast<double>(res.snapshots - res.empty_snapshots);
    }
    return res;
}

double far_field_interference(double bs_density, double radius, const PropagationParams& prop) {
    prop.validate();
    const double sigma_ln = prop.sigma_db * std::numbers::ln10 / 10.0;
    const double mean_chi = std::exp(0.5 * sigma_ln * sigma_ln);
    const double l = db_to_linear(prop.l_ref_db + prop.bs_antenna_gain_db);
    return 2.0 * std::numbers::pi * bs_density * mean_chi * l * std::pow(radius, 2.0 - prop.eta) /
           (prop.eta - 2.0);
}

MeanEstimate estimate_mean_inverse_rho(double bs_density, int mean_n_bs, const PropagationParams& prop,
                                       std::uint64_t n_samples, std::uint64_t seed, bool far_field_mean) {
    prop.validate();
    if (!(bs_density > 0.0) || mean_n_bs < 1) throw DomainError("need a positive BS density and count");
    if (n_samples < 2) throw DomainError("need at least two samples");
    const double radius = std::sqrt(mean_n_bs / (std::numbers::pi * bs_density));
    const double far = far_field_mean ? far_field_interference(bs_density, radius, prop) : 0.0;
    std::poisson_distribution<int> count(static_cast<double>(mean_n_bs));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Layout lay;
    lay.radius = radius;
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng rng = snapshot_rng(seed, i);
        const int n = count(rng);
        lay.bs.resize(static_cast<std::size_t>(n));
        for (auto& b : lay.bs) {
            const double r = radius * std::sqrt(unif(rng));
            const double a = 2.0 * std::numbers::pi * unif(rng);
            b = {r * std::cos(a), r * std::sin(a)};
        }
        const auto g = compute_gains(lay, {0.0, 0.0}, prop, rng);
        if (g.empty()) throw NumericError("empty PPP draw; increase mean_n_bs");
        const int best = strongest(g.data(), g.size());
        double interference = far;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (static_cast<int>(j) != best) interference += g[j];
        }
        const double x = interference / g[static_cast<std::size_t>(best)];
        s += x;
        s2 += x * x;
    }
    MeanEstimate e;
    e.samples = e.layouts = n_samples;
    const double n = static_cast<double>(n_samples);
    e.mean = s / n;
    e.std_error = std::sqrt(std::max(0.0, s2 / n - e.mean * e.mean) / (n - 1.0));
    return e;
}

MeanEstimate estimate_effective_reuse(const LayoutSpec& layout, const PropagationParams& prop,
                                      int k, const PilotConfig& pilot, int n_layouts,
                                      std::uint64_t seed) {
    if (pilot.mode != PilotMode::RandomSearch) throw DomainError("effective reuse needs a random pilot search");
    if (n_layouts < 1) throw DomainError("n_layouts must be >= 1");
    std::vector<double> vals;
    for (int i = 0; i < n_layouts; ++i) {
        Rng rng = snapshot_rng(seed, static_cast<std::uint64_t>(i));
        auto lay = std::make_shared<const Layout>(generate_layout(layout, rng));
        NetworkSnapshot snap(lay, prop, snapshot_seed(seed, static_cast<std::uint64_t>(i)));
        std::vector<int> all(lay->size());
        std::iota(all.begin(), all.end(), 0);
        populate_cells(snap, all, k, rng);
        vals.push_back(build_pilot_sets(snap, pilot, k, rng).effective_reuse(lay->size()));
    }
    MeanEstimate e;
    e.layouts = e.samples = vals.size();
    e.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    double acc = 0.0;
    for (double v : vals) acc += (v - e.mean) * (v - e.mean);
    if (vals.size() > 1) e.std_error = std::sqrt(acc / (static_cast<double>(vals.size()) - 1.0) / static_cast<double>(vals.size()));
    return e;
}

}  // namespace mmsir
