#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "mmsir/errors.hpp"
#include "mmsir/spectral_eff.hpp"
#include "svg.hpp"

namespace mmsir::cli {

namespace fs = std::filesystem;

namespace {

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header << "\n";
    }
    Csv& operator<<(const std::string& cell) {
        sep();
        out_ << cell;
        return *this;
    }
    Csv& operator<<(double v) { return *this << fmt9(v); }
    void end() {
        out_ << "\n";
        first_ = true;
    }

private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string describe_load(const CellLoadModel& l) {
    return l.is_fixed() ? "fixed" : "poisson";
}

std::string describe_pilot(const PilotConfig& p) {
    switch (p.mode) {
        case PilotMode::NoContamination: return "none";
        case PilotMode::HexPattern: return "hex" + std::to_string(p.reuse);
        case PilotMode::RandomSearch: return "random";
    }
    return "?";
}

void write_cdf_csv(const fs::path& path, const char* header, const std::vector<double>& x, const std::vector<double>& f) {
    Csv csv(path, header);
    for (std::size_t i = 0; i < x.size(); ++i) {
        csv << x[i] << f[i];
        csv.end();
    }
}

std::string title_of(const ExperimentConfig& cfg) {
    return cfg.title.empty() ? to_string(cfg.operation) : cfg.title;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_analytic(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto theta = cfg.run.theta_db.points();
    std::vector<Series> plot;
    std::vector<Series> se_plot;
    std::vector<double> markers;
    std::string header = "label,allocation,load,n_antennas,k,eta,method";
    for (double p : cfg.run.percentiles) header += ",q" + fmt9(p) + "_db";
    header += ",hardening_limit_db";
    Csv summary(dir / "summary.csv", header);
    for (const auto& c : cfg.cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const SirScenario sc = c.scenario();
        const CdfCurve curve = sir_cdf_curve(theta, sc, c.rho_method());
        write_cdf_csv(dir / (c.label + ".csv"), "theta_db,cdf", curve.abscissa, curve.values);
        plot.push_back({c.label, curve.abscissa, curve.values, c.allocation == Allocation::EqualSir});
        summary << c.label << to_string(c.allocation) << describe_load(c.load) << static_cast<double>(c.n_antennas)
                << c.load.nominal() << c.eta << curve.method;
        for (double p : cfg.run.percentiles) {
            const auto q = curve_quantile(curve, p);
            summary << (q ? fmt9(*q) : std::string("nan"));
        }
        if (c.allocation == Allocation::EqualSir && c.load.is_fixed()) {
            const double limit = linear_to_db(hardening_limit(sc));
            summary << limit;
            markers.push_back(limit);
        } else {
            summary << std::string("");
        }
        summary.end();
        if (cfg.run.zeta) {
            const auto zeta = cfg.run.zeta->points();
            std::vector<double> f;
            f.reserve(zeta.size());
            for (double z : zeta) f.push_back(se_cdf(z, sc, c.rho_method()));
            write_cdf_csv(dir / (c.label + "_se.csv"), "zeta_bps_hz,cdf", zeta, f);
            se_plot.push_back({c.label, zeta, f, c.allocation == Allocation::EqualSir});
        }
        log << "  " << c.label << ": " << theta.size() << " points in " << fmt9(seconds_since(t0)) << " s\n";
    }
    PlotSpec spec{title_of(cfg), "SIR threshold (dB)", "CDF", markers};
    write_text(dir / "plot.svg", cdf_plot_svg(spec, plot));
    if (!se_plot.empty()) {
        write_text(dir / "plot_se.svg", cdf_plot_svg({title_of(cfg), "spectral efficiency (b/s/Hz)", "CDF", {}}, se_plot));
    }
}

McConfig mc_config(const CaseConfig& c, const RunConfig& r) {
    McConfig m;
    m.layout = c.layout;
    m.prop = c.prop;
    m.prop.eta = c.eta;
    m.n_antennas = c.n_antennas;
    m.load = c.load;
    m.allocation = c.allocation;
    m.pilot = c.pilot;
    if (c.noise) {
        m.measure = Measure::Sinr;
        m.noise = *c.noise;
    }
    m.seed = r.seed;
    m.target_samples = r.paper_grade ? std::max<std::uint64_t>(r.samples, kPaperGradeSamples) : r.samples;
    m.snapshots = r.paper_grade ? 0 : r.snapshots;
    m.max_snapshots = r.max_snapshots;
    m.threads = r.threads;
    return m;
}

void run_mc(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto theta = cfg.run.theta_db.points();
    std::vector<Series> plot;
    std::map<std::string, CdfCurve> analytic_cache;
    std::set<std::string> overlaid;
    Csv gaps(dir / "gaps.csv", "label,percentile,analytic_db,empirical_db,gap_db");
    Csv summary(dir / "summary.csv",
                "label,layout,sigma_db,pilot,measure,allocation,load,samples,snapshots,empty_snapshots,"
                "ci_halfwidth_median,paper_grade_ci_met,sup_gap,mean_effective_reuse");
    for (const auto& c : cfg.cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const McConfig m = mc_config(c, cfg.run);
        const McResult res = run_montecarlo(m);
        const EmpiricalCdf emp = estimate_cdf(res.sir_db);
        const CdfCurve ecurve = emp.to_curve(theta);
        write_cdf_csv(dir / (c.label + "_mc.csv"), "theta_db,cdf", ecurve.abscissa, ecurve.values);

        const SirScenario sc = c.scenario();
        std::ostringstream key;
        key << to_string(sc.allocation) << describe_load(sc.load) << sc.n_antennas << "/" << fmt9(sc.load.nominal())
            << "/" << fmt9(c.eta) << "/" << to_string(c.method);
        auto it = analytic_cache.find(key.str());
        if (it == analytic_cache.end()) {
            it = analytic_cache.emplace(key.str(), sir_cdf_curve(theta, sc, c.rho_method())).first;
        }
        const CdfCurve& acurve = it->second;
        write_cdf_csv(dir / (c.label + "_analytic.csv"), "theta_db,cdf", acurve.abscissa, acurve.values);

        const CdfComparison cmp = compare_cdfs(acurve, emp, cfg.run.percentiles);
        for (const auto& g : cmp.percentiles) {
            gaps << c.label << g.p;
            if (g.available) {
                gaps << g.analytic << g.empirical << g.gap;
            } else {
                gaps << std::string("nan") << std::string("nan") << std::string("nan");
            }
            gaps.end();
        }
        summary << c.label << (c.layout.kind == LayoutKind::HexLattice ? "hex" : "ppp") << c.prop.sigma_db
                << describe_pilot(c.pilot) << (c.noise ? "sinr" : "sir") << to_string(c.allocation)
                << describe_load(c.load) << static_cast<double>(emp.size()) << static_cast<double>(res.snapshots)
                << static_cast<double>(res.empty_snapshots) << emp.ci_halfwidth(0.5)
                << (emp.meets_paper_target() ? "yes" : "no") << cmp.sup_gap;
        if (c.pilot.mode == PilotMode::RandomSearch) {
            summary << res.mean_effective_reuse;
        } else {
            summary << std::string("");
        }
        summary.end();

        plot.push_back({c.label + " (sim)", ecurve.abscissa, ecurve.values, true});
        if (overlaid.insert(key.str()).second) {
            plot.push_back({"analytic " + to_string(c.allocation) + " " + describe_load(c.load), acurve.abscissa,
                            acurve.values, false});
        }
        log << "  " << c.label << ": " << emp.size() << " samples, " << res.snapshots << " snapshots, CI +-"
            << fmt9(emp.ci_halfwidth(0.5)) << ", " << fmt9(seconds_since(t0)) << " s";
        if (c.pilot.mode == PilotMode::RandomSearch) log << ", mean effective reuse " << fmt9(res.mean_effective_reuse);
        log << "\n";
    }
    write_text(dir / "plot.svg", cdf_plot_svg({title_of(cfg), "SIR threshold (dB)", "CDF", {}}, plot));
}

void run_dimension(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    Csv csv(dir / "dimension.csv", "p,theta_db,eta,min_ratio");
    for (const auto& c : cfg.cases) {
        const auto r = dimension_ratio(cfg.dimension.p, cfg.dimension.theta_db, Delta::from_eta(c.eta), c.rho_method());
        csv << cfg.dimension.p << cfg.dimension.theta_db << c.eta << (r ? fmt9(*r) : std::string("infeasible"));
        csv.end();
        log << "  " << c.label << ": N_a/K >= " << (r ? fmt9(*r) : std::string("infeasible")) << "\n";
    }
}

void run_s_star(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    Csv csv(dir / "table1.csv", "eta,delta,s_star,epsilon");
    for (double eta : cfg.s_star_etas) {
        const AnalyticEnv env = AnalyticEnv::from_eta(eta);
        csv << eta << env.delta.value() << env.s_star << env.epsilon;
        csv.end();
        log << "  eta " << fmt9(eta) << ": s* = " << fmt9(env.s_star) << "\n";
    }
}

void run_se_table(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    const CaseConfig& c = cfg.cases.front();
    Csv csv(dir / "table2.csv", "load,allocation,percentile3_user,average_user,average_sum");
    for (bool poisson : {false, true}) {
        for (auto alloc : {Allocation::Uniform, Allocation::EqualSir}) {
            SirScenario sc = c.scenario();
            sc.allocation = alloc;
            sc.load = poisson ? CellLoadModel::poisson(c.load.nominal())
                              : CellLoadModel::fixed(static_cast<int>(std::lround(c.load.nominal())));
            const double p3 = se_percentile(0.03, sc, c.rho_method());
            const double user = avg_user_se(sc);
            const double sum = avg_sum_se(sc);
            csv << describe_load(sc.load) << to_string(alloc) << p3 << user << sum;
            csv.end();
            log << "  " << describe_load(sc.load) << " " << to_string(alloc) << ": " << fmt9(p3) << " " << fmt9(user)
                << " " << fmt9(sum) << "\n";
        }
    }
}

void run_pattern(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    for (const auto& c : cfg.cases) {
        Rng rng(cfg.run.seed);
        const Layout lay = generate_layout(c.layout, rng);
        std::vector<int> group(lay.size());
        int shared = 0;
        Csv csv(dir / (c.label + "_pattern.csv"), "bs,x_km,y_km,q,r,group,shares_bs0_pilots");
        for (std::size_t j = 0; j < lay.size(); ++j) {
            group[j] = hex_pilot_group(lay.axial[j], c.pilot.reuse);
            const bool same = group[j] == group[0];
            shared += same && j > 0;
            csv << static_cast<double>(j) << lay.bs[j].x << lay.bs[j].y << static_cast<double>(lay.axial[j][0])
                << static_cast<double>(lay.axial[j][1]) << static_cast<double>(group[j]) << (same ? "1" : "0");
            csv.end();
        }
        write_text(dir / (c.label + ".svg"),
                   reuse_map_svg(title_of(cfg) + " (L = " + std::to_string(c.pilot.reuse) + ")", lay, group));
        log << "  " << c.label << ": " << shared << " of " << lay.size() - 1 << " other cells reuse BS 0's pilots\n";
    }
}

void run_reuse(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    Csv csv(dir / "reuse.csv", "label,layouts,mean_effective_reuse,std_error");
    for (const auto& c : cfg.cases) {
        if (c.pilot.mode != PilotMode::RandomSearch) {
            throw DomainError("case '" + c.label + "': effective_reuse needs pilot mode 'random'");
        }
        const int k = static_cast<int>(std::lround(c.load.nominal()));
        PropagationParams p = c.prop;
        p.eta = c.eta;
        const MeanEstimate e = estimate_effective_reuse(c.layout, p, k, c.pilot, cfg.reuse_layouts, cfg.run.seed);
        csv << c.label << static_cast<double>(e.layouts) << e.mean << e.std_error;
        csv.end();
        log << "  " << c.label << ": mean effective reuse " << fmt9(e.mean) << " +- " << fmt9(e.std_error) << "\n";
    }
}

}  // namespace

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::optional<double> dimension_ratio(double p, double theta_db, Delta delta, const RhoMethod& method) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("target percentile must lie in (0, 1)");
    if (!std::isfinite(theta_db)) throw DomainError("threshold must be finite");
    const double theta = db_to_linear(theta_db);
    // SIR = r / (1 + 1/rho), so F(theta) = F_rho(theta / (r - theta)) for r > theta
    const auto cdf = [&](int m) {
        const double r = m / 10.0;
        if (theta >= r) return 1.0;
        return rho_cdf(theta / (r - theta), delta, method);
    };
    int lo = 1, hi = 10'000;
    if (cdf(hi) > p) return std::nullopt;
    if (cdf(lo) <= p) return lo / 10.0;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (cdf(mid) <= p ? hi : lo) = mid;
    }
    return hi / 10.0;
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    const fs::path dir(cfg.run.out);
    fs::create_directories(dir);
    write_text(dir / "manifest.yaml",
               "# resolved configuration of this run; `mmsir --config manifest.yaml` repeats it\n" + to_yaml(cfg));
    log << title_of(cfg) << " -> " << dir.string() << "\n";
    switch (cfg.operation) {
        case Operation::Analytic: run_analytic(cfg, dir, log); break;
        case Operation::MonteCarlo: run_mc(cfg, dir, log); break;
        case Operation::Dimension: run_dimension(cfg, dir, log); break;
        case Operation::SStarTable: run_s_star(cfg, dir, log); break;
        case Operation::SeTable: run_se_table(cfg, dir, log); break;
        case Operation::PilotPattern: run_pattern(cfg, dir, log); break;
        case Operation::EffectiveReuse: run_reuse(cfg, dir, log); break;
    }
}

}  // namespace mmsir::cli
