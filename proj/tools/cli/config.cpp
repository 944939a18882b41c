#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mmsir/errors.hpp"

namespace mmsir::cli {

namespace {

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
        const YAML::Mark m = at.Mark();
        std::ostringstream os;
        os << source_;
        if (!m.is_null()) os << ":" << m.line + 1 << ":" << m.column + 1;
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void expect_map(const YAML::Node& n, const std::string& what) const {
        if (!n.IsMap()) fail(n, "'" + what + "' must be a mapping");
    }

    // Rejects keys outside `allowed`.
    void check_keys(const YAML::Node& n, const std::string& what, const std::set<std::string>& allowed) const {
        expect_map(n, what);
        for (auto it = n.begin(); it != n.end(); ++it) {
            const std::string key = it->first.as<std::string>();
            if (!allowed.count(key)) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                fail(it->first, "unknown key '" + key + "' in '" + what + "' (allowed: " + list + ")");
            }
        }
    }

    template <class T>
    T scalar(const YAML::Node& n, const std::string& name, const char* type) const {
        if (!n.IsScalar()) fail(n, "'" + name + "' must be " + type);
        try {
            return n.as<T>();
        } catch (const YAML::BadConversion&) {
            fail(n, "'" + name + "' must be " + type + ", got '" + n.Scalar() + "'");
        }
    }

    double number(const YAML::Node& n, const std::string& name) const {
        const double v = scalar<double>(n, name, "a number");
        if (!std::isfinite(v)) fail(n, "'" + name + "' must be finite");
        return v;
    }
    long long integer(const YAML::Node& n, const std::string& name) const {
        return scalar<long long>(n, name, "an integer");
    }
    std::uint64_t count(const YAML::Node& n, const std::string& name) const {
        const long long v = integer(n, name);
        if (v < 0) fail(n, "'" + name + "' must be >= 0");
        return static_cast<std::uint64_t>(v);
    }
    bool boolean(const YAML::Node& n, const std::string& name) const {
        return scalar<bool>(n, name, "true or false");
    }
    std::string text(const YAML::Node& n, const std::string& name) const {
        return scalar<std::string>(n, name, "a string");
    }

    template <class E>
    E choice(const YAML::Node& n, const std::string& name, const std::map<std::string, E>& options) const {
        const std::string v = text(n, name);
        const auto it = options.find(v);
        if (it == options.end()) {
            std::string list;
            for (const auto& [k, _] : options) list += (list.empty() ? "" : ", ") + k;
            fail(n, "'" + name + "' must be one of: " + list + "; got '" + v + "'");
        }
        return it->second;
    }

    // Runs a library validator and re-raises its domain errors at `at`.
    void guard(const YAML::Node& at, const std::function<void()>& fn) const {
        try {
            fn();
        } catch (const DomainError& e) {
            fail(at, e.what());
        }
    }

    Grid grid(const YAML::Node& n, const std::string& what, Grid g) const {
        check_keys(n, what, {"min", "max", "step"});
        if (n["min"]) g.min = number(n["min"], what + ".min");
        if (n["max"]) g.max = number(n["max"], what + ".max");
        if (n["step"]) g.step = number(n["step"], what + ".step");
        if (!(g.step > 0.0)) fail(n, "'" + what + ".step' must be > 0");
        if (!(g.max > g.min)) fail(n, "'" + what + "' needs max > min");
        if ((g.max - g.min) / g.step > 1e6) fail(n, "'" + what + "' has more than 10^6 points");
        return g;
    }

    void scenario(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "scenario", {"n_antennas", "load", "allocation", "eta"});
        if (n["n_antennas"]) {
            const long long v = integer(n["n_antennas"], "scenario.n_antennas");
            if (v < 1 || v > 1'000'000) fail(n["n_antennas"], "'scenario.n_antennas' must lie in [1, 10^6]");
            c.n_antennas = static_cast<int>(v);
        }
        if (n["load"]) load(n["load"], c);
        if (n["allocation"]) {
            c.allocation = choice<Allocation>(n["allocation"], "scenario.allocation",
                                              {{"uniform", Allocation::Uniform}, {"equal_sir", Allocation::EqualSir}});
        }
        if (n["eta"]) {
            c.eta = number(n["eta"], "scenario.eta");
            if (!(c.eta > 2.0)) fail(n["eta"], "'scenario.eta' must be > 2");
        }
    }

    void load(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "scenario.load", {"model", "k", "mean"});
        enum class M { Fixed, Poisson };
        M model = c.load.is_fixed() ? M::Fixed : M::Poisson;
        if (n["model"]) model = choice<M>(n["model"], "scenario.load.model", {{"fixed", M::Fixed}, {"poisson", M::Poisson}});
        if (model == M::Fixed) {
            if (n["mean"]) fail(n["mean"], "'mean' applies to poisson loads only");
            long long k = c.load.is_fixed() ? c.load.k : std::llround(c.load.mean);
            if (n["k"]) k = integer(n["k"], "scenario.load.k");
            if (k < 1) fail(n["k"] ? n["k"] : n, "load must be >= 1 for per-user statistics");
            if (k > 1'000'000) fail(n["k"], "'scenario.load.k' is too large");
            c.load = CellLoadModel::fixed(static_cast<int>(k));
        } else {
            if (n["k"]) fail(n["k"], "'k' applies to fixed loads only");
            double mean = c.load.nominal();
            if (n["mean"]) mean = number(n["mean"], "scenario.load.mean");
            if (!(mean > 0.0)) fail(n["mean"] ? n["mean"] : n, "load must be >= 1 for per-user statistics");
            c.load = CellLoadModel::poisson(mean);
        }
    }

    void propagation(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "propagation", {"sigma_db", "l_ref_db", "antenna_gain_db", "min_distance_km"});
        if (n["sigma_db"]) c.prop.sigma_db = number(n["sigma_db"], "propagation.sigma_db");
        if (n["l_ref_db"]) c.prop.l_ref_db = number(n["l_ref_db"], "propagation.l_ref_db");
        if (n["antenna_gain_db"]) c.prop.bs_antenna_gain_db = number(n["antenna_gain_db"], "propagation.antenna_gain_db");
        if (n["min_distance_km"]) c.prop.min_distance_km = number(n["min_distance_km"], "propagation.min_distance_km");
        PropagationParams p = c.prop;
        p.eta = c.eta;
        guard(n, [&] { p.validate(); });
    }

    void layout(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "layout", {"kind", "n_cells", "bs_density"});
        if (n["kind"]) {
            c.layout.kind = choice<LayoutKind>(n["kind"], "layout.kind",
                                               {{"hex", LayoutKind::HexLattice}, {"ppp", LayoutKind::PppWithOriginBs}});
        }
        if (n["n_cells"]) {
            const long long v = integer(n["n_cells"], "layout.n_cells");
            if (v < 1 || v > 1'000'000) fail(n["n_cells"], "'layout.n_cells' must lie in [1, 10^6]");
            c.layout.n_cells = static_cast<int>(v);
        }
        if (n["bs_density"]) c.layout.bs_density = number(n["bs_density"], "layout.bs_density");
        guard(n, [&] { c.layout.validate(); });
    }

    void pilot(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "pilot", {"mode", "reuse", "membership_prob", "trials"});
        if (n["mode"]) {
            c.pilot.mode = choice<PilotMode>(n["mode"], "pilot.mode",
                                             {{"none", PilotMode::NoContamination},
                                              {"hex", PilotMode::HexPattern},
                                              {"random", PilotMode::RandomSearch}});
        }
        if (n["reuse"]) c.pilot.reuse = static_cast<int>(integer(n["reuse"], "pilot.reuse"));
        if (n["membership_prob"]) c.pilot.membership_prob = number(n["membership_prob"], "pilot.membership_prob");
        if (n["trials"]) c.pilot.trials = static_cast<int>(integer(n["trials"], "pilot.trials"));
        guard(n, [&] { c.pilot.validate(); });
    }

    void noise(const YAML::Node& n, CaseConfig& c) const {
        check_keys(n, "noise", {"enabled", "tx_power_dbm", "noise_psd_dbm_hz", "bandwidth_hz", "user_nf_db",
                                "bs_nf_db", "pilot_backoff_db", "rho_snr_db"});
        bool enabled = true;
        if (n["enabled"]) enabled = boolean(n["enabled"], "noise.enabled");
        if (!enabled) {
            if (n.size() > 1) fail(n, "a disabled noise block takes no other keys");
            c.noise.reset();
            return;
        }
        NoiseParams p = c.noise.value_or(NoiseParams::example7());
        const std::pair<const char*, double*> fields[] = {
            {"tx_power_dbm", &p.tx_power_dbm}, {"noise_psd_dbm_hz", &p.noise_psd_dbm_hz},
            {"bandwidth_hz", &p.bandwidth_hz}, {"user_nf_db", &p.user_nf_db},
            {"bs_nf_db", &p.bs_nf_db},         {"pilot_backoff_db", &p.pilot_backoff_db},
            {"rho_snr_db", &p.rho_snr_db}};
        for (const auto& [key, dst] : fields) {
            if (n[key]) *dst = number(n[key], std::string("noise.") + key);
        }
        guard(n, [&] { p.validate(); });
        c.noise = p;
    }

    RhoMethodKind method(const YAML::Node& n) const {
        return choice<RhoMethodKind>(n, "method",
                                     {{"closed", RhoMethodKind::ClosedForm},
                                      {"gilpelaez", RhoMethodKind::GilPelaez},
                                      {"euler", RhoMethodKind::EulerInversion}});
    }

    // Blocks shared by the top level and by each case.
    void case_blocks(const YAML::Node& n, CaseConfig& c) const {
        if (n["scenario"]) scenario(n["scenario"], c);
        if (n["propagation"]) propagation(n["propagation"], c);
        if (n["layout"]) layout(n["layout"], c);
        if (n["pilot"]) pilot(n["pilot"], c);
        if (n["noise"]) noise(n["noise"], c);
        if (n["method"]) c.method = method(n["method"]);
        c.prop.eta = c.eta;
        guard(n, [&] { c.scenario().validate(); });
    }

    void run(const YAML::Node& n, RunConfig& r) const {
        check_keys(n, "run", {"seed", "samples", "snapshots", "max_snapshots", "threads", "paper_grade", "theta_db", "zeta",
                              "percentiles", "out"});
        if (n["seed"]) r.seed = count(n["seed"], "run.seed");
        if (n["samples"]) r.samples = count(n["samples"], "run.samples");
        if (n["snapshots"]) r.snapshots = count(n["snapshots"], "run.snapshots");
        if (n["max_snapshots"]) r.max_snapshots = count(n["max_snapshots"], "run.max_snapshots");
        if (n["threads"]) r.threads = static_cast<unsigned>(count(n["threads"], "run.threads"));
        if (n["paper_grade"]) r.paper_grade = boolean(n["paper_grade"], "run.paper_grade");
        if (n["theta_db"]) r.theta_db = grid(n["theta_db"], "run.theta_db", r.theta_db);
        if (n["zeta"]) r.zeta = grid(n["zeta"], "run.zeta", Grid{0.0, 8.0, 0.01});
        if (n["percentiles"]) {
            const YAML::Node& ps = n["percentiles"];
            if (!ps.IsSequence() || ps.size() == 0) fail(ps, "'run.percentiles' must be a non-empty list");
            r.percentiles.clear();
            for (const auto& p : ps) {
                const double v = number(p, "run.percentiles");
                if (!(v > 0.0 && v < 1.0)) fail(p, "percentiles must lie in (0, 1)");
                r.percentiles.push_back(v);
            }
        }
        if (n["out"]) r.out = text(n["out"], "run.out");
        if (r.samples == 0 && r.snapshots == 0) fail(n, "'run' needs samples or snapshots > 0");
        if (r.max_snapshots == 0) fail(n["max_snapshots"], "'run.max_snapshots' must be >= 1");
    }

    ExperimentConfig experiment(const YAML::Node& root) const {
        if (!root.IsDefined() || root.IsNull()) throw ConfigError(source_ + ": empty configuration");
        check_keys(root, "<top level>",
                   {"title", "operation", "scenario", "propagation", "layout", "pilot", "noise", "method", "run",
                    "cases", "dimension", "s_star", "reuse"});
        ExperimentConfig cfg;
        if (root["title"]) cfg.title = text(root["title"], "title");
        if (!root["operation"]) fail(root, "missing required key 'operation'");
        cfg.operation = choice<Operation>(root["operation"], "operation",
                                          {{"analytic", Operation::Analytic},
                                           {"montecarlo", Operation::MonteCarlo},
                                           {"dimension", Operation::Dimension},
                                           {"s_star_table", Operation::SStarTable},
                                           {"se_table", Operation::SeTable},
                                           {"pilot_pattern", Operation::PilotPattern},
                                           {"effective_reuse", Operation::EffectiveReuse}});
        case_blocks(root, cfg.base);
        if (root["run"]) run(root["run"], cfg.run);
        if (root["dimension"]) {
            const YAML::Node& d = root["dimension"];
            check_keys(d, "dimension", {"p", "theta_db"});
            if (d["p"]) cfg.dimension.p = number(d["p"], "dimension.p");
            if (d["theta_db"]) cfg.dimension.theta_db = number(d["theta_db"], "dimension.theta_db");
            if (!(cfg.dimension.p > 0.0 && cfg.dimension.p < 1.0)) fail(d, "'dimension.p' must lie in (0, 1)");
        }
        if (root["s_star"]) {
            const YAML::Node& s = root["s_star"];
            check_keys(s, "s_star", {"etas"});
            if (s["etas"]) {
                if (!s["etas"].IsSequence() || s["etas"].size() == 0) fail(s["etas"], "'s_star.etas' must be a non-empty list");
                cfg.s_star_etas.clear();
                for (const auto& e : s["etas"]) {
                    const double v = number(e, "s_star.etas");
                    if (!(v > 2.0)) fail(e, "path-loss exponents must be > 2");
                    cfg.s_star_etas.push_back(v);
                }
            }
        }
        if (root["reuse"]) {
            const YAML::Node& r = root["reuse"];
            check_keys(r, "reuse", {"layouts"});
            if (r["layouts"]) {
                const long long v = integer(r["layouts"], "reuse.layouts");
                if (v < 1) fail(r["layouts"], "'reuse.layouts' must be >= 1");
                cfg.reuse_layouts = static_cast<int>(v);
            }
        }
        if (root["cases"]) {
            const YAML::Node& cs = root["cases"];
            if (!cs.IsSequence() || cs.size() == 0) fail(cs, "'cases' must be a non-empty list");
            std::set<std::string> seen;
            for (const auto& n : cs) {
                check_keys(n, "cases[]", {"label", "scenario", "propagation", "layout", "pilot", "noise", "method"});
                CaseConfig c = cfg.base;
                if (!n["label"]) fail(n, "every case needs a 'label'");
                c.label = text(n["label"], "label");
                if (c.label.empty() || c.label.find_first_not_of(
                                           "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") !=
                                           std::string::npos) {
                    fail(n["label"], "labels may use letters, digits, '_', '-' and '.' only");
                }
                if (!seen.insert(c.label).second) fail(n["label"], "duplicate case label '" + c.label + "'");
                case_blocks(n, c);
                cfg.cases.push_back(std::move(c));
            }
        } else {
            cfg.cases.push_back(cfg.base);
        }
        for (const auto& c : cfg.cases) {
            const bool mc = cfg.operation == Operation::MonteCarlo;
            if (mc && c.pilot.mode == PilotMode::HexPattern && c.layout.kind != LayoutKind::HexLattice) {
                fail(root, "case '" + c.label + "': hex pilot patterns need a hex layout");
            }
            if (mc && c.noise && c.pilot.mode != PilotMode::NoContamination) {
                fail(root, "case '" + c.label + "': SINR runs do not model pilot contamination");
            }
            if (cfg.operation == Operation::PilotPattern &&
                (c.layout.kind != LayoutKind::HexLattice || c.pilot.mode != PilotMode::HexPattern)) {
                fail(root, "case '" + c.label + "': pilot_pattern needs a hex layout and a hex pilot block");
            }
        }
        return cfg;
    }

private:
    std::string source_;
};

void emit_case(YAML::Emitter& e, const CaseConfig& c, bool with_label) {
    if (with_label) e << YAML::Key << "label" << YAML::Value << c.label;
    e << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "n_antennas" << YAML::Value << c.n_antennas;
    e << YAML::Key << "load" << YAML::Value << YAML::Flow << YAML::BeginMap;
    if (c.load.is_fixed()) {
        e << YAML::Key << "model" << YAML::Value << "fixed" << YAML::Key << "k" << YAML::Value << c.load.k;
    } else {
        e << YAML::Key << "model" << YAML::Value << "poisson" << YAML::Key << "mean" << YAML::Value << c.load.mean;
    }
    e << YAML::EndMap;
    e << YAML::Key << "allocation" << YAML::Value << (c.allocation == Allocation::Uniform ? "uniform" : "equal_sir");
    e << YAML::Key << "eta" << YAML::Value << c.eta;
    e << YAML::EndMap;

    e << YAML::Key << "propagation" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "sigma_db" << YAML::Value << c.prop.sigma_db;
    e << YAML::Key << "l_ref_db" << YAML::Value << c.prop.l_ref_db;
    e << YAML::Key << "antenna_gain_db" << YAML::Value << c.prop.bs_antenna_gain_db;
    e << YAML::Key << "min_distance_km" << YAML::Value << c.prop.min_distance_km;
    e << YAML::EndMap;

    e << YAML::Key << "layout" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << (c.layout.kind == LayoutKind::HexLattice ? "hex" : "ppp");
    e << YAML::Key << "n_cells" << YAML::Value << c.layout.n_cells;
    e << YAML::Key << "bs_density" << YAML::Value << c.layout.bs_density;
    e << YAML::EndMap;

    e << YAML::Key << "pilot" << YAML::Value << YAML::BeginMap;
    const char* mode = c.pilot.mode == PilotMode::NoContamination ? "none"
                       : c.pilot.mode == PilotMode::HexPattern    ? "hex"
                                                                  : "random";
    e << YAML::Key << "mode" << YAML::Value << mode;
    e << YAML::Key << "reuse" << YAML::Value << c.pilot.reuse;
    e << YAML::Key << "membership_prob" << YAML::Value << c.pilot.membership_prob;
    e << YAML::Key << "trials" << YAML::Value << c.pilot.trials;
    e << YAML::EndMap;

    e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "enabled" << YAML::Value << c.noise.has_value();
    if (c.noise) {
        const NoiseParams& n = *c.noise;
        e << YAML::Key << "tx_power_dbm" << YAML::Value << n.tx_power_dbm;
        e << YAML::Key << "noise_psd_dbm_hz" << YAML::Value << n.noise_psd_dbm_hz;
        e << YAML::Key << "bandwidth_hz" << YAML::Value << n.bandwidth_hz;
        e << YAML::Key << "user_nf_db" << YAML::Value << n.user_nf_db;
        e << YAML::Key << "bs_nf_db" << YAML::Value << n.bs_nf_db;
        e << YAML::Key << "pilot_backoff_db" << YAML::Value << n.pilot_backoff_db;
        e << YAML::Key << "rho_snr_db" << YAML::Value << n.rho_snr_db;
    }
    e << YAML::EndMap;
    e << YAML::Key << "method" << YAML::Value << to_string(c.method);
}

void emit_grid(YAML::Emitter& e, const char* key, const Grid& g) {
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "min" << YAML::Value << g.min << YAML::Key << "max" << YAML::Value << g.max;
    e << YAML::Key << "step" << YAML::Value << g.step << YAML::EndMap;
}

}  // namespace

std::string to_string(Operation op) {
    switch (op) {
        case Operation::Analytic: return "analytic";
        case Operation::MonteCarlo: return "montecarlo";
        case Operation::Dimension: return "dimension";
        case Operation::SStarTable: return "s_star_table";
        case Operation::SeTable: return "se_table";
        case Operation::PilotPattern: return "pilot_pattern";
        case Operation::EffectiveReuse: return "effective_reuse";
    }
    return "?";
}

std::vector<double> Grid::points() const {
    const auto n = static_cast<long long>(std::floor((max - min) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long long i = 0; i <= n; ++i) out.push_back(min + static_cast<double>(i) * step);
    return out;
}

SirScenario CaseConfig::scenario() const {
    SirScenario sc;
    sc.n_antennas = n_antennas;
    sc.load = load;
    sc.allocation = allocation;
    sc.delta = Delta::from_eta(eta);
    return sc;
}

RhoMethod CaseConfig::rho_method() const {
    switch (method) {
        case RhoMethodKind::ClosedForm: return RhoMethod::closed_form();
        case RhoMethodKind::EulerInversion: return RhoMethod::euler_inversion();
        case RhoMethodKind::GilPelaez: break;
    }
    return RhoMethod::gil_pelaez();
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    return Parser(source).experiment(root);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string to_yaml(const ExperimentConfig& cfg) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    if (!cfg.title.empty()) e << YAML::Key << "title" << YAML::Value << cfg.title;
    e << YAML::Key << "operation" << YAML::Value << to_string(cfg.operation);
    emit_case(e, cfg.base, false);

    const RunConfig& r = cfg.run;
    e << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "seed" << YAML::Value << r.seed;
    e << YAML::Key << "samples" << YAML::Value << r.samples;
    e << YAML::Key << "snapshots" << YAML::Value << r.snapshots;
    e << YAML::Key << "max_snapshots" << YAML::Value << r.max_snapshots;
    e << YAML::Key << "threads" << YAML::Value << r.threads;
    e << YAML::Key << "paper_grade" << YAML::Value << r.paper_grade;
    emit_grid(e, "theta_db", r.theta_db);
    if (r.zeta) emit_grid(e, "zeta", *r.zeta);
    e << YAML::Key << "percentiles" << YAML::Value << YAML::Flow << r.percentiles;
    e << YAML::Key << "out" << YAML::Value << r.out;
    e << YAML::EndMap;

    e << YAML::Key << "dimension" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "p" << YAML::Value << cfg.dimension.p;
    e << YAML::Key << "theta_db" << YAML::Value << cfg.dimension.theta_db << YAML::EndMap;
    e << YAML::Key << "s_star" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "etas" << YAML::Value << cfg.s_star_etas << YAML::EndMap;
    e << YAML::Key << "reuse" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "layouts" << YAML::Value << cfg.reuse_layouts << YAML::EndMap;

    e << YAML::Key << "cases" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : cfg.cases) {
        e << YAML::BeginMap;
        emit_case(e, c, true);
        e << YAML::EndMap;
    }
    e << YAML::EndSeq << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}  // namespace mmsir::cli
