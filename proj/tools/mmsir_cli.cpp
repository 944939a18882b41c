// mmsir: analytic and Monte-Carlo SIR distributions of massive-MIMO cells.
//
//   mmsir --preset fig1 --out out/fig1
//   mmsir --config my.yaml --seed 7 --snapshots 500
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical accuracy failure,
// 4 Monte-Carlo budget exhausted, 1 anything else.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <yaml-cpp/exceptions.h>

#include "cli/config.hpp"
#include "cli/runner.hpp"
#include "mmsir/errors.hpp"

namespace fs = std::filesystem;
using namespace mmsir;

namespace {

fs::path preset_dir() {
#ifdef MMSIR_PRESET_DIR
    if (fs::is_directory(MMSIR_PRESET_DIR)) return MMSIR_PRESET_DIR;
#endif
    return "presets";
}

fs::path find_preset(const std::string& name) {
    const fs::path p = preset_dir() / (name + ".yaml");
    if (!fs::exists(p)) throw cli::ConfigError("unknown preset '" + name + "' (looked for " + p.string() + ")");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial SIR distributions of conjugate-beamforming massive-MIMO cells"};
    std::string config_path, preset, out, method;
    std::uint64_t seed = 0, snapshots = 0;
    bool paper_grade = false, list = false, dry_run = false;
    auto* config_opt = app.add_option("--config", config_path, "experiment file (YAML)")->check(CLI::ExistingFile);
    auto* preset_opt = app.add_option("--preset", preset, "bundled experiment by name (e.g. fig3, table2)");
    config_opt->excludes(preset_opt);
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    auto* snap_opt = app.add_option("--snapshots", snapshots, "run exactly this many snapshots per curve");
    app.add_flag("--paper-grade", paper_grade, "collect 2e6 samples per curve (median CI +-0.07%)");
    auto* out_opt = app.add_option("--out", out, "output directory");
    auto* method_opt = app.add_option("--method", method, "analytic method for F_rho")
                           ->check(CLI::IsMember({"closed", "gilpelaez", "euler"}));
    app.add_flag("--list-presets", list, "print the bundled presets and exit");
    app.add_flag("--dry-run", dry_run, "validate and print the resolved configuration");
    CLI11_PARSE(app, argc, argv);

    try {
        if (list) {
            std::vector<std::string> names;
            for (const auto& e : fs::directory_iterator(preset_dir())) {
                if (e.path().extension() == ".yaml") names.push_back(e.path().stem().string());
            }
            std::sort(names.begin(), names.end());
            for (const auto& n : names) std::cout << n << "\n";
            return 0;
        }
        if (config_path.empty() && preset.empty()) {
            std::cerr << "error: one of --config or --preset is required\n" << app.help();
            return 2;
        }
        cli::ExperimentConfig cfg = cli::load_config_file(config_path.empty() ? find_preset(preset).string() : config_path);
        if (*seed_opt) cfg.run.seed = seed;
        if (*snap_opt) {
            if (snapshots == 0) throw cli::ConfigError("--snapshots must be >= 1");
            cfg.run.snapshots = snapshots;
        }
        if (paper_grade) {
            cfg.run.paper_grade = true;
            cfg.run.snapshots = 0;
            cfg.run.samples = std::max(cfg.run.samples, cli::kPaperGradeSamples);
        }
        if (*out_opt) cfg.run.out = out;
        if (*method_opt) {
            const auto kind = method == "closed"  ? RhoMethodKind::ClosedForm
                              : method == "euler" ? RhoMethodKind::EulerInversion
                                                  : RhoMethodKind::GilPelaez;
            cfg.base.method = kind;
            for (auto& c : cfg.cases) c.method = kind;
        }
        if (dry_run) {
            std::cout << cli::to_yaml(cfg);
            return 0;
        }
        cli::run_experiment(cfg, std::cerr);
        return 0;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const YAML::Exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
