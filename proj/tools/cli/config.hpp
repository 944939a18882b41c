#pragma once

// Experiment configuration files: YAML, strictly validated, every error
// reported with its line and column.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmsir/mc_engine.hpp"

namespace mmsir::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Operation {
    Analytic,
    MonteCarlo,
    Dimension,
    SStarTable,
    SeTable,
    PilotPattern,
    EffectiveReuse,
};

std::string to_string(Operation op);

struct Grid {
    double min = -10.0;
    double max = 30.0;
    double step = 0.1;

    std::vector<double> points() const;
};

/// Everything one curve needs. Cases start from the top-level blocks and
/// override them key by key.
struct CaseConfig {
    std::string label = "main";
    int n_antennas = 100;
    CellLoadModel load = CellLoadModel::fixed(10);
    Allocation allocation = Allocation::Uniform;
    double eta = 4.0;
    PropagationParams prop{};
    LayoutSpec layout = LayoutSpec::hex();
    PilotConfig pilot{};
    std::optional<NoiseParams> noise;
    RhoMethodKind method = RhoMethodKind::GilPelaez;

    SirScenario scenario() const;
    RhoMethod rho_method() const;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t samples = 200'000;
    std::uint64_t snapshots = 0;
    std::uint64_t max_snapshots = 10'000'000;
    unsigned threads = 0;
    bool paper_grade = false;
    Grid theta_db{};
    std::optional<Grid> zeta;
    std::vector<double> percentiles{0.1, 0.5, 0.9};
    std::string out = "out";
};

struct DimensionQuery {
    double p = 0.03;
    double theta_db = 0.0;
};

struct ExperimentConfig {
    std::string title;
    Operation operation = Operation::Analytic;
    CaseConfig base{};
    RunConfig run{};
    std::vector<CaseConfig> cases;  ///< never empty after parsing
    DimensionQuery dimension{};
    std::vector<double> s_star_etas{3.5, 3.6, 3.7, 3.8, 3.9, 4.0, 4.1, 4.2};
    int reuse_layouts = 100;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config_file(const std::string& path);

/// Resolved configuration as YAML; parsing it back gives an identical run.
std::string to_yaml(const ExperimentConfig& cfg);

/// Samples that make the median CI half-width reach +-0.07%.
inline constexpr std::uint64_t kPaperGradeSamples = 2'000'000;

}  // namespace mmsir::cli
