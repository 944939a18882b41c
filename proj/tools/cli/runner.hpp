#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace mmsir::cli {

/// Smallest N_a/K on the 0.1 grid (0.1 ... 1000) with F_SIR,Unif(theta) <= p;
/// nullopt when the grid holds none.
std::optional<double> dimension_ratio(double p, double theta_db, Delta delta, const RhoMethod& method);

/// Runs the experiment and writes its files into cfg.run.out. Progress goes
/// to `log`.
void run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// "%.9g"
std::string fmt9(double v);

}  // namespace mmsir::cli
