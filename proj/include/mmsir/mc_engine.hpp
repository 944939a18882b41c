#pragma once

// Monte-Carlo SIR/SINR of the reference cell, empirical CDFs with confidence
// half-widths, and analytic-versus-empirical comparison.

#include <cstdint>
#include <optional>
#include <vector>

#include "mmsir/geometry.hpp"
#include "mmsir/sir_analytic.hpp"

namespace mmsir {

/// Link budget for the SINR variants. Powers in dBm, noise PSD in dBm/Hz.
struct NoiseParams {
    double tx_power_dbm = 47.8;
    double noise_psd_dbm_hz = -174.0;
    double bandwidth_hz = 20e6;
    double user_nf_db = 7.0;
    double bs_nf_db = 3.0;
    double pilot_backoff_db = 20.0;
    double rho_snr_db = 16.0;  ///< forward over reverse SNR

    /// pilot backoff minus the noise-figure difference
    static double implied_rho_snr_db(double pilot_backoff_db, double user_nf_db, double bs_nf_db) {
        return pilot_backoff_db - (user_nf_db - bs_nf_db);
    }
    static NoiseParams example7() { return {}; }

    void validate() const;
    /// sigma^2 / P at the user receiver, linear.
    double noise_to_power() const;
    double rho_snr() const;
};

/// Per-user SIR of BS 0's users, in cell order. Empty when BS 0 serves nobody.
std::vector<double> snapshot_sir(const NetworkSnapshot& snap, int n_antennas, Allocation alloc);

/// SINR with sigma^2/P and rho_SNR given linearly.
std::vector<double> snapshot_sinr(const NetworkSnapshot& snap, int n_antennas, Allocation alloc,
                                  double noise_to_power, double rho_snr);
std::vector<double> snapshot_sinr(const NetworkSnapshot& snap, int n_antennas, Allocation alloc,
                                  const NoiseParams& noise);

/// SIR with pilot contamination from the BSs in `pilots.contaminators`.
/// Each of them must serve at least as many users as BS 0; slot k of cell
/// ell pairs with slot k of BS 0.
std::vector<double> snapshot_sir_contaminated(const NetworkSnapshot& snap, int n_antennas,
                                              Allocation alloc, const PilotSets& pilots);

/// 1/rho_k = sum_{ell != 0} G_{ell,(k)} / G_(k) for each BS-0 user.
std::vector<double> inverse_rho(const NetworkSnapshot& snap);

/// Sorted samples with binomial 95% confidence half-widths.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }
    /// Fraction of samples <= x.
    double operator()(double x) const;
    /// Smallest sample x with F(x) >= p.
    double quantile(double p) const;
    double ci_halfwidth(double p) const;
    /// Half-width at the median within +-0.07%.
    bool meets_paper_target() const { return ci_halfwidth(0.5) <= kPaperHalfwidth; }
    CdfCurve to_curve(const std::vector<double>& grid, bool db = true) const;

    static constexpr double kPaperHalfwidth = 0.0007;

private:
    std::vector<double> sorted_;
};

/// Requires at least 100 samples.
EmpiricalCdf estimate_cdf(std::vector<double> samples);

double ci_halfwidth(double p, std::size_t n);

struct PercentileGap {
    double p = 0.0;
    bool available = false;
    double analytic = 0.0;   ///< same units as the abscissa
    double empirical = 0.0;
    double gap = 0.0;        ///< empirical - analytic
};

struct CdfComparison {
    std::vector<PercentileGap> percentiles;
    double sup_gap = 0.0;  ///< max |F_analytic - F_empirical| over the analytic grid
};

/// Horizontal gaps at `percentiles` and sup-norm vertical gap. The empirical
/// samples must be in the abscissa units of `analytic`.
CdfComparison compare_cdfs(const CdfCurve& analytic, const EmpiricalCdf& empirical,
                           const std::vector<double>& percentiles);

/// Quantile of a sampled curve by linear interpolation; nullopt outside its range.
std::optional<double> curve_quantile(const CdfCurve& curve, double p);

enum class Measure { Sir, Sinr };

/// One Monte-Carlo experiment on the reference cell.
struct McConfig {
    LayoutSpec layout = LayoutSpec::hex();
    PropagationParams prop{};
    int n_antennas = 100;
    CellLoadModel load = CellLoadModel::fixed(10);
    Allocation allocation = Allocation::Uniform;
    PilotConfig pilot{};
    Measure measure = Measure::Sir;
    NoiseParams noise{};
    std::uint64_t seed = 1;
    std::uint64_t target_samples = 200'000;
    std::uint64_t snapshots = 0;  ///< exact snapshot count; 0 runs until target_samples
    std::uint64_t max_snapshots = 10'000'000;
    unsigned threads = 0;  ///< 0: hardware concurrency

    void validate() const;
    UserPolicy user_policy() const;
};

struct McResult {
    std::vector<double> sir_db;  ///< in snapshot order
    std::uint64_t snapshots = 0;
    std::uint64_t empty_snapshots = 0;  ///< BS 0 served nobody
    double mean_effective_reuse = 0.0;  ///< RandomSearch only
};

/// Per-snapshot samples, reproducible from (seed, index) alone.
struct SnapshotOutcome {
    std::vector<double> values;
    double effective_reuse = 0.0;
};
SnapshotOutcome run_snapshot(const McConfig& cfg, std::uint64_t index,
                             const std::shared_ptr<const Layout>& fixed_layout = nullptr);

/// Runs snapshots 0, 1, ... until `target_samples` values are collected, or
/// exactly `snapshots` of them when that is set.
/// Batches run in parallel and merge in index order, so the output does not
/// depend on the thread count.
McResult run_montecarlo(const McConfig& cfg);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t layouts = 0;
};

/// Mean of 1/rho at the typical location: a user at the origin of a PPP of
/// BSs with mean count `mean_n_bs` on a disc of density `bs_density`, served
/// by its strongest BS. With `far_field_mean`, the mean interference of the
/// PPP beyond the disc is added to each sample.
MeanEstimate estimate_mean_inverse_rho(double bs_density, int mean_n_bs, const PropagationParams& prop,
                                       std::uint64_t n_samples, std::uint64_t seed,
                                       bool far_field_mean = true);

/// E[sum chi / r^eta] over a PPP of density `bs_density` outside radius `radius`.
double far_field_interference(double bs_density, double radius, const PropagationParams& prop);

/// Mean effective pilot reuse of the random search over `n_layouts` PPP layouts.
MeanEstimate estimate_effective_reuse(const LayoutSpec& layout, const PropagationParams& prop,
                                      int k, const PilotConfig& pilot, int n_layouts,
                                      std::uint64_t seed);

}  // namespace mmsir
