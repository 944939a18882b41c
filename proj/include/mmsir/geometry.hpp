#pragma once

// Network realizations: base-station layouts, user drops with lognormal
// shadowing, strongest-gain association and pilot-reuse sets.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "mmsir/specfun.hpp"

namespace mmsir {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for snapshot `index` of a run with `master` seed; independent of
/// how many other snapshots were drawn.
Rng snapshot_rng(std::uint64_t master, std::uint64_t index);
std::uint64_t snapshot_seed(std::uint64_t master, std::uint64_t index) noexcept;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Path loss and shadowing. Gains are L_ref * chi / r^eta, with r in km.
struct PropagationParams {
    double eta = 4.0;
    double l_ref_db = 0.0;  ///< intercept at 1 km
    double sigma_db = 0.0;  ///< shadowing std in dB
    double bs_antenna_gain_db = 0.0;
    double min_distance_km = 1e-3;

    void validate() const;
    Delta delta() const { return Delta::from_eta(eta); }
    /// Shadowing-free gain in dB at distance r (km), clamp included.
    double mean_gain_db(double r_km) const;
};

enum class LayoutKind { HexLattice, PppWithOriginBs };

struct LayoutSpec {
    LayoutKind kind = LayoutKind::HexLattice;
    int n_cells = 499;        ///< hex: exact cell count; PPP: mean count excluding the origin BS
    double bs_density = 1.0;  ///< per km^2

    static LayoutSpec hex(int n_cells = 499, double density = 1.0) {
        return {LayoutKind::HexLattice, n_cells, density};
    }
    static LayoutSpec ppp(int mean_n_bs = 500, double density = 1.0) {
        return {LayoutKind::PppWithOriginBs, mean_n_bs, density};
    }
    void validate() const;
};

struct Layout {
    LayoutSpec spec;
    std::vector<Point> bs;  ///< index 0 is the reference BS at the origin
    std::vector<std::array<int, 2>> axial;  ///< hex only, aligned with bs
    double radius = 0.0;   ///< users are dropped uniformly on this disc
    double spacing = 0.0;  ///< hex inter-site distance; 0 for PPP

    std::size_t size() const { return bs.size(); }
};

Layout generate_layout(const LayoutSpec& spec, Rng& rng);

/// Inter-site distance of a hexagonal lattice with the given BS density.
double hex_spacing(double density);

namespace detail {
/// Axial coordinates of all hex sites within `rings` rings of the origin.
std::vector<std::array<int, 2>> hex_sites(int rings);
int hex_distance(std::array<int, 2> a, std::array<int, 2> b);
Point axial_to_point(std::array<int, 2> a, double spacing);
}  // namespace detail

enum class UserPolicyKind { PppUsers, FixedAtReference };

struct UserPolicy {
    UserPolicyKind kind = UserPolicyKind::FixedAtReference;
    int k = 10;                 ///< FixedAtReference
    double user_density = 10.0; ///< PppUsers, per km^2
    int truncate_at = 100;      ///< PppUsers: keep at most this many users at BS 0
    bool full_association = false;  ///< PppUsers: keep every user, not only BS 0's

    static UserPolicy fixed(int k) {
        UserPolicy p;
        p.kind = UserPolicyKind::FixedAtReference;
        p.k = k;
        return p;
    }
    static UserPolicy ppp(double user_density, int truncate_at) {
        UserPolicy p;
        p.kind = UserPolicyKind::PppUsers;
        p.user_density = user_density;
        p.truncate_at = truncate_at;
        return p;
    }
    void validate() const;
};

inline constexpr std::uint64_t kMaxRejectionDraws = 10'000'000;

/// One realization: layout, users, full gain matrix and association.
///
/// Only users that were kept are stored; for the usual protocols those are
/// the users of BS 0 plus any cells populated afterwards.
class NetworkSnapshot {
public:
    NetworkSnapshot(std::shared_ptr<const Layout> layout, PropagationParams prop,
                    std::uint64_t seed);

    const Layout& layout() const { return *layout_; }
    std::shared_ptr<const Layout> layout_ptr() const { return layout_; }
    const PropagationParams& propagation() const { return prop_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t n_bs() const { return layout_->size(); }
    std::size_t n_users() const { return users_.size(); }
    const Point& user(std::size_t u) const { return users_[u]; }
    int serving(std::size_t u) const { return serving_[u]; }
    /// Linear gain G[bs][user].
    double gain(std::size_t bs, std::size_t u) const { return gains_[u * n_bs() + bs]; }
    const double* user_gains(std::size_t u) const { return gains_.data() + u * n_bs(); }
    const std::vector<int>& cell_users(std::size_t bs) const { return cells_[bs]; }

    /// Appends a user whose gains to every BS are given (linear).
    void add_user(Point p, const std::vector<double>& gains);
    /// Same, with the serving BS asserted by the caller (imported or toy data).
    void add_user(Point p, const std::vector<double>& gains, int serving);
    /// Reorders the user list of one cell.
    void shuffle_cell(std::size_t bs, Rng& rng);
    /// Keeps `keep` users of the cell, chosen uniformly at random.
    void truncate_cell(std::size_t bs, std::size_t keep, Rng& rng);

private:
    std::shared_ptr<const Layout> layout_;
    PropagationParams prop_;
    std::uint64_t seed_;
    std::vector<Point> users_;
    std::vector<int> serving_;
    std::vector<double> gains_;
    std::vector<std::vector<int>> cells_;
};

/// Draws users with gains and association under `prop`. Shadowing makes
/// association random, so both happen here.
NetworkSnapshot drop_users(std::shared_ptr<const Layout> layout, const UserPolicy& policy,
                           const PropagationParams& prop, Rng& rng, std::uint64_t seed = 0);

/// Tops up every listed cell to exactly `k` users by rejection sampling over
/// the whole layout disc, then randomizes each cell's slot order.
void populate_cells(NetworkSnapshot& snap, const std::vector<int>& cells, int k, Rng& rng);

/// Gains from every BS to `p` with fresh i.i.d. shadowing.
std::vector<double> compute_gains(const Layout& layout, Point p, const PropagationParams& prop,
                                  Rng& rng);

/// Argmax of a gain column, lowest index on ties.
int strongest(const double* gains, std::size_t n);

enum class PilotMode { NoContamination, HexPattern, RandomSearch };

struct PilotConfig {
    PilotMode mode = PilotMode::NoContamination;
    int reuse = 7;  ///< HexPattern: 4 or 7
    double membership_prob = 1.0 / 7.0;
    int trials = 500;

    static PilotConfig none() { return {}; }
    static PilotConfig hex(int reuse) { return {PilotMode::HexPattern, reuse, 1.0 / 7.0, 500}; }
    static PilotConfig random_search(double p = 1.0 / 7.0, int trials = 500) {
        return {PilotMode::RandomSearch, 7, p, trials};
    }
    void validate() const;
};

/// Mutually contaminating BSs around the reference BS.
struct PilotSets {
    PilotConfig config;
    std::vector<int> contaminators;  ///< P: BSs reusing BS 0's pilots, 0 excluded
    std::vector<int> group;          ///< HexPattern: pilot group per BS
    double score = 0.0;              ///< RandomSearch: contamination power per BS of the winner

    /// Total BS count over |P_0|.
    double effective_reuse(std::size_t n_bs) const {
        return static_cast<double>(n_bs) / static_cast<double>(contaminators.size() + 1);
    }
};

/// Hex pilot group of an axial site for reuse 4 or 7.
int hex_pilot_group(std::array<int, 2> axial, int reuse);

/// Builds P for BS 0. RandomSearch needs every cell of `snap` to hold k users.
PilotSets build_pilot_sets(const NetworkSnapshot& snap, const PilotConfig& config, int k,
                           Rng& rng);

/// Contamination power per BS of P_0 = {0} u P:
/// (1/|P_0|) sum_{l in P_0} sum_{ell in P_0, ell != l} sum_k G_{ell,(l,k)}.
double contamination_score(const NetworkSnapshot& snap, const std::vector<int>& p0, int k);

/// One row per link: bs_id,user_id,distance_km,shadow_db,gain_db,serving_flag
void write_snapshot_links(std::ostream& os, const NetworkSnapshot& snap);

}  // namespace mmsir
