#include "mmsir/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "mmsir/errors.hpp"

namespace mmsir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn10 = std::numbers::ln10;

Point uniform_on_disc(double radius, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double a = 2.0 * kPi * u(rng);
    return {r * std::cos(a), r * std::sin(a)};
}

// Draws shadowed gains lazily so a proposal can be rejected as soon as one BS
// beats the target. A uniform grid of BS buckets lets the nearest BSs go first.
class LinkSampler {
public:
    LinkSampler(const Layout& layout, const PropagationParams& prop)
        : layout_(layout),
          log_offset_((prop.l_ref_db + prop.bs_antenna_gain_db) * kLn10 / 10.0),
          half_eta_(0.5 * prop.eta),
          sigma_ln_(prop.sigma_db * kLn10 / 10.0),
          min_d2_(prop.min_distance_km * prop.min_distance_km),
          gains_(layout.size()),
          stamp_(layout.size(), 0) {
        const std::size_t n = layout.size();
        extent_ = layout.radius;
        for (const Point& p : layout.bs) extent_ = std::max({extent_, std::abs(p.x), std::abs(p.y)});
        extent_ *= 1.0 + 1e-9;
        side_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))), 1, 1024);
        cell_ = 2.0 * extent_ / side_;
        start_.assign(static_cast<std::size_t>(side_) * side_ + 1, 0);
        std::vector<int> key(n);
        for (std::size_t j = 0; j < n; ++j) {
            key[j] = bucket_of(layout.bs[j]);
            ++start_[static_cast<std::size_t>(key[j]) + 1];
        }
        for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
        members_.resize(n);
        std::vector<int> fill(start_.begin(), start_.end() - 1);
        for (std::size_t j = 0; j < n; ++j) members_[static_cast<std::size_t>(fill[key[j]]++)] = static_cast<int>(j);
    }

    // Proposes a uniform user; true when `target` is its strongest BS, in which
    // case `out` holds the gains to every BS.
    bool try_user(int target, Rng& rng, Point& p, std::vector<double>& out) {
        p = uniform_on_disc(layout_.radius, rng);
        ++epoch_;
        const double gt = draw(target, p, rng);
        const int bx = coord(p.x);
        const int by = coord(p.y);
        for (int y = std::max(by - 1, 0); y <= std::min(by + 1, side_ - 1); ++y) {
            for (int x = std::max(bx - 1, 0); x <= std::min(bx + 1, side_ - 1); ++x) {
                const std::size_t b = static_cast<std::size_t>(y) * side_ + x;
                for (int i = start_[b]; i < start_[b + 1]; ++i) {
                    const int j = members_[static_cast<std::size_t>(i)];
                    if (j == target) continue;
                    if (beats(j, draw(j, p, rng), target, gt)) return false;
                }
            }
        }
        const int n = static_cast<int>(layout_.size());
        for (int j = 0; j < n; ++j) {
            if (stamp_[j] == epoch_) continue;
            if (beats(j, draw(j, p, rng), target, gt)) return false;
        }
        out = gains_;
        return true;
    }

    void full_user(Rng& rng, Point& p, std::vector<double>& out) {
        p = uniform_on_disc(layout_.radius, rng);
        ++epoch_;
        for (std::size_t j = 0; j < layout_.size(); ++j) draw(static_cast<int>(j), p, rng);
        out = gains_;
    }

private:
    static bool beats(int j, double gj, int t, double gt) { return gj > gt || (gj == gt && j < t); }

    double draw(int j, Point p, Rng& rng) {
        const double d2 = std::max(dist2(p, layout_.bs[j]), min_d2_);
        double lg = log_offset_ - half_eta_ * std::log(d2);
        if (sigma_ln_ > 0.0) lg += sigma_ln_ * normal_(rng);
        stamp_[j] = epoch_;
        return gains_[j] = std::exp(lg);
    }

    int coord(double v) const { return std::clamp(static_cast<int>((v + extent_) / cell_), 0, side_ - 1); }
    int bucket_of(Point p) const { return coord(p.y) * side_ + coord(p.x); }

    const Layout& layout_;
    double log_offset_;
    double half_eta_;
    double sigma_ln_;
    double min_d2_;
    double extent_ = 0.0;
    double cell_ = 1.0;
    int side_ = 1;
    std::vector<int> start_;
    std::vector<int> members_;
    std::vector<double> gains_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 0;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t snapshot_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng snapshot_rng(std::uint64_t master, std::uint64_t index) {
    return Rng(snapshot_seed(master, index));
}

void PropagationParams::validate() const {
    if (!std::isfinite(eta) || !(eta > 2.0)) throw DomainError("eta must be > 2");
    if (!std::isfinite(sigma_db) || sigma_db < 0.0) throw DomainError("sigma_db must be >= 0");
    if (!std::isfinite(l_ref_db) || !std::isfinite(bs_antenna_gain_db)) {
        throw DomainError("gain offsets must be finite");
    }
    if (!(min_distance_km > 0.0)) throw DomainError("min_distance_km must be > 0");
}

double PropagationParams::mean_gain_db(double r_km) const {
    return l_ref_db + bs_antenna_gain_db - 10.0 * eta * std::log10(std::max(r_km, min_distance_km));
}

void LayoutSpec::validate() const {
    if (n_cells < 1) throw DomainError("layout needs at least one cell");
    if (!std::isfinite(bs_density) || !(bs_density > 0.0)) throw DomainError("bs_density must be > 0");
}

double hex_spacing(double density) { return std::sqrt(2.0 / (std::sqrt(3.0) * density)); }

namespace detail {

int hex_distance(std::array<int, 2> a, std::array<int, 2> b) {
    const int dq = a[0] - b[0];
    const int dr = a[1] - b[1];
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

Point axial_to_point(std::array<int, 2> a, double spacing) {
    return {spacing * (a[0] + 0.5 * a[1]), spacing * (std::sqrt(3.0) / 2.0) * a[1]};
}

std::vector<std::array<int, 2>> hex_sites(int rings) {
    std::vector<std::array<int, 2>> out;
    for (int q = -rings; q <= rings; ++q) {
        for (int r = -rings; r <= rings; ++r) {
            if (hex_distance({q, r}, {0, 0}) <= rings) out.push_back({q, r});
        }
    }
    return out;
}

}  // namespace detail

Layout generate_layout(const LayoutSpec& spec, Rng& rng) {
    spec.validate();
    Layout out;
    out.spec = spec;
    if (spec.kind == LayoutKind::HexLattice) {
        int rings = 0;
        while (1 + 3 * rings * (rings + 1) < spec.n_cells) ++rings;
        auto sites = detail::hex_sites(rings);
        // exact squared norm in units of the spacing: q^2 + qr + r^2
        const auto norm = [](const std::array<int, 2>& a) { return a[0] * a[0] + a[0] * a[1] + a[1] * a[1]; };
        const auto angle = [](const std::array<int, 2>& a) {
            const Point p = detail::axial_to_point(a, 1.0);
            const double t = std::atan2(p.y, p.x);
            return t < 0.0 ? t + 2.0 * kPi : t;
        };
        std::sort(sites.begin(), sites.end(), [&](const auto& a, const auto& b) {
            const int na = norm(a);
            const int nb = norm(b);
            return na != nb ? na < nb : angle(a) < angle(b);
        });
        sites.resize(static_cast<std::size_t>(spec.n_cells));
        out.spacing = hex_spacing(spec.bs_density);
        out.axial = sites;
        out.bs.reserve(sites.size());
        for (const auto& s : sites) out.bs.push_back(detail::axial_to_point(s, out.spacing));
        out.radius = std::sqrt(spec.n_cells / (kPi * spec.bs_density));
    } else {
        out.radius = std::sqrt(spec.n_cells / (kPi * spec.bs_density));
        std::poisson_distribution<int> count(static_cast<double>(spec.n_cells));
        const int n = count(rng);
        out.bs.reserve(static_cast<std::size_t>(n) + 1);
        out.bs.push_back({0.0, 0.0});
        for (int i = 0; i < n; ++i) out.bs.push_back(uniform_on_disc(out.radius, rng));
    }
    return out;
}

void UserPolicy::validate() const {
    if (kind == UserPolicyKind::FixedAtReference) {
        if (k < 1) throw DomainError("load must be >= 1 for per-user statistics");
    } else {
        if (!std::isfinite(user_density) || !(user_density > 0.0)) {
            throw DomainError("user_density must be > 0");
        }
        if (truncate_at < 1) throw DomainError("truncate_at must be >= 1");
    }
}

NetworkSnapshot::NetworkSnapshot(std::shared_ptr<const Layout> layout, PropagationParams prop,
                                 std::uint64_t seed)
    : layout_(std::move(layout)), prop_(prop), seed_(seed), cells_(layout_->size()) {}

void NetworkSnapshot::add_user(Point p, const std::vector<double>& gains) {
    add_user(p, gains, strongest(gains.data(), gains.size()));
}

void NetworkSnapshot::add_user(Point p, const std::vector<double>& gains, int s) {
    if (gains.size() != n_bs()) throw DomainError("add_user: gain vector size mismatch");
    if (s < 0 || static_cast<std::size_t>(s) >= n_bs()) throw DomainError("add_user: serving BS out of range");
    cells_[static_cast<std::size_t>(s)].push_back(static_cast<int>(users_.size()));
    users_.push_back(p);
    serving_.push_back(s);
    gains_.insert(gains_.end(), gains.begin(), gains.end());
}

void NetworkSnapshot::shuffle_cell(std::size_t bs, Rng& rng) {
    std::shuffle(cells_[bs].begin(), cells_[bs].end(), rng);
}

void NetworkSnapshot::truncate_cell(std::size_t bs, std::size_t keep, Rng& rng) {
    auto& list = cells_[bs];
    if (list.size() <= keep) return;
    std::shuffle(list.begin(), list.end(), rng);
    list.resize(keep);
}

int strongest(const double* gains, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (gains[j] > gains[best]) best = j;
    }
    return static_cast<int>(best);
}

std::vector<double> compute_gains(const Layout& layout, Point p, const PropagationParams& prop,
                                  Rng& rng) {
    prop.validate();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma_ln = prop.sigma_db * kLn10 / 10.0;
    const double offset = (prop.l_ref_db + prop.bs_antenna_gain_db) * kLn10 / 10.0;
    const double min_d2 = prop.min_distance_km * prop.min_distance_km;
    std::vector<double> g(layout.size());
    for (std::size_t j = 0; j < layout.size(); ++j) {
        double lg = offset - 0.5 * prop.eta * std::log(std::max(dist2(p, layout.bs[j]), min_d2));
        if (sigma_ln > 0.0) lg += sigma_ln * normal(rng);
        g[j] = std::exp(lg);
    }
    return g;
}

NetworkSnapshot drop_users(std::shared_ptr<const Layout> layout, const UserPolicy& policy,
                           const PropagationParams& prop, Rng& rng, std::uint64_t seed) {
    policy.validate();
    prop.validate();
    NetworkSnapshot snap(layout, prop, seed);
    LinkSampler sampler(*layout, prop);
    Point p;
    std::vector<double> g;
    if (policy.kind == UserPolicyKind::FixedAtReference) {
        std::uint64_t draws = 0;
        while (snap.cell_users(0).size() < static_cast<std::size_t>(policy.k)) {
            if (++draws > kMaxRejectionDraws) {
                throw BudgetError("fixed-K user drop exceeded its rejection budget", seed);
            }
            if (sampler.try_user(0, rng, p, g)) snap.add_user(p, g);
        }
        return snap;
    }
    const double area = kPi * layout->radius * layout->radius;
    std::poisson_distribution<long> count(policy.user_density * area);
    const long n = count(rng);
    for (long i = 0; i < n; ++i) {
        if (policy.full_association) {
            sampler.full_user(rng, p, g);
            snap.add_user(p, g);
        } else if (sampler.try_user(0, rng, p, g)) {
            snap.add_user(p, g);
        }
    }
    snap.truncate_cell(0, static_cast<std::size_t>(policy.truncate_at), rng);
    return snap;
}

void populate_cells(NetworkSnapshot& snap, const std::vector<int>& cells, int k, Rng& rng) {
    if (k < 1) throw DomainError("populate_cells: k must be >= 1");
    LinkSampler sampler(snap.layout(), snap.propagation());
    Point p;
    std::vector<double> g;
    for (int c : cells) {
        if (c < 0 || static_cast<std::size_t>(c) >= snap.n_bs()) {
            throw DomainError("populate_cells: BS index out of range");
        }
        std::uint64_t draws = 0;
        while (snap.cell_users(static_cast<std::size_t>(c)).size() < static_cast<std::size_t>(k)) {
            if (++draws > kMaxRejectionDraws) {
                throw BudgetError("cell population exceeded its rejection budget for BS " +
                                      std::to_string(c),
                                  snap.seed());
            }
            if (sampler.try_user(c, rng, p, g)) snap.add_user(p, g);
        }
        snap.shuffle_cell(static_cast<std::size_t>(c), rng);
    }
}

void PilotConfig::validate() const {
    if (mode == PilotMode::HexPattern && reuse != 4 && reuse != 7) {
        throw DomainError("hex pilot reuse must be 4 or 7");
    }
    if (mode == PilotMode::RandomSearch) {
        if (!(membership_prob > 0.0 && membership_prob <= 1.0)) {
            throw DomainError("membership_prob must lie in (0, 1]");
        }
        if (trials < 1) throw DomainError("trials must be >= 1");
    }
}

int hex_pilot_group(std::array<int, 2> a, int reuse) {
    const auto mod = [](int v, int m) { return ((v % m) + m) % m; };
    if (reuse == 7) {
        // sublattice basis (2,1), (-1,3); det(c, (-1,3)) labels the coset
        return mod(3 * a[0] + a[1], 7);
    }
    if (reuse == 4) return mod(a[0], 2) + 2 * mod(a[1], 2);
    throw DomainError("hex pilot reuse must be 4 or 7");
}

double contamination_score(const NetworkSnapshot& snap, const std::vector<int>& p0, int k) {
    double total = 0.0;
    for (int l : p0) {
        const auto& users = snap.cell_users(static_cast<std::size_t>(l));
        for (int ell : p0) {
            if (ell == l) continue;
            for (int slot = 0; slot < k; ++slot) {
                total += snap.gain(static_cast<std::size_t>(ell), static_cast<std::size_t>(users[slot]));
            }
        }
    }
    return total / static_cast<double>(p0.size());
}

PilotSets build_pilot_sets(const NetworkSnapshot& snap, const PilotConfig& config, int k, Rng& rng) {
    config.validate();
    PilotSets out;
    out.config = config;
    const std::size_t n = snap.n_bs();
    if (config.mode == PilotMode::NoContamination) return out;
    if (config.mode == PilotMode::HexPattern) {
        const Layout& lay = snap.layout();
        if (lay.spec.kind != LayoutKind::HexLattice || lay.axial.size() != n) {
            throw DomainError("hex pilot patterns need a hexagonal layout");
        }
        out.group.resize(n);
        for (std::size_t j = 0; j < n; ++j) out.group[j] = hex_pilot_group(lay.axial[j], config.reuse);
        for (std::size_t j = 1; j < n; ++j) {
            if (out.group[j] == out.group[0]) out.contaminators.push_back(static_cast<int>(j));
        }
        return out;
    }
    if (k < 1) throw DomainError("random pilot search needs k >= 1");
    for (std::size_t j = 0; j < n; ++j) {
        if (snap.cell_users(j).size() < static_cast<std::size_t>(k)) {
            throw DomainError("random pilot search needs k users in every cell");
        }
    }
    // c[l * n + ell] = sum_k G_{ell,(l,k)}
    std::vector<double> c(n * n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        const auto& users = snap.cell_users(l);
        for (int slot = 0; slot < k; ++slot) {
            const double* g = snap.user_gains(static_cast<std::size_t>(users[slot]));
            for (std::size_t ell = 0; ell < n; ++ell) c[l * n + ell] += g[ell];
        }
    }
    std::bernoulli_distribution join(config.membership_prob);
    std::vector<int> p0;
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < config.trials; ++t) {
        p0.assign(1, 0);
        for (std::size_t j = 1; j < n; ++j) {
            if (join(rng)) p0.push_back(static_cast<int>(j));
        }
        double total = 0.0;
        for (int l : p0) {
            const double* row = &c[static_cast<std::size_t>(l) * n];
            for (int ell : p0) {
                if (ell != l) total += row[ell];
            }
        }
        const double score = total / static_cast<double>(p0.size());
        if (score < best) {
            best = score;
            out.contaminators.assign(p0.begin() + 1, p0.end());
        }
    }
    out.score = best;
    return out;
}

void write_snapshot_links(std::ostream& os, const NetworkSnapshot& snap) {
    const auto& prop = snap.propagation();
    const std::streamsize old = os.precision(9);
    os << "bs_id,user_id,distance_km,shadow_db,gain_db,serving_flag\n";
    for (std::size_t u = 0; u < snap.n_users(); ++u) {
        for (std::size_t b = 0; b < snap.n_bs(); ++b) {
            const double r = std::sqrt(dist2(snap.user(u), snap.layout().bs[b]));
            const double g_db = 10.0 * std::log10(snap.gain(b, u));
            os << b << ',' << u << ',' << r << ',' << g_db - prop.mean_gain_db(r) << ',' << g_db << ','
               << (snap.serving(u) == static_cast<int>(b) ? 1 : 0) << '\n';
        }
    }
    os.precision(old);
}

}  // namespace mmsir
