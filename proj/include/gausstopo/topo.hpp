// Copyright 2026 The gausstopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAUSSTOPO_TOPO_HPP
#define GAUSSTOPO_TOPO_HPP

#include <map>
#include <mutex>
#include <optional>

#include "gausstopo/lattice.hpp"
#include "gausstopo/spectrum.hpp"

namespace gausstopo {

enum class RegionKind { kp, lw, custom };

struct RegionSet {
    RegionKind kind = RegionKind::custom;
    std::map<std::string, Region> regions;
    int n_modes = 0;
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;  // KP disk radius
    double inner = 0.0;   // LW hole side
    double width = 0.0;   // LW annulus width

    const Region &at(const std::string &name) const {
        auto it = regions.find(name);
        if (it == regions.end()) {
            throw DomainError(fmt::format("region set has no region '{}'", name));
        }
        return it->second;
    }

    /// Union of the named single-letter regions, e.g. "AB".
    Region combined(const std::string &names) const {
        Region out;
        for (char ch : names) {
            out = region_union(out, at(std::string(1, ch)));
        }
        return out;
    }
};

namespace detail {

inline void bounding_box(const ModeGeometry &geo, double lo[2], double hi[2]) {
    lo[0] = lo[1] = 1e300;
    hi[0] = hi[1] = -1e300;
    for (const auto &c : geo.coords) {
        for (int k = 0; k < 2; ++k) {
            lo[k] = std::min(lo[k], double(c[k]));
            hi[k] = std::max(hi[k], double(c[k]));
        }
    }
}

inline void require_inside(const ModeGeometry &geo, std::array<double, 2> center, double reach,
                           const char *what) {
    double lo[2], hi[2];
    bounding_box(geo, lo, hi);
    for (int k = 0; k < 2; ++k) {
        if (center[k] - reach < lo[k] || center[k] + reach > hi[k]) {
            throw GeometryError(fmt::format(
                "{} around ({}, {}) with reach {} does not fit inside the lattice", what,
                center[0], center[1], reach));
        }
    }
}

}  // namespace detail

/// Disk of radius `radius` about `center`, cut into three 120 degree sectors.
/// Polar angle in [0, 120) goes to A, [120, 240) to B, the rest to C; a mode
/// sitting on the centre goes to A. D is the complement of the disk.
inline RegionSet kp_regions(const ModeGeometry &geo, std::array<double, 2> center, double radius) {
    if (!(radius > 0.0)) {
        throw GeometryError("KP radius must be positive");
    }
    detail::require_inside(geo, center, 1.5 * radius, "KP disk");
    RegionSet rs;
    rs.kind = RegionKind::kp;
    rs.n_modes = geo.n_modes();
    rs.center = center;
    rs.radius = radius;
    Region a, b, c, disk;
    for (int i = 0; i < geo.n_modes(); ++i) {
        double dx = geo.coords[i][0] - center[0];
        double dy = geo.coords[i][1] - center[1];
        if (dx * dx + dy * dy > radius * radius) {
            continue;
        }
        disk.push_back(i);
        double ang = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx) * 180.0 / M_PI;
        if (ang < 0.0) {
            ang += 360.0;
        }
        (ang < 120.0 ? a : ang < 240.0 ? b : c).push_back(i);
    }
    if (a.empty() || b.empty() || c.empty()) {
        throw GeometryError("KP disk leaves an empty sector");
    }
    rs.regions = {{"A", a}, {"B", b}, {"C", c}, {"D", complement(disk, geo.n_modes())}};
    if (rs.regions["D"].empty()) {
        throw GeometryError("KP disk covers the whole lattice");
    }
    return rs;
}

/// Square annulus of hole side `inner` and thickness `width` about `center`.
/// A is the full annulus; B drops the top cut, C the bottom cut, and D both
/// cuts, leaving two arms. A cut is the part of the annulus with
/// |dx| <= inner / 2 on that side, so |A| - |B| = |C| - |D|.
inline RegionSet lw_regions(const ModeGeometry &geo, std::array<double, 2> center, double inner,
                            double width) {
    if (!(width > 0.0) || !(inner > 0.0)) {
        throw GeometryError("LW annulus needs positive hole and width");
    }
    const double h = inner / 2.0;
    detail::require_inside(geo, center, h + width, "LW annulus");
    RegionSet rs;
    rs.kind = RegionKind::lw;
    rs.n_modes = geo.n_modes();
    rs.center = center;
    rs.inner = inner;
    rs.width = width;
    Region a, top, bottom;
    for (int i = 0; i < geo.n_modes(); ++i) {
        double dx = geo.coords[i][0] - center[0];
        double dy = geo.coords[i][1] - center[1];
        double cheb = std::max(std::abs(dx), std::abs(dy));
        if (cheb <= h || cheb > h + width) {
            continue;
        }
        a.push_back(i);
        if (std::abs(dx) <= h && dy > h) {
            top.push_back(i);
        } else if (std::abs(dx) <= h && dy < -h) {
            bottom.push_back(i);
        }
    }
    if (top.empty() || bottom.empty()) {
        throw GeometryError("LW annulus too small to cut");
    }
    Region b = region_difference(a, top);
    Region c = region_difference(a, bottom);
    Region d = region_difference(b, bottom);
    rs.regions = {{"A", a}, {"B", b}, {"C", c}, {"D", d}};
    return rs;
}

/// Memoized region entropies for a single state. Thread safe.
class EntropyCache {
   public:
    explicit EntropyCache(const CovMatrix &c, SpectrumOptions opts = {}) : c_(c), opts_(opts) {}

    const SymplecticSpectrum &spectrum(const Region &r) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(r);
            if (it != cache_.end()) {
                return it->second;
            }
        }
        SymplecticSpectrum sp = symplectic_spectrum(c_, r, opts_);
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.emplace(r, std::move(sp)).first->second;
    }

    double entropy(const Region &r) {
        if (r.empty()) {
            return 0.0;
        }
        return von_neumann_entropy(spectrum(r));
    }

    const CovMatrix &state() const { return c_; }

   private:
    const CovMatrix &c_;
    SpectrumOptions opts_;
    std::mutex mu_;
    std::map<Region, SymplecticSpectrum> cache_;
};

namespace detail {

inline void require_kind(const RegionSet &r, RegionKind kind, const char *op) {
    if (r.kind != kind) {
        throw DomainError(fmt::format("{} needs {} regions", op, kind == RegionKind::kp ? "KP" : "LW"));
    }
}

template <typename F>
double kp_combination(const RegionSet &r, F &&quantity) {
    return -(quantity(r.combined("A")) + quantity(r.combined("B")) + quantity(r.combined("C")) -
             quantity(r.combined("AB")) - quantity(r.combined("BC")) - quantity(r.combined("AC")) +
             quantity(r.combined("ABC")));
}

}  // namespace detail

/// -(S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC).
inline double tee_kp(EntropyCache &cache, const RegionSet &r) {
    detail::require_kind(r, RegionKind::kp, "tee_kp");
    return detail::kp_combination(r, [&](const Region &x) { return cache.entropy(x); });
}

inline double tee_kp(const CovMatrix &c, const RegionSet &r) {
    EntropyCache cache(c);
    return tee_kp(cache, r);
}

/// -1/2 [(S_A - S_B) - (S_C - S_D)].
inline double tee_lw(EntropyCache &cache, const RegionSet &r) {
    detail::require_kind(r, RegionKind::lw, "tee_lw");
    return -0.5 * ((cache.entropy(r.at("A")) - cache.entropy(r.at("B"))) -
                   (cache.entropy(r.at("C")) - cache.entropy(r.at("D"))));
}

inline double tee_lw(const CovMatrix &c, const RegionSet &r) {
    EntropyCache cache(c);
    return tee_lw(cache, r);
}

/// KP combination with log-negativity in place of entropy.
inline double tln_kp(const CovMatrix &c, const RegionSet &r) {
    detail::require_kind(r, RegionKind::kp, "tln_kp");
    if (c.kappa() != 1.0) {
        throw DomainError("TLN is defined for the pure state (kappa = 1)");
    }
    return detail::kp_combination(r, [&](const Region &x) { return log_negativity(c, x); });
}

/// -1/2 (I_A + I_B + I_C - I_AB - I_BC - I_AC + I_ABC).
inline double tmi(EntropyCache &cache, const RegionSet &r) {
    detail::require_kind(r, RegionKind::kp, "tmi");
    const int n = cache.state().n_modes();
    Region all(n);
    for (int i = 0; i < n; ++i) {
        all[i] = i;
    }
    double s_total = cache.entropy(all);
    auto info = [&](const Region &x) {
        return cache.entropy(x) + cache.entropy(complement(x, n)) - s_total;
    };
    return 0.5 * detail::kp_combination(r, info);
}

inline double tmi(const CovMatrix &c, const RegionSet &r) {
    EntropyCache cache(c);
    return tmi(cache, r);
}

/// zeta(X) for the fourteen regions entering the high-temperature limit.
inline const std::vector<std::pair<std::string, int>> &tmi_zeta() {
    static const std::vector<std::pair<std::string, int>> z = {
        {"A", 1},   {"B", 1},   {"C", 1},   {"D", 1},   {"ABC", 1}, {"ABD", 1}, {"ACD", 1},
        {"BCD", 1}, {"AB", -1}, {"AC", -1}, {"AD", -1}, {"BC", -1}, {"BD", -1}, {"CD", -1}};
    return z;
}

/// -1/2 sum_X zeta(X) sum'_i log2(e sigma_i^X) over sigma > 1/2 + tol_half,
/// using the spectra of the state divided by its kappa.
inline double tmi_lower_bound(EntropyCache &cache, const RegionSet &r) {
    detail::require_kind(r, RegionKind::kp, "tmi_lower_bound");
    const double kappa = cache.state().kappa();
    double total = 0.0;
    for (const auto &[name, zeta] : tmi_zeta()) {
        SymplecticSpectrum sp = cache.spectrum(r.combined(name)).scaled(1.0 / kappa);
        if (sp.n_greater() + sp.n_equal() != static_cast<int>(sp.size())) {
            throw DiagnosticError(fmt::format("spectrum of region {} is misclassified", name));
        }
        double sum = 0.0;
        for (double sigma : sp.values()) {
            if (sigma > 0.5 + sp.tol_half()) {
                sum += std::log2(M_E * sigma);
            }
        }
        total += zeta * sum;
    }
    return -0.5 * total;
}

inline double tmi_lower_bound(const CovMatrix &c, const RegionSet &r) {
    EntropyCache cache(c);
    return tmi_lower_bound(cache, r);
}

struct SandwichBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounds built from LW regions: E = A \ B, F1 = A \ C, F2 = D, F = F1 u F2,
/// with I_{X,Y} = S_X + S_Y - S_{X u Y}.
inline SandwichBounds tmi_sandwich_bounds(EntropyCache &cache, const RegionSet &r) {
    detail::require_kind(r, RegionKind::lw, "tmi_sandwich_bounds");
    Region e = region_difference(r.at("A"), r.at("B"));
    Region f1 = region_difference(r.at("A"), r.at("C"));
    Region f2 = r.at("D");
    auto overlaps = [](const Region &x, const Region &y) {
        Region both;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
        return !both.empty();
    };
    if (e.empty() || f1.empty() || overlaps(e, f1) || overlaps(e, f2) || overlaps(f1, f2)) {
        throw GeometryError("sandwich-bound regions E, F1, F2 must be non-empty and disjoint");
    }
    Region f = region_union(f1, f2);
    auto info = [&](const Region &x, const Region &y) {
        return cache.entropy(x) + cache.entropy(y) - cache.entropy(region_union(x, y));
    };
    double i_f = info(e, f), i_f1 = info(e, f1), i_f2 = info(e, f2);
    return {std::min(i_f - i_f1 - i_f2, 0.0), std::max(i_f1, i_f2)};
}

/// One-mode symplectic eigenvalue of the three-mode network.
inline double upper_bound_sigma(double s) {
    double s4 = std::pow(s, 4);
    return 0.5 * std::sqrt((1.0 + 3.0 * s4 + 2.0 * s4 * s4) / (1.0 + 3.0 * s4));
}

inline double tee_upper_bound(double s) {
    if (!(s > 0.0)) {
        throw DomainError("s must be positive");
    }
    return mode_entropy(upper_bound_sigma(s));
}

/// Star graph with a p-measured centre joined to three kept modes; measuring
/// the centre leaves the three-mode network behind the TEE upper bound.
inline GaussGraph upper_bound_network(double s) {
    Mat adj = Mat::Zero(4, 4);
    for (int k = 1; k < 4; ++k) {
        adj(0, k) = adj(k, 0) = 1.0;
    }
    return measure_p(cluster_graph_from_adjacency(adj, s), 0);
}

struct RegionCounts {
    int n_greater = 0;
    int n_equal = 0;
};

struct TopoReport {
    double log_s = 0.0;
    double kappa = 1.0;
    std::optional<double> tee_kp, tee_lw, tln_kp, tmi, tmi_lower, tee_upper;
    std::optional<SandwichBounds> sandwich;
    std::map<std::string, double> region_entropies;
    std::map<std::string, RegionCounts> spectra_meta;
};

struct MetricSelection {
    bool tee_kp = true;
    bool tee_lw = true;
    bool tln = true;
    bool tmi = true;
    bool tmi_lower = true;
    bool tee_upper = true;
    bool sandwich = false;
};

/// Evaluates the selected diagnostics for one pure state and one kappa.
inline TopoReport evaluate_topology(const CovMatrix &pure, double log_s, double kappa,
                                    const RegionSet &kp, const std::optional<RegionSet> &lw,
                                    const MetricSelection &sel) {
    TopoReport rep;
    rep.log_s = log_s;
    rep.kappa = kappa;
    EntropyCache cache(pure);
    if (sel.tee_kp || sel.tmi_lower) {
        for (const auto &[name, zeta] : tmi_zeta()) {
            (void)zeta;
            Region x = kp.combined(name);
            const auto &sp = cache.spectrum(x);
            rep.region_entropies[name] = von_neumann_entropy(sp);
            rep.spectra_meta[name] = {sp.n_greater(), sp.n_equal()};
        }
    }
    if (sel.tee_kp) {
        rep.tee_kp = tee_kp(cache, kp);
    }
    if (sel.tee_lw && lw) {
        rep.tee_lw = tee_lw(cache, *lw);
    }
    if (sel.sandwich && lw) {
        rep.sandwich = tmi_sandwich_bounds(cache, *lw);
    }
    if (sel.tln) {
        rep.tln_kp = tln_kp(pure, kp);
    }
    if (sel.tmi_lower) {
        rep.tmi_lower = tmi_lower_bound(cache, kp);
    }
    if (sel.tmi) {
        if (kappa == 1.0) {
            rep.tmi = tmi(cache, kp);
        } else {
            CovMatrix hot = thermal_scale(pure, kappa);
            rep.tmi = tmi(hot, kp);
        }
    }
    if (sel.tee_upper) {
        rep.tee_upper = tee_upper_bound(std::exp(log_s));
    }
    return rep;
}

}  // namespace gausstopo

#endif
