#pragma once

#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/types.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace udg {

// Tolerances: rows are treated as exact up to row_tolerance; hardware bound
// comparisons absorb floating-point noise up to geometry_tolerance (lattice
// coordinates are irrational multiples of the spacing).
inline constexpr double row_tolerance = 1e-6;
inline constexpr double geometry_tolerance = 1e-9;

enum class ViolationKind {
    min_distance,          // pair closer than d_min
    max_distance,          // pair farther than d_max
    adjacent_too_far,      // edge pair beyond r_b
    nonadjacent_too_close, // non-edge pair at or under r_b (plus margin)
    row_spacing,           // rows neither equal nor spaced enough
    out_of_register,       // coordinate outside the register area
};

struct Violation {
    int i = 0;
    int j = 0; // equals i for out_of_register
    ViolationKind kind{};
    double value = 0.0; // offending distance (or coordinate overshoot)
};

struct FeasibilityReport {
    double d_adj_max = -std::numeric_limits<double>::infinity();   // D_adj
    double d_nonadj_min = std::numeric_limits<double>::infinity(); // d_not_adj
    double gap = std::numeric_limits<double>::infinity();          // d_not_adj - D_adj
    double min_pair_distance = std::numeric_limits<double>::infinity();
    bool hardware_feasible = true;
    bool udg_feasible = true;
    bool row_feasible = true;
    std::vector<Violation> violations;

    bool feasible() const { return hardware_feasible && udg_feasible; }
};

namespace detail {

inline bool inside_register(Vec2 c, const RegisterProfile& p, double& overshoot) {
    double ox = 0.0;
    double oy = 0.0;
    if (const auto* rect = p.rectangle()) {
        ox = std::max(std::max(-c.x, c.x - rect->width), 0.0);
        oy = std::max(std::max(-c.y, c.y - rect->height), 0.0);
    } else {
        const double bound = p.coord_bound;
        ox = std::max(std::abs(c.x) - bound, 0.0);
        oy = std::max(std::abs(c.y) - bound, 0.0);
    }
    overshoot = std::max(ox, oy);
    return overshoot <= geometry_tolerance;
}

} // namespace detail

// Exhaustive geometric verification of an embedding against a profile.
//
// Hardware feasibility covers the register area, the [d_min, d_max]
// pair-distance window and the row rule. UDG feasibility requires
// D_adj <= r_b, every non-adjacent pair strictly beyond r_b, and
// D_adj < d_not_adj, so that thresholding distances at r_b reproduces the
// edge set exactly. With strictness_margin = eps > 0, non-adjacent pairs
// must satisfy d^2 >= r_b^2 + eps instead of the strict inequality.
//
// Reports, never throws: geometric badness is recorded in `violations`.
inline FeasibilityReport check(const Embedding& e, const Graph& g, const RegisterProfile& p,
                               double strictness_margin = 0.0) {
    FeasibilityReport rep;
    const int n = g.n();
    const double rb2 = p.r_b * p.r_b;

    for (int i = 0; i < n; ++i) {
        double overshoot = 0.0;
        if (!detail::inside_register(e[static_cast<std::size_t>(i)], p, overshoot)) {
            rep.hardware_feasible = false;
            rep.violations.push_back({i, i, ViolationKind::out_of_register, overshoot});
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d2 = squared_distance(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
            const double d = std::sqrt(d2);
            rep.min_pair_distance = std::min(rep.min_pair_distance, d);

            if (d < p.d_min - geometry_tolerance) {
                rep.hardware_feasible = false;
                rep.violations.push_back({i, j, ViolationKind::min_distance, d});
            }
            if (p.d_max && d > *p.d_max + geometry_tolerance) {
                rep.hardware_feasible = false;
                rep.violations.push_back({i, j, ViolationKind::max_distance, d});
            }
            if (p.row_spacing) {
                const double dy = std::abs(e[static_cast<std::size_t>(i)].y - e[static_cast<std::size_t>(j)].y);
                if (dy > row_tolerance && dy < *p.row_spacing - geometry_tolerance) {
                    rep.row_feasible = false;
                    rep.violations.push_back({i, j, ViolationKind::row_spacing, dy});
                }
            }

            if (g.has_edge(i, j)) {
                rep.d_adj_max = std::max(rep.d_adj_max, d);
                if (d2 > rb2) {
                    rep.udg_feasible = false;
                    rep.violations.push_back({i, j, ViolationKind::adjacent_too_far, d});
                }
            } else {
                rep.d_nonadj_min = std::min(rep.d_nonadj_min, d);
                const bool ok = strictness_margin > 0.0 ? d2 >= rb2 + strictness_margin : d2 > rb2;
                if (!ok) {
                    rep.udg_feasible = false;
                    rep.violations.push_back({i, j, ViolationKind::nonadjacent_too_close, d});
                }
            }
        }
    }

    if (!rep.row_feasible) rep.hardware_feasible = false;
    if (!(rep.d_adj_max < rep.d_nonadj_min)) rep.udg_feasible = false;
    rep.gap = rep.d_nonadj_min - rep.d_adj_max;
    return rep;
}

// Embedding quality: the adjacency separation margin. +inf when the graph has
// no non-adjacent pairs; may be <= 0 for infeasible embeddings.
inline double gap_quality(const FeasibilityReport& report) { return report.gap; }

// Necessary conditions from the free-space analysis (4 um minimum spacing,
// 10.26 um radius): max degree 18 and clique size 7 are unembeddable beyond.
inline constexpr int max_embeddable_degree = 18;
inline constexpr int max_embeddable_clique = 7;

struct PrecheckResult {
    bool passed = false;
    bool max_degree_ok = false;
    bool clique_ok = false;
    bool capacity_ok = false;
};

inline PrecheckResult precheck(const Graph& g, const RegisterProfile& p) {
    const GraphStats s = stats(g);
    PrecheckResult r;
    r.max_degree_ok = s.max_degree <= max_embeddable_degree;
    r.clique_ok = s.clique_lower_bound <= max_embeddable_clique;
    r.capacity_ok = g.n() <= p.capacity;
    r.passed = r.max_degree_ok && r.clique_ok && r.capacity_ok;
    return r;
}

} // namespace udg
