#pragma once

#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace udg {

// Loss weights and margins for the Embedding Loss Function. Distances copied
// from a RegisterProfile; margin is the strictness slack (in um^2) demanded
// beyond r_b^2 for non-adjacent pairs so "further than r_b" stays strict
// after optimization.
struct ElfConfig {
    double r_b = 10.26;
    double d_min = 0.0;
    std::optional<double> d_max;
    std::optional<double> row_spacing;
    double margin = 0.1; // um^2
    double w_min = 1.0;
    double w_max = 1.0;
    double w_row = 1.0;
};

inline ElfConfig make_elf_config(const RegisterProfile& p, double margin = 0.1, double w_min = 1.0,
                                 double w_max = 1.0, double w_row = 1.0) {
    ElfConfig cfg;
    cfg.r_b = p.r_b;
    cfg.d_min = p.d_min;
    cfg.d_max = p.d_max;
    cfg.row_spacing = p.row_spacing;
    cfg.margin = margin;
    cfg.w_min = w_min;
    cfg.w_max = w_max;
    cfg.w_row = w_row;
    return cfg;
}

// Canonical pair order: (0,1), (0,2), ..., (0,n-1), (1,2), ... This is the
// order of the DiffL/DistL outputs everywhere in the toolkit.
inline std::vector<std::pair<int, int>> canonical_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
}

// Row-spacing penalty on a squared row distance s: a parabola peaking at 1
// for s = row_spacing^2 / 2 (row distance 2*sqrt(2) for 4 um rows), zero at
// s = 0 and clamped to zero for s >= row_spacing^2.
inline double elf_row_penalty(double squared_row_distance, double row_spacing) {
    const double g = row_spacing * row_spacing;
    const double v = squared_row_distance * (g - squared_row_distance);
    return v <= 0.0 ? 0.0 : v / (g * g / 4.0);
}

// Subgradient of elf_row_penalty; zero on the flat regions and at the kinks.
inline double elf_row_penalty_grad(double squared_row_distance, double row_spacing) {
    const double g = row_spacing * row_spacing;
    const double s = squared_row_distance;
    if (s <= 0.0 || s >= g) return 0.0;
    return (g - 2.0 * s) * 4.0 / (g * g);
}

struct ElfBreakdown {
    double total = 0.0;
    double elf_min = 0.0;
    double elf_max = 0.0;
    double elf_row = 0.0;
};

namespace detail {

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Pair-indexed adjacency flags in canonical order, precomputed once per graph
// so the training loop does not pay edge lookups every iteration.
struct PairTable {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;
    std::vector<char> adjacent;

    explicit PairTable(const Graph& g) : n(g.n()), pairs(canonical_pairs(g.n())) {
        adjacent.resize(pairs.size(), 0);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            adjacent[k] = g.has_edge(pairs[k].first, pairs[k].second) ? 1 : 0;
        }
    }
};

inline ElfBreakdown elf_eval(std::span<const double> dist_out, const PairTable& table, const ElfConfig& cfg) {
    const std::size_t m = table.pairs.size();
    const double rb2 = cfg.r_b * cfg.r_b;
    const double dmin2 = cfg.d_min * cfg.d_min;
    ElfBreakdown out;
    for (std::size_t k = 0; k < m; ++k) {
        const double p = dist_out[k];
        if (table.adjacent[k]) {
            out.elf_max += relu(p - rb2);
        } else {
            out.elf_min += relu(rb2 + cfg.margin - p);
        }
        out.elf_min += relu(dmin2 - p);
        if (cfg.d_max) out.elf_max += relu(p - *cfg.d_max * *cfg.d_max);
    }
    if (cfg.row_spacing) {
        for (std::size_t k = 0; k < m; ++k) {
            out.elf_row += elf_row_penalty(dist_out[m + k], *cfg.row_spacing);
        }
    }
    out.elf_min *= cfg.w_min;
    out.elf_max *= cfg.w_max;
    out.elf_row *= cfg.w_row;
    out.total = out.elf_min + out.elf_max + out.elf_row;
    return out;
}

// d(loss)/d(dist_out); hinge kinks take the zero (flat-side) subgradient.
inline void elf_backward(std::span<const double> dist_out, const PairTable& table, const ElfConfig& cfg,
                         std::span<double> grad) {
    const std::size_t m = table.pairs.size();
    const double rb2 = cfg.r_b * cfg.r_b;
    const double dmin2 = cfg.d_min * cfg.d_min;
    for (std::size_t k = 0; k < m; ++k) {
        const double p = dist_out[k];
        double gp = 0.0;
        if (table.adjacent[k]) {
            if (p > rb2) gp += cfg.w_max;
        } else {
            if (p < rb2 + cfg.margin) gp -= cfg.w_min;
        }
        if (p < dmin2) gp -= cfg.w_min;
        if (cfg.d_max && p > *cfg.d_max * *cfg.d_max) gp += cfg.w_max;
        grad[k] = gp;
        grad[m + k] =
            cfg.row_spacing ? cfg.w_row * elf_row_penalty_grad(dist_out[m + k], *cfg.row_spacing) : 0.0;
    }
}

} // namespace detail

// Total penalty over a DistL output vector: pair entries feed ELF_min/ELF_max,
// row entries feed ELF_row. Zero total means the coordinates are a feasible
// embedding for the configured hardware.
inline ElfBreakdown elf_total(std::span<const double> dist_out, const Graph& g, const ElfConfig& cfg) {
    return detail::elf_eval(dist_out, detail::PairTable(g), cfg);
}

// DistL-layout squared distances computed directly from coordinates: C(n,2)
// squared pair distances followed by C(n,2) squared row distances.
inline std::vector<double> squared_distances(const Embedding& e) {
    const int n = static_cast<int>(e.size());
    const std::size_t m = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::vector<double> out(2 * m);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            const double dx = e[static_cast<std::size_t>(i)].x - e[static_cast<std::size_t>(j)].x;
            const double dy = e[static_cast<std::size_t>(i)].y - e[static_cast<std::size_t>(j)].y;
            out[k] = dx * dx + dy * dy;
            out[m + k] = dy * dy;
        }
    }
    return out;
}

inline ElfBreakdown elf_total(const Embedding& e, const Graph& g, const ElfConfig& cfg) {
    const std::vector<double> dist = squared_distances(e);
    return elf_total(dist, g, cfg);
}

} // namespace udg
