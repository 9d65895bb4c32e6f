#pragma once

#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/lattice.hpp"
#include "udgembed/rng.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace udg {

// A graph generated from a known feasible point set. The witness certifies
// that a feasible embedding exists, which makes these instances suitable for
// measuring the optimizer rather than the geometry.
struct PlantedInstance {
    Graph graph;
    Embedding witness; // register frame, fully feasible
    RegisterProfile profile;
};

namespace detail {

// Candidate rejection shared by both plant paths: hardware spacing plus the
// margin band around r_b that keeps the planted graph robustly realizable.
inline bool planted_pair_ok(Vec2 a, Vec2 b, const RegisterProfile& p, double band) {
    const double d = distance(a, b);
    if (d < p.d_min + 1e-6) return false;
    if (p.d_max && d > *p.d_max - 1e-6) return false;
    if (d > p.r_b - band && d < p.r_b + band) return false;
    if (p.row_spacing) {
        const double dy = std::abs(a.y - b.y);
        if (dy > row_tolerance && dy < *p.row_spacing) return false;
    }
    return true;
}

inline Graph threshold_graph(const Embedding& pts, double r_b) {
    std::vector<std::pair<int, int>> edges;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]) <= r_b)
                edges.emplace_back(i, j);
        }
    }
    return Graph(n, edges);
}

// Row-first sampling for rectangle registers: rows at least row_spacing apart
// are laid out first, then points pick a row and an x position. Plain uniform
// sampling deadlocks once n exceeds the number of rows that fit.
inline std::optional<Embedding> sample_rectangle_points(const RegisterProfile& p, int n, double band,
                                                        Rng& rng) {
    const auto* rect = p.rectangle();
    const double margin = 1.0; // keep clear of the tanh-unreachable border
    const double x_lo = margin;
    const double x_hi = rect->width - margin;
    double y_lo = margin;
    double y_hi = rect->height - margin;
    // stay inside the (-L, L) band reachable by the coordinate activation
    y_lo = std::max(y_lo, rect->height / 2.0 - p.coord_bound + margin);
    y_hi = std::min(y_hi, rect->height / 2.0 + p.coord_bound - margin);

    std::vector<double> rows;
    if (p.row_spacing) {
        std::uniform_real_distribution<double> jitter(0.0, *p.row_spacing);
        double y = y_lo + jitter(rng) * 0.5;
        while (y <= y_hi) {
            rows.push_back(y);
            y += *p.row_spacing + jitter(rng) * 0.25;
        }
        if (rows.empty()) return std::nullopt;
    }

    std::uniform_real_distribution<double> ux(x_lo, x_hi);
    std::uniform_real_distribution<double> uy(y_lo, y_hi);
    Embedding pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (int tries = 0; tries < 400 && !placed; ++tries) {
            Vec2 cand;
            if (p.row_spacing) {
                std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
                cand = {ux(rng), rows[pick(rng)]};
            } else {
                cand = {ux(rng), uy(rng)};
            }
            placed = true;
            for (const Vec2& q : pts) {
                if (!planted_pair_ok(cand, q, p, band)) {
                    placed = false;
                    break;
                }
            }
            if (placed) pts.push_back(cand);
        }
        if (!placed) return std::nullopt;
    }
    return pts;
}

inline std::optional<Embedding> sample_lattice_points(const RegisterProfile& p, int n, double band,
                                                      Rng& rng) {
    const TrapLattice& lattice = *p.lattice();
    std::vector<int> free_traps(lattice.traps.size());
    std::iota(free_traps.begin(), free_traps.end(), 0);
    Embedding pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (int tries = 0; tries < 200 && !free_traps.empty() && !placed; ++tries) {
            std::uniform_int_distribution<std::size_t> pick(0, free_traps.size() - 1);
            const std::size_t slot = pick(rng);
            const Vec2 cand = lattice.traps[static_cast<std::size_t>(free_traps[slot])];
            bool ok = true;
            for (const Vec2& q : pts) {
                if (!planted_pair_ok(cand, q, p, band)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                pts.push_back(cand);
                free_traps.erase(free_traps.begin() + static_cast<std::ptrdiff_t>(slot));
                placed = true;
            }
        }
        if (!placed) return std::nullopt;
    }
    return pts;
}

} // namespace detail

// Sample a realizable instance: n points respecting every hardware constraint
// with no pair inside [r_b - band, r_b + band], edges by thresholding at r_b.
// The band guarantees the witness gap is at least 2 * band. Deterministic per
// seed; throws after the sampling budget is exhausted.
inline PlantedInstance plant(int n, const RegisterProfile& profile, std::uint64_t seed,
                             double band = 0.3) {
    if (n < 1) throw GenerationError("plant: need at least one vertex");
    if (n > profile.capacity) throw GenerationError("plant: vertex count exceeds register capacity");

    constexpr int instance_attempts = 200;
    Rng rng = make_rng(derive_seed(seed, 0x9d1ecefULL));
    for (int attempt = 0; attempt < instance_attempts; ++attempt) {
        std::optional<Embedding> pts;
        if (profile.is_rectangle()) {
            pts = detail::sample_rectangle_points(profile, n, band, rng);
        } else {
            pts = detail::sample_lattice_points(profile, n, band, rng);
        }
        if (!pts) continue;
        Graph g = detail::threshold_graph(*pts, profile.r_b);
        if (!precheck(g, profile).passed) continue;
        const FeasibilityReport rep = check(*pts, g, profile);
        if (!rep.feasible()) continue;
        return PlantedInstance{std::move(g), std::move(*pts), profile};
    }
    throw GenerationError("plant: sampling budget exhausted after " +
                          std::to_string(instance_attempts) + " attempts (n=" + std::to_string(n) + ")");
}

// Exhaustive backtracking search for a UDG-feasible lattice embedding.
// Vertices are assigned in decreasing-degree order; partial assignments are
// pruned as soon as any already-decidable pair constraint fails. Sound and
// complete, which is the whole point: a `nullopt` certifies no embedding
// exists. Deliberately capped at n <= 6.
inline std::optional<Embedding> exact_lattice_search(const Graph& g, const TrapLattice& t,
                                                     const RegisterProfile& profile) {
    const int n = g.n();
    if (n > 6) throw SizeLimitError("exact_lattice_search: capped at 6 vertices");
    if (n > static_cast<int>(t.traps.size())) return std::nullopt;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });

    const double rb2 = profile.r_b * profile.r_b;
    const std::size_t traps = t.traps.size();
    std::vector<int> assignment(static_cast<std::size_t>(n), -1); // vertex -> trap
    std::vector<char> used(traps, 0);

    const auto pair_ok = [&](int u, int v) {
        const double d2 = squared_distance(t.traps[static_cast<std::size_t>(assignment[static_cast<std::size_t>(u)])],
                                           t.traps[static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])]);
        return g.has_edge(u, v) ? d2 <= rb2 : d2 > rb2;
    };

    const auto search = [&](auto&& self, int depth) -> bool {
        if (depth == n) return true;
        const int v = order[static_cast<std::size_t>(depth)];
        for (std::size_t ti = 0; ti < traps; ++ti) {
            if (used[ti]) continue;
            assignment[static_cast<std::size_t>(v)] = static_cast<int>(ti);
            bool ok = true;
            for (int d = 0; d < depth; ++d) {
                if (!pair_ok(order[static_cast<std::size_t>(d)], v)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                used[ti] = 1;
                if (self(self, depth + 1)) return true;
                used[ti] = 0;
            }
            assignment[static_cast<std::size_t>(v)] = -1;
        }
        return false;
    };

    if (!search(search, 0)) return std::nullopt;
    Embedding out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        out[static_cast<std::size_t>(v)] = t.traps[static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])];
    return out;
}

} // namespace udg
