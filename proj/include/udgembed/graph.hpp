#pragma once

#include "udgembed/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace udg {

// Undirected simple graph over vertices 0..n-1. Edges are stored as canonical
// (min,max) pairs, deduplicated at construction. Immutable afterwards.
class Graph {
public:
    Graph(int n, const std::vector<std::pair<int, int>>& pairs) : n_(n) {
        if (n < 1) {
            throw MalformedInputError("graph must have at least one vertex, got n=" + std::to_string(n));
        }
        edges_.reserve(pairs.size());
        for (auto [u, v] : pairs) {
            if (u < 0 || v < 0 || u >= n || v >= n) {
                throw MalformedInputError("edge endpoint out of range: (" + std::to_string(u) + "," +
                                          std::to_string(v) + ") with n=" + std::to_string(n));
            }
            if (u == v) {
                throw MalformedInputError("self-loop at vertex " + std::to_string(u));
            }
            edges_.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

        adj_.resize(static_cast<std::size_t>(n));
        for (auto [u, v] : edges_) {
            adj_[static_cast<std::size_t>(u)].push_back(v);
            adj_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    int n() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        const auto& nb = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

struct GraphStats {
    int max_degree = 0;
    int clique_lower_bound = 1;
    std::vector<int> degree_sequence; // sorted descending
    std::vector<int> clique_witness;  // vertex subset realizing clique_lower_bound
};

namespace detail {

// Bron-Kerbosch with pivoting on bitmask adjacency; only used for n <= 12.
inline void max_clique_bk(std::uint32_t r, std::uint32_t p, std::uint32_t x,
                          const std::vector<std::uint32_t>& adj, std::uint32_t& best) {
    if (p == 0 && x == 0) {
        if (std::popcount(r) > std::popcount(best)) best = r;
        return;
    }
    std::uint32_t px = p | x;
    int pivot = std::countr_zero(px);
    int best_cover = -1;
    for (std::uint32_t m = px; m != 0; m &= m - 1) {
        const int u = std::countr_zero(m);
        const int cover = std::popcount(p & adj[static_cast<std::size_t>(u)]);
        if (cover > best_cover) {
            best_cover = cover;
            pivot = u;
        }
    }
    std::uint32_t candidates = p & ~adj[static_cast<std::size_t>(pivot)];
    for (std::uint32_t m = candidates; m != 0; m &= m - 1) {
        const int v = std::countr_zero(m);
        const std::uint32_t bit = 1u << v;
        max_clique_bk(r | bit, p & adj[static_cast<std::size_t>(v)], x & adj[static_cast<std::size_t>(v)],
                      adj, best);
        p &= ~bit;
        x |= bit;
    }
}

// Vertices ordered by descending degree, ties by ascending index.
inline std::vector<int> degree_order(const Graph& g) {
    std::vector<int> order(static_cast<std::size_t>(g.n()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    return order;
}

} // namespace detail

// Exact maximum clique for n <= 12, greedy expansion seeded from every vertex
// otherwise. The returned witness is always a genuine clique.
inline GraphStats stats(const Graph& g) {
    GraphStats out;
    const int n = g.n();
    out.degree_sequence.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        out.degree_sequence[static_cast<std::size_t>(v)] = g.degree(v);
        out.max_degree = std::max(out.max_degree, g.degree(v));
    }
    std::sort(out.degree_sequence.rbegin(), out.degree_sequence.rend());

    if (n <= 12) {
        std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
        for (auto [u, v] : g.edges()) {
            adj[static_cast<std::size_t>(u)] |= 1u << v;
            adj[static_cast<std::size_t>(v)] |= 1u << u;
        }
        std::uint32_t best = 1; // any single vertex
        detail::max_clique_bk(0, (1u << n) - 1u, 0, adj, best);
        out.clique_lower_bound = std::popcount(best);
        for (int v = 0; v < n; ++v) {
            if (best & (1u << v)) out.clique_witness.push_back(v);
        }
        if (out.clique_witness.empty()) out.clique_witness.push_back(0);
        out.clique_lower_bound = std::max(out.clique_lower_bound, 1);
        return out;
    }

    const std::vector<int> order = detail::degree_order(g);
    std::vector<int> best{order.front()};
    std::vector<int> clique;
    for (int seed : order) {
        clique.clear();
        clique.push_back(seed);
        for (int u : order) {
            if (u == seed) continue;
            bool ok = true;
            for (int c : clique) {
                if (!g.has_edge(u, c)) {
                    ok = false;
                    break;
                }
            }
            if (ok) clique.push_back(u);
        }
        if (clique.size() > best.size()) best = clique;
    }
    std::sort(best.begin(), best.end());
    out.clique_witness = best;
    out.clique_lower_bound = static_cast<int>(best.size());
    return out;
}

struct GeneralComponent {
    std::vector<int> to_global; // local index -> global vertex id, ascending
    Graph graph;                // induced subgraph on local indices
};

struct ComponentDecomposition {
    std::vector<int> isolated;               // singleton components, global ids
    std::vector<std::vector<int>> complete;  // complete components of size >= 2, global ids
    std::vector<GeneralComponent> general;   // everything else
};

// Connected components split into isolated vertices, complete graphs and
// general components; the latter carry their induced subgraph plus the
// local-to-global index map needed to stitch solutions back together.
inline ComponentDecomposition decompose(const Graph& g) {
    ComponentDecomposition out;
    const int n = g.n();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> comp;
        stack.push_back(s);
        seen[static_cast<std::size_t>(s)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : g.neighbors(v)) {
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    stack.push_back(u);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        const std::size_t k = comp.size();
        if (k == 1) {
            out.isolated.push_back(comp.front());
            continue;
        }
        std::size_t internal_edges = 0;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                if (g.has_edge(comp[a], comp[b])) ++internal_edges;
            }
        }
        if (internal_edges == k * (k - 1) / 2) {
            out.complete.push_back(std::move(comp));
            continue;
        }
        std::vector<int> local(static_cast<std::size_t>(n), -1);
        for (std::size_t i = 0; i < k; ++i) local[static_cast<std::size_t>(comp[i])] = static_cast<int>(i);
        std::vector<std::pair<int, int>> edges;
        for (auto [u, v] : g.edges()) {
            const int lu = local[static_cast<std::size_t>(u)];
            const int lv = local[static_cast<std::size_t>(v)];
            if (lu >= 0 && lv >= 0) edges.emplace_back(lu, lv);
        }
        out.general.push_back(GeneralComponent{std::move(comp), Graph(static_cast<int>(k), edges)});
    }
    return out;
}

} // namespace udg
