#include "udgembed/graph.hpp"
#include "udgembed/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

using namespace udg;

namespace {

// Test-side maximum clique: plain subset enumeration, independent of the
// Bron-Kerbosch path inside stats().
int brute_force_max_clique(const Graph& g) {
    const int n = g.n();
    int best = 1;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v) {
            if (mask & (1u << v)) members.push_back(v);
        }
        bool clique = true;
        for (std::size_t a = 0; a < members.size() && clique; ++a) {
            for (std::size_t b = a + 1; b < members.size() && clique; ++b) {
                if (!g.has_edge(members[a], members[b])) clique = false;
            }
        }
        if (clique) best = std::max(best, static_cast<int>(members.size()));
    }
    return best;
}

Graph complete_graph(int k) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    return Graph(k, edges);
}

Graph random_graph(int n, double p, Rng& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < p) edges.emplace_back(i, j);
    return Graph(n, edges);
}

} // namespace

TEST_CASE("graph construction validates and normalizes") {
    const Graph path(3, {{0, 1}, {1, 2}});
    REQUIRE(path.n() == 3);
    REQUIRE(path.edge_count() == 2);
    REQUIRE(path.has_edge(1, 0));
    REQUIRE_FALSE(path.has_edge(0, 2));

    const Graph single(1, {});
    REQUIRE(single.n() == 1);
    REQUIRE(single.edge_count() == 0);

    // unordered duplicates collapse to one edge
    const Graph dup(2, {{0, 1}, {1, 0}});
    REQUIRE(dup.edge_count() == 1);

    REQUIRE_THROWS_AS(Graph(3, {{0, 3}}), MalformedInputError);
    REQUIRE_THROWS_AS(Graph(3, {{1, 1}}), MalformedInputError);
    REQUIRE_THROWS_AS(Graph(0, {}), MalformedInputError);
}

TEST_CASE("stats on small named graphs") {
    const GraphStats k4 = stats(complete_graph(4));
    REQUIRE(k4.max_degree == 3);
    REQUIRE(k4.clique_lower_bound == 4);

    // star with 5 leaves
    const Graph star(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    const GraphStats s = stats(star);
    REQUIRE(s.max_degree == 5);
    REQUIRE(s.clique_lower_bound == 2);

    // triangle plus pendant vertex; expected clique verified by enumeration
    const Graph tri(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    REQUIRE(brute_force_max_clique(tri) == 3);
    const GraphStats t = stats(tri);
    REQUIRE(t.max_degree == 3);
    REQUIRE(t.clique_lower_bound == 3);
}

TEST_CASE("clique witness is a genuine clique and bounds hold") {
    Rng rng = make_rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(trial % 15);
        const Graph g = random_graph(n, 0.4, rng);
        const GraphStats s = stats(g);
        REQUIRE(s.clique_lower_bound >= 1);
        REQUIRE(s.clique_lower_bound <= g.n());
        REQUIRE(s.clique_lower_bound <= s.max_degree + 1);
        REQUIRE(static_cast<int>(s.clique_witness.size()) == s.clique_lower_bound);
        for (std::size_t a = 0; a < s.clique_witness.size(); ++a)
            for (std::size_t b = a + 1; b < s.clique_witness.size(); ++b)
                REQUIRE(g.has_edge(s.clique_witness[a], s.clique_witness[b]));
    }
}

TEST_CASE("clique lower bound is exact for n <= 8") {
    Rng rng = make_rng(99);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 1 + static_cast<int>(trial % 8);
        const Graph g = random_graph(n, 0.5, rng);
        REQUIRE(stats(g).clique_lower_bound == brute_force_max_clique(g));
    }
}

TEST_CASE("decompose splits into isolated, complete and general") {
    // two disjoint edges -> two K2s
    const ComponentDecomposition two_edges = decompose(Graph(4, {{0, 1}, {2, 3}}));
    REQUIRE(two_edges.isolated.empty());
    REQUIRE(two_edges.complete.size() == 2);
    REQUIRE(two_edges.general.empty());

    // K3 union path of 3
    const ComponentDecomposition mixed = decompose(Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}}));
    REQUIRE(mixed.complete.size() == 1);
    REQUIRE(mixed.complete.front().size() == 3);
    REQUIRE(mixed.general.size() == 1);
    REQUIRE(mixed.general.front().graph.n() == 3);
    REQUIRE(mixed.general.front().graph.edge_count() == 2);
    REQUIRE(mixed.general.front().to_global == std::vector<int>{3, 4, 5});

    const ComponentDecomposition lone = decompose(Graph(1, {}));
    REQUIRE(lone.isolated == std::vector<int>{0});
}

TEST_CASE("component sizes always partition the vertex set") {
    Rng rng = make_rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(trial % 20);
        const Graph g = random_graph(n, 0.15, rng);
        const ComponentDecomposition d = decompose(g);
        std::set<int> all;
        std::size_t total = d.isolated.size();
        all.insert(d.isolated.begin(), d.isolated.end());
        for (const auto& comp : d.complete) {
            total += comp.size();
            all.insert(comp.begin(), comp.end());
        }
        for (const auto& comp : d.general) {
            total += comp.to_global.size();
            all.insert(comp.to_global.begin(), comp.to_global.end());
        }
        REQUIRE(total == static_cast<std::size_t>(n));
        REQUIRE(all.size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("decompose is invariant under relabeling up to index maps") {
    Rng rng = make_rng(2024);
    const int n = 12;
    const Graph g = random_graph(n, 0.2, rng);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> relabeled;
    for (auto [u, v] : g.edges()) relabeled.emplace_back(perm[u], perm[v]);
    const Graph h(n, relabeled);

    const auto census = [](const ComponentDecomposition& d) {
        std::multiset<std::pair<int, int>> sizes; // (size, edge count)
        for (int v : d.isolated) {
            (void)v;
            sizes.insert({1, 0});
        }
        for (const auto& comp : d.complete) {
            const int k = static_cast<int>(comp.size());
            sizes.insert({k, k * (k - 1) / 2});
        }
        for (const auto& comp : d.general) {
            sizes.insert({comp.graph.n(), comp.graph.edge_count()});
        }
        return sizes;
    };
    REQUIRE(census(decompose(g)) == census(decompose(h)));
}
