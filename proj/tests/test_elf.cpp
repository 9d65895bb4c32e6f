#include "udgembed/den.hpp"
#include "udgembed/elf.hpp"
#include "udgembed/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace udg;

namespace {

// All-zero weights and atanh biases make the model emit chosen coordinates.
DenModel model_emitting(const Embedding& coords, double bound) {
    const int n = static_cast<int>(coords.size());
    DenModel m = make_den_model(n, bound, coords, 1);
    for (DenseLayer& layer : m.layers) {
        std::fill(layer.w.begin(), layer.w.end(), 0.0);
        std::fill(layer.b.begin(), layer.b.end(), 0.0);
    }
    DenseLayer& last = m.layers.back();
    for (int i = 0; i < n; ++i) {
        last.b[static_cast<std::size_t>(i)] = std::atanh(coords[static_cast<std::size_t>(i)].x / bound);
        last.b[static_cast<std::size_t>(n + i)] = std::atanh(coords[static_cast<std::size_t>(i)].y / bound);
    }
    return m;
}

} // namespace

TEST_CASE("elf_row penalty shape") {
    REQUIRE(elf_row_penalty(0.0, 4.0) == 0.0);
    REQUIRE(elf_row_penalty(16.0, 4.0) == 0.0);
    REQUIRE(elf_row_penalty(25.0, 4.0) == 0.0);
    // peak value 1 at half of row_spacing^2 (row distance 2*sqrt(2))
    REQUIRE(elf_row_penalty(8.0, 4.0) == Catch::Approx(1.0));
    REQUIRE(elf_row_penalty(4.0, 4.0) == Catch::Approx(0.75));
    REQUIRE(elf_row_penalty(12.0, 4.0) == Catch::Approx(0.75));

    // subgradient: zero on the flat regions and at the kink
    REQUIRE(elf_row_penalty_grad(16.0, 4.0) == 0.0);
    REQUIRE(elf_row_penalty_grad(0.0, 4.0) == 0.0);
    REQUIRE(elf_row_penalty_grad(20.0, 4.0) == 0.0);
    REQUIRE(elf_row_penalty_grad(8.0, 4.0) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(elf_row_penalty_grad(4.0, 4.0) > 0.0);
    REQUIRE(elf_row_penalty_grad(12.0, 4.0) < 0.0);
}

TEST_CASE("forward produces the DistL layout") {
    const RegisterProfile aquila = profile_aquila();
    const FixedLayers fixed = make_fixed_layers(5);
    REQUIRE(fixed.pair_count() == 10);

    Embedding target{{0.0, 0.0}, {3.0, 4.0}, {-10.0, 2.0}, {5.0, -6.0}, {20.0, 20.0}};
    const DenModel m = model_emitting(target, aquila.coord_bound);
    const ForwardResult fr = forward(m, fixed, target);
    REQUIRE(fr.dist_out.size() == 20); // 2 * C(5,2)

    // pair (0,1): coords (0,0) and (3,4) -> squared distance 25, row 16
    REQUIRE(fr.dist_out[0] == Catch::Approx(25.0).margin(1e-9));
    REQUIRE(fr.dist_out[10] == Catch::Approx(16.0).margin(1e-9));

    // identical coordinates give zero in both slots
    Embedding doubled{{2.0, 3.0}, {2.0, 3.0}};
    const DenModel m2 = model_emitting(doubled, aquila.coord_bound);
    const ForwardResult fr2 = forward(m2, make_fixed_layers(2), doubled);
    REQUIRE(fr2.dist_out[0] == 0.0);
    REQUIRE(fr2.dist_out[1] == 0.0);

    REQUIRE_THROWS_AS(make_fixed_layers(1), DegenerateInstanceError);
}

TEST_CASE("fixed layer maps hold only -1, 0, +1 entries in the right pattern") {
    const FixedLayers fixed = make_fixed_layers(4);
    const int m = fixed.pair_count();
    for (int row = 0; row < 2 * m; ++row) {
        int plus = 0, minus = 0;
        for (int col = 0; col < 8; ++col) {
            const int w = fixed.diff_weight(row, col);
            REQUIRE((w == -1 || w == 0 || w == 1));
            if (w == 1) ++plus;
            if (w == -1) ++minus;
        }
        REQUIRE(plus == 1);
        REQUIRE(minus == 1);
    }
    for (int row = 0; row < 2 * m; ++row) {
        int ones = 0;
        for (int col = 0; col < 2 * m; ++col) {
            const int w = fixed.dist_weight(row, col);
            REQUIRE((w == 0 || w == 1));
            ones += w;
        }
        REQUIRE(ones == (row < m ? 2 : 1));
    }
}

TEST_CASE("elf_total hand-evaluated contributions") {
    const RegisterProfile aquila = profile_aquila();

    // adjacent pair at distance 8, same row: everything slack
    const Graph edge(2, {{0, 1}});
    const ElfBreakdown slack = elf_total(Embedding{{0.0, 0.0}, {8.0, 0.0}}, edge, make_elf_config(aquila));
    REQUIRE(slack.total == 0.0);

    // adjacent pair at 12: hinge on the squared radius
    const ElfBreakdown far = elf_total(Embedding{{0.0, 0.0}, {12.0, 0.0}}, edge, make_elf_config(aquila));
    REQUIRE(far.elf_max == Catch::Approx(38.7324).margin(1e-9));
    REQUIRE(far.elf_min == 0.0);
    REQUIRE(far.elf_row == 0.0);

    // non-adjacent pair at 6 with zero margin
    const Graph non_edge(2, {});
    const ElfBreakdown close =
        elf_total(Embedding{{0.0, 0.0}, {6.0, 0.0}}, non_edge, make_elf_config(aquila, 0.0));
    REQUIRE(close.elf_min == Catch::Approx(69.2676).margin(1e-9));
    REQUIRE(close.elf_max == 0.0);

    // row term only charges out-of-row placements
    const ElfBreakdown rows = elf_total(Embedding{{0.0, 0.0}, {8.0, 2.0}}, edge, make_elf_config(aquila));
    REQUIRE(rows.elf_row == Catch::Approx(elf_row_penalty(4.0, 4.0)));

    // weights scale their components
    const ElfBreakdown weighted =
        elf_total(Embedding{{0.0, 0.0}, {12.0, 0.0}}, edge, make_elf_config(aquila, 0.1, 1.0, 2.5, 1.0));
    REQUIRE(weighted.elf_max == Catch::Approx(2.5 * 38.7324).margin(1e-9));
    REQUIRE(weighted.total == Catch::Approx(weighted.elf_min + weighted.elf_max + weighted.elf_row));
}

TEST_CASE("orion config charges the d_max window over all pairs") {
    const RegisterProfile orion = profile_orion_alpha();
    const Graph non_edge(2, {});
    const ElfBreakdown far =
        elf_total(Embedding{{-20.3, -20.3}, {20.3, 20.3}}, non_edge, make_elf_config(orion));
    // distance ~57.4 > 40: the max-distance hinge fires
    REQUIRE(far.elf_max > 0.0);
    REQUIRE(far.elf_min == 0.0);
    REQUIRE(far.elf_row == 0.0); // no row constraint on this register
}

TEST_CASE("elf_total is invariant under consistent relabeling") {
    const RegisterProfile aquila = profile_aquila();
    Rng rng = make_rng(77);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 6;
        Embedding e;
        for (int i = 0; i < n; ++i) e.push_back({u(rng), u(rng)});
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (coin(rng) < 0.4) edges.emplace_back(i, j);
        const Graph g(n, edges);

        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::pair<int, int>> relabeled;
        for (auto [a, b] : edges)
            relabeled.emplace_back(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
        Embedding pe(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            pe[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = e[static_cast<std::size_t>(v)];

        const ElfBreakdown base = elf_total(e, g, make_elf_config(aquila));
        const ElfBreakdown moved = elf_total(pe, Graph(n, relabeled), make_elf_config(aquila));
        REQUIRE(moved.total == Catch::Approx(base.total).margin(1e-9));
    }
}

TEST_CASE("coordinates never leave the open box, even with extreme weights") {
    const double bound = 37.5;
    const int n = 4;
    Embedding zeros(static_cast<std::size_t>(n), Vec2{0.0, 0.0});
    DenModel m = make_den_model(n, bound, zeros, 3);
    for (DenseLayer& layer : m.layers) {
        for (double& w : layer.w) w *= 1e6;
        for (double& b : layer.b) b += 50.0;
    }
    const ForwardResult fr = forward(m, make_fixed_layers(n), zeros);
    for (const Vec2& c : fr.coords) {
        REQUIRE(std::abs(c.x) < bound);
        REQUIRE(std::abs(c.y) < bound);
    }
}

TEST_CASE("zero loss is equivalent to checker acceptance on random embeddings") {
    // the margin-strict checker and a vanishing loss must agree on every one
    for (const RegisterProfile& profile : {profile_aquila(), profile_orion_alpha()}) {
        const ElfConfig cfg = make_elf_config(profile);
        Rng rng = make_rng(static_cast<std::uint64_t>(profile.capacity));
        std::uniform_real_distribution<double> coin(0.0, 1.0);

        for (int trial = 0; trial < 300; ++trial) {
            const int n = 2 + trial % 7;
            Embedding e;
            for (int i = 0; i < n; ++i) {
                if (const auto* rect = profile.rectangle()) {
                    std::uniform_real_distribution<double> ux(0.0, rect->width);
                    std::uniform_real_distribution<double> uy(0.0, rect->height);
                    e.push_back({ux(rng), uy(rng)});
                } else {
                    std::uniform_real_distribution<double> u(-profile.coord_bound, profile.coord_bound);
                    e.push_back({u(rng), u(rng)});
                }
            }
            std::vector<std::pair<int, int>> edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (coin(rng) < 0.5) edges.emplace_back(i, j);
            const Graph g(n, edges);

            const bool loss_zero = elf_total(e, g, cfg).total <= 1e-9;
            const bool checker = check(e, g, profile, cfg.margin).feasible();
            REQUIRE(loss_zero == checker);
        }
    }
}
