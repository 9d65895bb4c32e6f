#pragma once

#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/lattice.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace udg {

// Snap a free-space solution onto the trap lattice: vertices are processed in
// decreasing-degree order (ties by ascending index) and each takes the
// nearest still-unused trap (ties by lowest trap index). Higher-degree
// vertices claim their positions first because their adjacency is hardest to
// preserve. The result is injective but not guaranteed to stay a unit-disk
// representation.
inline Embedding remap(const Embedding& p, const Graph& g, const TrapLattice& t) {
    const int n = g.n();
    if (n > static_cast<int>(t.traps.size())) {
        throw CapacityError("remap: more vertices than traps (" + std::to_string(n) + " > " +
                            std::to_string(t.traps.size()) + ")");
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });

    std::vector<char> used(t.traps.size(), 0);
    Embedding out(static_cast<std::size_t>(n));
    for (int v : order) {
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t ti = 0; ti < t.traps.size(); ++ti) {
            if (used[ti]) continue;
            const double d2 = squared_distance(p[static_cast<std::size_t>(v)], t.traps[ti]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(ti);
            }
        }
        used[static_cast<std::size_t>(best)] = 1;
        out[static_cast<std::size_t>(v)] = t.traps[static_cast<std::size_t>(best)];
    }
    return out;
}

// Metrics for a lattice solution. Always recomputed from the coordinates; the
// hardware verdict holds by construction on a proper lattice (spacing bounds
// are lattice properties), the UDG verdict usually does not.
inline FeasibilityReport post_remap_metrics(const Embedding& p_lattice, const Graph& g,
                                            const RegisterProfile& profile) {
    return check(p_lattice, g, profile);
}

} // namespace udg
