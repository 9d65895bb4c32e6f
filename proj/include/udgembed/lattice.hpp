#pragma once

#include "udgembed/types.hpp"

#include <cmath>
#include <vector>

namespace udg {

// Fixed optical-trap positions an atom may occupy, in micrometers.
struct TrapLattice {
    std::vector<Vec2> traps;
    double spacing = 0.0;
};

// Triangular-lattice patch used by the Orion Alpha register: a central trap
// surrounded by 4 hexagonal rings (1+6+12+18+24 = 61 sites) at 5 um side
// length, centered at the origin. The outermost corners are 40 um apart.
inline TrapLattice generate_orion_lattice() {
    constexpr double side = 5.0;
    constexpr int rings = 4;
    const double ax = side;          // basis a -> (side, 0)
    const double bx = side * 0.5;    // basis b -> (side/2, side*sqrt(3)/2)
    const double by = side * std::sqrt(3.0) * 0.5;

    TrapLattice lattice;
    lattice.spacing = side;
    lattice.traps.push_back({0.0, 0.0});

    // Counterclockwise ring walk in axial coordinates, starting on the +x axis.
    constexpr int dir_a[6] = {-1, -1, 0, 1, 1, 0};
    constexpr int dir_b[6] = {1, 0, -1, -1, 0, 1};
    for (int r = 1; r <= rings; ++r) {
        int a = r;
        int b = 0;
        for (int d = 0; d < 6; ++d) {
            for (int step = 0; step < r; ++step) {
                lattice.traps.push_back({a * ax + b * bx, b * by});
                a += dir_a[d];
                b += dir_b[d];
            }
        }
    }
    return lattice;
}

} // namespace udg
