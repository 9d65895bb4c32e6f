#pragma once

#include "udgembed/errors.hpp"
#include "udgembed/lattice.hpp"
#include "udgembed/types.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>

namespace udg {

// C6 for |70 S_1/2> of 87Rb, in angular frequency units (rad/us * um^6).
// Keeping every quantity in angular frequency removes hbar from the formulas.
inline constexpr double default_c6 = 862690.0 * two_pi;

struct LaserParams {
    double rabi_frequency = 0.0; // Omega, rad/us
    double detuning = 0.0;       // delta, rad/us
    double c6 = default_c6;      // rad/us * um^6
};

// r_b = (C6 / sqrt(Omega^2 + delta^2))^(1/6); atoms closer than r_b blockade
// each other, which is what makes the register represent a unit-disk graph.
inline double rydberg_radius(const LaserParams& laser) {
    if (laser.c6 <= 0.0) throw DomainError("rydberg_radius: C6 must be positive");
    const double drive = std::hypot(laser.rabi_frequency, laser.detuning);
    if (drive == 0.0) throw DomainError("rydberg_radius: undefined for zero Rabi frequency and detuning");
    return std::pow(laser.c6 / drive, 1.0 / 6.0);
}

// Classical van der Waals magnitude C6 / d^6.
inline double interaction_strength(const LaserParams& laser, double distance_um) {
    if (laser.c6 <= 0.0) throw DomainError("interaction_strength: C6 must be positive");
    if (distance_um <= 0.0) throw DomainError("interaction_strength: distance must be positive");
    const double d3 = distance_um * distance_um * distance_um;
    return laser.c6 / (d3 * d3);
}

struct RectangleShape {
    double width = 0.0;  // um
    double height = 0.0; // um
};

using RegisterShape = std::variant<RectangleShape, TrapLattice>;

// Hardware constraint bundle for one register type. Distances in micrometers.
struct RegisterProfile {
    std::string name;
    RegisterShape shape;
    double r_b = 10.26;                // unit-disk radius
    double d_min = 0.0;                // minimum pair distance
    std::optional<double> d_max;       // maximum pair distance, if bounded
    std::optional<double> row_spacing; // minimum inter-row gap, if rows are used
    double coord_bound = 0.0;          // L, half-width of the coordinate activation
    int capacity = 0;                  // maximum number of atoms

    bool is_rectangle() const { return std::holds_alternative<RectangleShape>(shape); }
    const RectangleShape* rectangle() const { return std::get_if<RectangleShape>(&shape); }
    const TrapLattice* lattice() const { return std::get_if<TrapLattice>(&shape); }
};

inline void validate_profile(const RegisterProfile& p) {
    if (p.d_min <= 0.0 || p.r_b <= 0.0) throw MalformedInputError("profile: d_min and r_b must be positive");
    if (p.d_min >= p.r_b) throw MalformedInputError("profile: d_min must be below r_b");
    if (p.d_max && *p.d_max <= p.r_b) throw MalformedInputError("profile: d_max must exceed r_b");
    if (p.coord_bound <= 0.0) throw MalformedInputError("profile: coordinate bound must be positive");
    if (p.capacity < 1) throw MalformedInputError("profile: capacity must be at least 1");
    if (const auto* rect = p.rectangle()) {
        if (rect->width <= 0.0 || rect->height <= 0.0)
            throw MalformedInputError("profile: rectangle dimensions must be positive");
        if (2.0 * p.coord_bound > std::min(rect->width, rect->height) + 1.0)
            throw MalformedInputError("profile: coordinate bound too large for the register rectangle");
    } else if (const auto* lat = p.lattice()) {
        if (lat->traps.empty()) throw MalformedInputError("profile: trap lattice is empty");
    }
    if (p.row_spacing && *p.row_spacing <= 0.0)
        throw MalformedInputError("profile: row spacing must be positive");
}

// PASQAL Orion Alpha: 61-trap triangular lattice, pair distances in [5, 40] um,
// blockade radius 10.26 um, free-space training bound L = 41/2.
inline RegisterProfile profile_orion_alpha() {
    RegisterProfile p;
    p.name = "orion-alpha";
    TrapLattice lattice = generate_orion_lattice();
    p.capacity = static_cast<int>(lattice.traps.size());
    p.shape = std::move(lattice);
    p.r_b = 10.26;
    p.d_min = 5.0;
    p.d_max = 40.0;
    p.coord_bound = 41.0 / 2.0;
    return p;
}

// QuEra Aquila: 75 x 76 um rectangle, 256 atoms max, 4 um minimum pair
// distance, 4 um row spacing, L = 75/2.
inline RegisterProfile profile_aquila() {
    RegisterProfile p;
    p.name = "aquila";
    p.shape = RectangleShape{75.0, 76.0};
    p.r_b = 10.26;
    p.d_min = 4.0;
    p.row_spacing = 4.0;
    p.coord_bound = 75.0 / 2.0;
    p.capacity = 256;
    return p;
}

// Translation that takes centered coordinates into the physical frame.
inline Vec2 register_frame_offset(const RegisterProfile& p) {
    if (const auto* rect = p.rectangle()) return {rect->width / 2.0, rect->height / 2.0};
    return {0.0, 0.0}; // trap lattices are already centered at the origin
}

// Shift a centered solution into the rectangle's physical frame. Distances are
// untouched; only defined for rectangle profiles with coordinates inside
// (-L, L)^2.
inline Embedding to_register_frame(const Embedding& e, const RegisterProfile& p) {
    const auto* rect = p.rectangle();
    if (rect == nullptr) throw OutOfRegisterError("to_register_frame: profile has no rectangular register");
    const double bound = p.coord_bound;
    Embedding out;
    out.reserve(e.size());
    const Vec2 offset = register_frame_offset(p);
    for (const Vec2& c : e) {
        if (!(std::abs(c.x) < bound) || !(std::abs(c.y) < bound)) {
            throw OutOfRegisterError("to_register_frame: coordinate outside (-L, L)^2");
        }
        out.push_back(c + offset);
    }
    return out;
}

} // namespace udg
