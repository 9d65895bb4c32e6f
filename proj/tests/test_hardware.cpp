#include "udgembed/hardware.hpp"
#include "udgembed/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace udg;

TEST_CASE("rydberg radius closed form") {
    // drive chosen so the formula inverts to exactly 10.26 um
    const double target = 10.26;
    const double drive = default_c6 / std::pow(target, 6.0);
    const LaserParams inverted{drive, 0.0, default_c6};
    REQUIRE(rydberg_radius(inverted) == Catch::Approx(target).epsilon(1e-12));

    // Omega = 2*pi rad/us, delta = 0 -> 862690^(1/6), frozen from high
    // precision evaluation
    const LaserParams unit{two_pi, 0.0, default_c6};
    REQUIRE(rydberg_radius(unit) == Catch::Approx(9.75683874532441287).epsilon(1e-14));

    // doubling the drive divides r_b by 2^(1/6)
    const LaserParams doubled{2.0 * two_pi, 0.0, default_c6};
    REQUIRE(rydberg_radius(unit) / rydberg_radius(doubled) ==
            Catch::Approx(std::pow(2.0, 1.0 / 6.0)).epsilon(1e-12));

    REQUIRE_THROWS_AS(rydberg_radius(LaserParams{0.0, 0.0, default_c6}), DomainError);
}

TEST_CASE("interaction strength sixth-power law") {
    const LaserParams laser{two_pi, 0.0, default_c6};
    REQUIRE(interaction_strength(laser, 1.0) == Catch::Approx(default_c6).epsilon(1e-14));
    REQUIRE(interaction_strength(laser, 2.0) / interaction_strength(laser, 1.0) ==
            Catch::Approx(1.0 / 64.0).epsilon(1e-14));
    REQUIRE_THROWS_AS(interaction_strength(laser, 0.0), DomainError);
    REQUIRE_THROWS_AS(interaction_strength(laser, -1.0), DomainError);
}

TEST_CASE("interaction strength at the computed radius equals the drive") {
    Rng rng = make_rng(5);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    for (int i = 0; i < 25; ++i) {
        const LaserParams laser{u(rng), u(rng), default_c6};
        const double rb = rydberg_radius(laser);
        const double drive = std::hypot(laser.rabi_frequency, laser.detuning);
        REQUIRE(interaction_strength(laser, rb) == Catch::Approx(drive).epsilon(1e-12));
    }
}

TEST_CASE("hardware profiles carry the documented constants") {
    const RegisterProfile orion = profile_orion_alpha();
    REQUIRE(orion.d_min == 5.0);
    REQUIRE(orion.d_max.has_value());
    REQUIRE(*orion.d_max == 40.0);
    REQUIRE(orion.r_b == 10.26);
    REQUIRE_FALSE(orion.row_spacing.has_value());
    REQUIRE(orion.coord_bound == 20.5);
    REQUIRE(orion.lattice() != nullptr);
    REQUIRE(orion.capacity == 61);
    REQUIRE_NOTHROW(validate_profile(orion));

    const RegisterProfile aquila = profile_aquila();
    REQUIRE(aquila.row_spacing.has_value());
    REQUIRE(*aquila.row_spacing == 4.0);
    REQUIRE(aquila.coord_bound == 37.5);
    REQUIRE(aquila.rectangle() != nullptr);
    REQUIRE(aquila.rectangle()->width == 75.0);
    REQUIRE(aquila.rectangle()->height == 76.0);
    REQUIRE(aquila.d_min == 4.0);
    REQUIRE_FALSE(aquila.d_max.has_value());
    REQUIRE(aquila.capacity == 256);
    REQUIRE_NOTHROW(validate_profile(aquila));

    // profiles are constant across constructions
    const RegisterProfile again = profile_aquila();
    REQUIRE(again.r_b == aquila.r_b);
    REQUIRE(again.coord_bound == aquila.coord_bound);
}

TEST_CASE("to_register_frame translates into the physical rectangle") {
    const RegisterProfile aquila = profile_aquila();

    const Embedding centered{{0.0, 0.0}};
    const Embedding framed = to_register_frame(centered, aquila);
    REQUIRE(framed[0].x == Catch::Approx(37.5));
    REQUIRE(framed[0].y == Catch::Approx(38.0));

    const Embedding boundary{{-37.5 + 1e-6, 0.0}};
    const Embedding framed_boundary = to_register_frame(boundary, aquila);
    REQUIRE(framed_boundary[0].x == Catch::Approx(1e-6).margin(1e-12));
    REQUIRE(framed_boundary[0].y == Catch::Approx(38.0));

    REQUIRE_THROWS_AS(to_register_frame(Embedding{{37.5, 0.0}}, aquila), OutOfRegisterError);
    REQUIRE_THROWS_AS(to_register_frame(Embedding{{0.0, -40.0}}, aquila), OutOfRegisterError);
    REQUIRE_THROWS_AS(to_register_frame(centered, profile_orion_alpha()), OutOfRegisterError);
}

TEST_CASE("to_register_frame preserves pairwise distances") {
    const RegisterProfile aquila = profile_aquila();
    Rng rng = make_rng(17);
    std::uniform_real_distribution<double> u(-37.0, 37.0);
    for (int trial = 0; trial < 30; ++trial) {
        Embedding e;
        for (int i = 0; i < 8; ++i) e.push_back({u(rng), u(rng)});
        const Embedding f = to_register_frame(e, aquila);
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                REQUIRE(distance(f[i], f[j]) == Catch::Approx(distance(e[i], e[j])).margin(1e-12));
            }
        }
    }
}
