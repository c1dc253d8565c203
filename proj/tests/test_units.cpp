#include "doctest.h"

#include <cmath>
#include <numbers>

#include "smwss/errors.hpp"
#include "smwss/units.hpp"

using namespace smwss;
using doctest::Approx;

TEST_SUITE("units") {

TEST_CASE("recoil energy and Bloch frequency for Rb87 at 532 nm") {
    // hbar^2 (2 pi/532 nm)^2 / 2m and m g (266 nm) / h evaluated in long double
    CHECK(recoil_energy(532e-9, kRb87MassKg) == Approx(5.37457398520778e-30).epsilon(1e-12));
    CHECK(bloch_frequency(532e-9, kRb87MassKg, 9.81) == Approx(568.341497163432).epsilon(1e-12));
    CHECK(std::abs(recoil_energy(532e-9, kRb87MassKg) / 5.37e-30 - 1) < 5e-3);
    CHECK(std::abs(bloch_frequency(532e-9, kRb87MassKg, 9.81) - 568.5) < 0.2);
}

TEST_CASE("scaling of the closed forms") {
    const double e = recoil_energy(532e-9, kRb87MassKg);
    CHECK(recoil_energy(532e-9, 2 * kRb87MassKg) == Approx(e / 2).epsilon(1e-14));
    CHECK(recoil_energy(1064e-9, kRb87MassKg) == Approx(e / 4).epsilon(1e-14));
    const double nu = bloch_frequency(532e-9, kRb87MassKg, 9.81);
    CHECK(bloch_frequency(532e-9, kRb87MassKg, 19.62) == Approx(2 * nu).epsilon(1e-14));
    const PhysicalConstants pc;
    CHECK(std::abs(nu * pc.h / e - 0.0701) < 5e-4);
}

TEST_CASE("non-positive inputs") {
    CHECK_THROWS_AS(recoil_energy(0, kRb87MassKg), DomainError);
    CHECK_THROWS_AS(recoil_energy(532e-9, -1), DomainError);
    CHECK_THROWS_AS(bloch_frequency(-532e-9, kRb87MassKg, 9.81), DomainError);
}

TEST_CASE("lattice units") {
    const auto lu = LatticeUnits::make(532e-9, kRb87MassKg);
    CHECK(lu.length_unit == Approx(266e-9).epsilon(1e-15));
    CHECK(lu.recoil_frequency() == Approx(8111.25427823577).epsilon(1e-12));
    CHECK(lu.tilt() == Approx(0.0700682628934978).epsilon(1e-12));
    CHECK(lu.kinetic_prefactor() == Approx(1 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
    CHECK(convert(1.0, Unit::lattice_length, Unit::nanometer, lu) == Approx(266).epsilon(1e-14));
    CHECK(convert(0.0701, Unit::recoil, Unit::hertz, lu) == Approx(568.5).epsilon(2e-3));
}

TEST_CASE("convert round trips within a dimension") {
    const auto lu = LatticeUnits::make(532e-9, kRb87MassKg);
    const Unit lengths[] = {Unit::meter, Unit::nanometer, Unit::angstrom, Unit::bohr, Unit::lattice_length};
    const Unit energies[] = {Unit::joule, Unit::electronvolt, Unit::millielectronvolt, Unit::recoil, Unit::hertz};
    const Unit c3s[] = {Unit::joule_cubic_meter, Unit::ev_bohr3, Unit::recoil_lattice3};
    auto round_trip = [&](auto& set, double x) {
        for (Unit a : set)
            for (Unit b : set) CHECK(convert(convert(x, a, b, lu), b, a, lu) == Approx(x).epsilon(1e-14));
    };
    for (double x : {1e-12, 0.37, 3.28, 4.2e7}) {
        round_trip(lengths, x);
        round_trip(energies, x);
        round_trip(c3s, x);
    }
}

TEST_CASE("incompatible dimensions and unknown names") {
    const LatticeUnits lu;
    CHECK_THROWS_AS(convert(1, Unit::meter, Unit::joule, lu), UnitError);
    CHECK_THROWS_AS(convert(1, Unit::ev_bohr3, Unit::recoil, lu), UnitError);
    CHECK_THROWS_AS(parse_unit("furlong"), UnitError);
    for (Unit u : {Unit::nanometer, Unit::recoil, Unit::ev_bohr3})
        CHECK(parse_unit(unit_name(u)) == u);
}

TEST_CASE("C3 unit") {
    const auto lu = LatticeUnits::make(532e-9, kRb87MassKg);
    const PhysicalConstants pc;
    CHECK(convert(1, Unit::ev_bohr3, Unit::joule_cubic_meter, lu) ==
          Approx(pc.electronvolt * std::pow(pc.bohr_radius, 3)).epsilon(1e-14));
}

}
