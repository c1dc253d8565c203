#include "doctest.h"

#include <cmath>
#include <numbers>

#include "smwss/errors.hpp"
#include "smwss/potential.hpp"
#include "smwss/spectrum.hpp"
#include "test_support.hpp"

using namespace smwss;
using doctest::Approx;

namespace {
const PhysicalConstants pc;
const double kAngstrom = 1e-10;
double c3_si(double au) { return au * testing::ev_a03(); }
} // namespace

TEST_SUITE("potential-assembly") {

TEST_CASE("optical lattice") {
    for (int n : {0, 1, 7}) {
        CHECK(optical_potential(n, 3.0) == Approx(0).epsilon(1e-15));
        CHECK(optical_potential(n + 0.5, 3.0) == Approx(3.0).epsilon(1e-15));
    }
    double s = 0;
    const int N = 1000;
    for (int i = 0; i < N; ++i) s += optical_potential((i + 0.5) / N, 3.0);
    CHECK(s / N == Approx(1.5).epsilon(1e-12));
}

TEST_CASE("gravity") {
    CHECK(gravity_potential(0, kRb87MassKg, 9.81) == 0.0);
    const double v = gravity_potential(266e-9, kRb87MassKg, 9.81);
    CHECK(std::abs(v / (-pc.h * 568.5) - 1) < 2e-3);
    const auto lu = LatticeUnits::make(532e-9, kRb87MassKg);
    CHECK(std::abs(v / lu.recoil_energy / -0.0701 - 1) < 2e-3);
    CHECK(gravity_potential(2e-7, kRb87MassKg, 9.81) == Approx(2 * gravity_potential(1e-7, kRb87MassKg, 9.81)));
}

TEST_CASE("depth from the long-range constraint") {
    const double d = lj_depth_from_z0(2.3 * kAngstrom, c3_si(3.28)) / pc.electronvolt;
    CHECK(std::abs(d / 0.030 - 1) < 0.03);
    for (double z0 = 1.5; z0 <= 6.0001; z0 += 0.25) {
        const double dz = lj_depth_from_z0(z0 * kAngstrom, c3_si(3.28)) / pc.electronvolt;
        CHECK(std::abs(dz / (0.36 * std::pow(z0, -3)) - 1) < 0.03);
    }
    CHECK(lj_depth_from_z0(4.6 * kAngstrom, c3_si(3.28)) ==
          Approx(lj_depth_from_z0(2.3 * kAngstrom, c3_si(3.28)) / 8).epsilon(1e-14));
    CHECK_THROWS_AS(lj_depth_from_z0(0, 1), DomainError);
}

TEST_CASE("Lennard-Jones shape") {
    const auto lj = LennardJonesParams::from_z0_c3(2.3 * kAngstrom, c3_si(3.28));
    CHECK(lj_potential(lj.z0, lj) == Approx(-lj.D).epsilon(1e-14));
    CHECK(std::abs(lj_potential(lj.z0 * std::pow(4.0, -1.0 / 9), lj)) < 1e-12 * lj.D);
    const double z = 1000 * lj.z0;
    CHECK(lj_potential(z, lj) == Approx(-lj.C3 / (z * z * z)).epsilon(1e-12));
    CHECK(lj.C3 == Approx(4 * lj.D * std::pow(lj.z0, 3) / 3).epsilon(1e-14));
    // minimum at z0
    CHECK(lj_potential(0.99 * lj.z0, lj) > -lj.D);
    CHECK(lj_potential(1.01 * lj.z0, lj) > -lj.D);
    const auto lj9 = LennardJonesParams::from_z0_c3(2.3 * kAngstrom, c3_si(3.28), 9);
    CHECK(lj_potential(lj9.z0, lj9) == Approx(-lj9.D).epsilon(1e-14));
    CHECK_THROWS_AS(lj_potential(0, lj), DomainError);
}

TEST_CASE("matching distance") {
    const double c3 = c3_si(3.28);
    const auto lj = LennardJonesParams::from_z0_c3(2.3 * kAngstrom, c3);
    const CPInterpolant synth(std::make_shared<PotentialTable>(synthetic_table(c3, 0.1e-9, 1e-6, 60)));
    CHECK(find_matching_distance(lj, synth) == Approx(5 * lj.z0).epsilon(1e-14));

    const CPInterpolant twice(std::make_shared<PotentialTable>(synthetic_table(2 * c3, 0.1e-9, 1e-6, 60)));
    CHECK_THROWS_AS(find_matching_distance(lj, twice), MatchingError);

    const auto table = testing::shipped_pipeline().cp_table();
    const auto cp = std::make_shared<CPInterpolant>(table);
    const auto ljs = LennardJonesParams::from_z0_c3(2.3 * kAngstrom, extract_C3(*table).c3);
    const double zm = find_matching_distance(ljs, *cp);
    // independent scan of the two criteria over 5 z0 and the table nodes above it
    double expect = 0;
    std::vector<double> cand = {5 * ljs.z0};
    for (double z : table->z)
        if (z > 5 * ljs.z0) cand.push_back(z);
    for (double z : cand) {
        const bool a = std::pow(ljs.z0 / z, 9) / 4 < 1e-3;
        const bool b = std::abs(z * z * z * (*cp)(z) + ljs.C3) / ljs.C3 < 1e-2;
        if (a && b) {
            expect = z;
            break;
        }
    }
    CHECK(zm == expect);
    CHECK(zm >= 5 * ljs.z0);
    CHECK(zm <= 10e-9);
    MESSAGE("z_m = " << zm * 1e9 << " nm");
    const auto s = SurfacePotential::lj_cp(ljs, cp);
    CHECK(s.z_m() == zm);
    const double below = lj_potential(zm, ljs), above = (*cp)(zm);
    CHECK(std::abs(below - above) / std::abs(above) < 1e-2);
    CHECK(s(ljs.z0) == Approx(-ljs.D).epsilon(1e-14));
    CHECK(s(2 * zm) == (*cp)(2 * zm));
    CHECK_THROWS_AS(SurfacePotential::lj_cp(ljs, cp, 0.5 * ljs.z0), MatchingError);
}

TEST_CASE("assembled potential in program units") {
    TotalPotential lattice_only;
    lattice_only.include_gravity = false;
    CHECK(lattice_only(0.5) == Approx(3.0).epsilon(1e-14));
    CHECK(lattice_only.parts(0.5).surface == 0.0);

    TotalPotential perfect;
    perfect.surface = SurfacePotential::perfect();
    CHECK(perfect.parts(3.0).surface == 0.0);
    CHECK(std::isinf(perfect.surface(-1e-9)));

    const auto spec = testing::default_spec();
    const auto tp = build_potential(spec);
    const auto& lj = tp.surface.lj();
    const double z0 = lj.z0 / tp.units.length_unit;
    CHECK(tp.parts(z0).surface == Approx(-lj.D / tp.units.recoil_energy).epsilon(1e-12));
    const double depth = lj.D / tp.units.recoil_energy;
    CHECK(depth > 3e8);
    CHECK(depth < 3e9);
    MESSAGE("D = " << depth << " E_r");

    const auto p2 = tp.parts(2.0);
    const double ratio = std::abs(p2.surface / p2.gravity);
    MESSAGE("|V_s / V_g| at z = 2: " << ratio);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10);
    CHECK(p2.total == Approx(p2.surface + p2.gravity + p2.optical).epsilon(1e-15));
}

}
