#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "smwss/errors.hpp"
#include "smwss/spectrum.hpp"
#include "test_support.hpp"

using namespace smwss;
using doctest::Approx;

namespace {

const Solution& default_solution() {
    static const Solution s = solve_model(testing::default_spec(1500));
    return s;
}

const Solution& pure_ladder() {
    static const Solution s = [] {
        auto spec = testing::default_spec();
        spec.variant = SurfaceVariant::none;
        spec.cp_table = nullptr;
        spec.z_max = 40;
        return solve_model(spec);
    }();
    return s;
}

RamanConfig raman() { return RamanConfig{}; }

const C3ScanResult& small_c3_scan() {
    static const C3ScanResult r = scan_c3(testing::default_spec(1500), {0.999, 1.0, 1.001}, true,
                                          default_transitions());
    return r;
}

double distance_to_ladder(double offset, double nu_b) { return std::abs(offset - nu_b * std::round(offset / nu_b)); }

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("zero momentum transfer is the overlap matrix") {
    const auto& s = default_solution();
    const auto rep = s.spectrum.reported();
    double worst = 0;
    for (const auto* a : rep)
        for (const auto* b : rep) {
            const auto amp = raman_amplitude(*a, *b, *s.mesh, 0.0, s.potential.units);
            worst = std::max(worst, std::abs(amp - std::complex<double>(a == b ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("conjugation symmetry and sum rule") {
    const auto& s = default_solution();
    const auto rep = s.spectrum.reported();
    const double k = raman().k_eff;
    for (std::size_t i = 0; i < rep.size(); i += 3)
        for (std::size_t j = 0; j < rep.size(); j += 2) {
            const auto a = raman_amplitude(*rep[i], *rep[j], *s.mesh, k, s.potential.units);
            const auto b = raman_amplitude(*rep[j], *rep[i], *s.mesh, -k, s.potential.units);
            CHECK(std::abs(a) == Approx(std::abs(b)).epsilon(1e-10));
        }
    std::map<int, double> total;
    for (const auto& l : probability_map(s.spectrum, raman(), s.potential.units)) total[l.n] += l.intensity;
    for (auto [n, p] : total) CHECK(p <= 1 + 1e-9);
}

TEST_CASE("far ladder couples by |n - m| only") {
    const auto& s = default_solution();
    const auto map = probability_map(s.spectrum, raman(), s.potential.units);
    std::map<std::pair<int, int>, double> P;
    for (const auto& l : map) P[{l.n, l.m}] = l.intensity;
    for (int n = 12; n <= 13; ++n)
        for (int d = 0; d <= 3; ++d) {
            REQUIRE(P.count({n, n + d}));
            CHECK(P[{n, n + d}] == Approx(P[{12, 12 + d}]).epsilon(0.01));
            CHECK(P[{n + d, n}] == Approx(P[{n, n + d}]).epsilon(1e-9));
        }
    CHECK(P[{10, 16}] > 1e-3);
    // bound states couple to each other more than to the ladder
    CHECK(P[{1, 2}] > P[{1, 3}]);
}

TEST_CASE("pure ladder lines sit on Bloch multiples") {
    const auto& s = pure_ladder();
    std::map<int, double> by_gap;
    REQUIRE(s.spectrum.reported().size() >= 12);
    for (const auto& l : probability_map(s.spectrum, raman(), s.potential.units))
        if (l.n == 2 && l.m >= 2) by_gap[l.m - l.n] = l.intensity;
    CHECK(by_gap.at(6) > 1e-3);
    CHECK(by_gap.at(9) < 1e-3);
    const double nu_b = s.potential.units.tilt() * s.potential.units.recoil_frequency();
    const auto lines = stick_spectrum(s.spectrum, raman(), s.potential.units);
    REQUIRE(!lines.empty());
    for (const auto& l : lines) CHECK(distance_to_ladder(l.offset_hz, nu_b) < 0.2);
    CHECK(std::abs(nu_b - 568.5) < 0.2);
}

TEST_CASE("default model far-pair lines bundle at Bloch multiples") {
    const auto& s = default_solution();
    const double nu_b = s.potential.units.tilt() * s.potential.units.recoil_frequency();
    int checked = 0;
    for (const auto& l : stick_spectrum(s.spectrum, raman(), s.potential.units)) {
        CHECK(l.intensity >= raman().floor);
        CHECK(l.intensity <= 1.0);
        if (l.n >= 9 && l.m >= 9) {
            CHECK(distance_to_ladder(l.offset_hz, nu_b) < 5.0);
            ++checked;
        }
        CHECK(l.n >= 3);  // bound lines excluded by default
    }
    CHECK(checked > 20);
}

TEST_CASE("empty window") {
    auto spec = testing::default_spec();
    spec.solve.energy_lo = -100;
    spec.solve.energy_hi = -90;
    const auto s = solve_model(spec);
    CHECK(s.spectrum.reported().empty());
    CHECK(stick_spectrum(s.spectrum, raman(), s.potential.units).empty());
}

TEST_CASE("overlaps and matching") {
    const auto& s = default_solution();
    const auto rep = s.spectrum.reported();
    CHECK(state_overlap(*rep[12], *s.mesh, *rep[12], *s.mesh) == Approx(1).epsilon(1e-4));
    CHECK(state_overlap(*rep[12], *s.mesh, *rep[13], *s.mesh) < 1e-3);
    std::vector<double> ov;
    const auto m = match_states(rep, *s.mesh, rep, *s.mesh, &ov);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == int(i));
}

TEST_CASE("z0 tracking is consistent in both directions") {
    const auto scan = scan_z0(testing::default_spec(1500), {2.2e-10, 2.3e-10, 2.4e-10});
    REQUIRE(scan.points.size() == 3);
    for (std::size_t p = 1; p < scan.points.size(); ++p) {
        const auto& a = *scan.points[p - 1].solution;
        const auto& b = *scan.points[p].solution;
        const auto fwd = match_states(a.spectrum.reported(), *a.mesh, b.spectrum.reported(), *b.mesh);
        const auto bwd = match_states(b.spectrum.reported(), *b.mesh, a.spectrum.reported(), *a.mesh);
        for (std::size_t i = 0; i < fwd.size(); ++i)
            if (fwd[i] >= 0) CHECK(bwd[fwd[i]] == int(i));
        // the far ladder keeps its identity; states near the surface may swap character with bound levels
        const auto rep = b.spectrum.reported();
        for (std::size_t i = 0; i < rep.size(); ++i)
            if (rep[i]->mean_z > 9.5) CHECK(scan.points[p].overlap[i] > 0.99);
    }
    const auto first = scan.points[0].solution->spectrum.reported();
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i]->mean_z < 9.5) continue;
        const auto c = scan.curve(scan.points[0].track[i]);
        CHECK(std::abs(c[2] - c[0]) < 1e-3);
    }
    for (const auto& c : scan.crossings) CHECK(c.gap > 0);
}

TEST_CASE("C3 scan deltas") {
    const auto& r = small_c3_scan();
    REQUIRE(r.transitions.size() == default_transitions().size());
    for (const auto& t : r.transitions) {
        CHECK(t.delta_hz[1] == 0.0);
        CHECK(std::isfinite(t.delta_hz[0]));
        CHECK(std::isfinite(t.delta_hz[2]));
    }
    CHECK_THROWS_AS(scan_c3(testing::default_spec(1500), {0.99, 1.01}, true, default_transitions()), DomainError);
}

TEST_CASE("uncertainty is linear in the frequency uncertainty") {
    const auto& r = small_c3_scan();
    const auto u1 = infer_c3_uncertainty(r, 0.020);
    const auto u2 = infer_c3_uncertainty(r, 0.040);
    REQUIRE(u1.size() == u2.size());
    for (std::size_t i = 0; i < u1.size(); ++i) {
        CHECK(u2[i].relative == Approx(2 * u1[i].relative).epsilon(1e-12));
        CHECK(u1[i].relative == Approx(0.020 / std::abs(u1[i].sensitivity_hz)).epsilon(1e-12));
    }
}

TEST_CASE("sensitivity ordering: wider transitions respond more") {
    const auto u = infer_c3_uncertainty(small_c3_scan(), 0.020);
    std::map<std::pair<int, int>, double> s;
    for (const auto& x : u) s[{x.n, x.m}] = std::abs(x.sensitivity_hz);
    for (int n = 6; n <= 10; ++n) {
        CHECK(s[{n, n + 3}] > s[{n, n + 1}]);
        CHECK(s[{n, n + 5}] > s[{n, n + 3}]);
    }
}

TEST_CASE("sensitivity ordering: surface shift decays along the ladder") {
    const auto u = infer_c3_uncertainty(small_c3_scan(), 0.020);
    std::map<std::pair<int, int>, double> s;
    for (const auto& x : u) s[{x.n, x.m}] = std::abs(x.sensitivity_hz);
    for (int d : {1, 3, 5})
        for (int n = 7; n <= 10; ++n) CHECK(s[{n, n + d}] < s[{n - 1, n - 1 + d}]);
}

}
