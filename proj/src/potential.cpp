#include "smwss/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "smwss/errors.hpp"

namespace smwss {

LennardJonesParams LennardJonesParams::from_z0_c3(double z0, double C3, int p) {
    if (!(z0 > 0) || !(C3 > 0)) throw DomainError("Lennard-Jones: z0 and C3 must be positive");
    if (p <= 3) throw DomainError("Lennard-Jones: repulsive exponent must exceed 3");
    LennardJonesParams lj;
    lj.z0 = z0;
    lj.C3 = C3;
    lj.repulsive_exponent = p;
    lj.D = p == 12 ? lj_depth_from_z0(z0, C3) : C3 * (p - 3) / (p * z0 * z0 * z0);
    return lj;
}

void LennardJonesParams::validate() const {
    if (!(z0 > 0) || !(D > 0) || !(C3 > 0)) throw DomainError("Lennard-Jones: z0, D, C3 must be positive");
    const int p = repulsive_exponent;
    const double c3 = D * p * z0 * z0 * z0 / (p - 3);
    if (std::abs(c3 - C3) > 1e-10 * C3) throw DomainError("Lennard-Jones: D, z0 inconsistent with C3");
}

double lj_depth_from_z0(double z0, double C3) {
    if (!(z0 > 0) || !(C3 > 0)) throw DomainError("lj_depth_from_z0: z0 and C3 must be positive");
    return 3 * C3 / (4 * z0 * z0 * z0);
}

double lj_potential(double z, const LennardJonesParams& lj) {
    if (!(z > 0)) throw DomainError("lj_potential: z must be positive");
    const double x = lj.z0 / z;
    const double x3 = x * x * x;
    const int p = lj.repulsive_exponent;
    if (p == 12) return lj.D / 3 * (x3 * x3 * x3 * x3 - 4 * x3);
    return lj.D / (p - 3) * (3 * std::pow(x, p) - p * x3);
}

double optical_potential(double z, double U) {
    return 0.5 * U * (1 - std::cos(2 * std::numbers::pi * z));
}

double gravity_potential(double z, double mass, double g) { return -mass * g * z; }

double find_matching_distance(const LennardJonesParams& lj, const CPInterpolant& cp) {
    lj.validate();
    const double start = 5 * lj.z0;
    const double stop = 50e-9;
    if (cp.z_min() > start * (1 + 1e-12) || cp.z_max() < stop)
        throw ExtrapolationError("find_matching_distance: CP table must cover [5 z0, 50 nm]");
    auto ok = [&](double z) {
        const double x = lj.z0 / z;
        const double rep = std::pow(x, 9) / 4;
        const double tail = std::abs(z * z * z * cp(z) + lj.C3) / lj.C3;
        return rep < 1e-3 && tail < 1e-2;
    };
    if (ok(start)) return start;
    for (double z : cp.table().z)
        if (z > start && z <= stop && ok(z)) return z;
    std::ostringstream os;
    os << "no matching distance below 50 nm: CP table z^3 V never comes within 1% of C3 = " << lj.C3
       << " J m^3 (inconsistent C3?)";
    throw MatchingError(os.str());
}

SurfacePotential SurfacePotential::lj_cp(const LennardJonesParams& lj, std::shared_ptr<const CPInterpolant> cp,
                                         std::optional<double> z_m) {
    lj.validate();
    if (!cp) throw InputError("SurfacePotential: missing CP table");
    SurfacePotential s;
    s.variant_ = SurfaceVariant::lj_cp;
    s.lj_ = lj;
    s.z_m_ = z_m ? *z_m : find_matching_distance(lj, *cp);
    if (!(s.z_m_ > lj.z0) || s.z_m_ < cp->z_min())
        throw MatchingError("SurfacePotential: z_m must exceed z0 and lie inside the CP table");
    s.cp_ = std::move(cp);
    return s;
}

SurfacePotential SurfacePotential::perfect() {
    SurfacePotential s;
    s.variant_ = SurfaceVariant::perfect;
    return s;
}

SurfacePotential SurfacePotential::none() { return {}; }

double SurfacePotential::operator()(double z) const {
    switch (variant_) {
    case SurfaceVariant::none:
        return 0.0;
    case SurfaceVariant::perfect:
        return z < 0 ? std::numeric_limits<double>::infinity() : 0.0;
    case SurfaceVariant::lj_cp:
        return z < z_m_ ? lj_potential(z, lj_) : (*cp_)(z);
    }
    return 0.0;
}

PotentialParts TotalPotential::parts(double z) const {
    PotentialParts p;
    if (surface.variant() != SurfaceVariant::none)
        p.surface = surface(z * units.length_unit) / units.recoil_energy;
    if (include_gravity) p.gravity = -units.tilt() * z;
    if (include_lattice) p.optical = optical_potential(z, U);
    p.total = p.surface + p.gravity + p.optical;
    return p;
}

} // namespace smwss
