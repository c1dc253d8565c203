#include "smwss/units.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "smwss/errors.hpp"

namespace smwss {

double recoil_energy(double lambda_l, double mass, const PhysicalConstants& pc) {
    if (!(lambda_l > 0) || !(mass > 0))
        throw DomainError("recoil_energy: wavelength and mass must be positive");
    const double k = 2 * std::numbers::pi / lambda_l;
    return pc.hbar * pc.hbar * k * k / (2 * mass);
}

double bloch_frequency(double lambda_l, double mass, double g, const PhysicalConstants& pc) {
    if (!(lambda_l > 0) || !(mass > 0) || !(g > 0))
        throw DomainError("bloch_frequency: all inputs must be positive");
    return mass * g * (lambda_l / 2) / pc.h;
}

LatticeUnits LatticeUnits::make(double lambda_l, double mass, const PhysicalConstants& pc) {
    LatticeUnits lu;
    lu.lambda_l = lambda_l;
    lu.atom_mass = mass;
    lu.length_unit = lambda_l / 2;
    lu.recoil_energy = ::smwss::recoil_energy(lambda_l, mass, pc);
    lu.g = pc.g;
    lu.constants = pc;
    return lu;
}

double LatticeUnits::kinetic_prefactor() const {
    return 1.0 / (std::numbers::pi * std::numbers::pi);
}

double LatticeUnits::tilt() const {
    return atom_mass * g * length_unit / recoil_energy;
}

double LatticeUnits::recoil_frequency() const {
    return recoil_energy / constants.h;
}

namespace {

struct UnitInfo {
    Unit unit;
    std::string_view name;
    Dimension dim;
};

constexpr std::array kUnits{
    UnitInfo{Unit::meter, "m", Dimension::length},
    UnitInfo{Unit::nanometer, "nm", Dimension::length},
    UnitInfo{Unit::angstrom, "angstrom", Dimension::length},
    UnitInfo{Unit::bohr, "a0", Dimension::length},
    UnitInfo{Unit::lattice_length, "lattice", Dimension::length},
    UnitInfo{Unit::joule, "J", Dimension::energy},
    UnitInfo{Unit::electronvolt, "eV", Dimension::energy},
    UnitInfo{Unit::millielectronvolt, "meV", Dimension::energy},
    UnitInfo{Unit::recoil, "Er", Dimension::energy},
    UnitInfo{Unit::hertz, "Hz", Dimension::energy},
    UnitInfo{Unit::joule_cubic_meter, "J*m^3", Dimension::c3},
    UnitInfo{Unit::ev_bohr3, "eV*a0^3", Dimension::c3},
    UnitInfo{Unit::recoil_lattice3, "Er*lattice^3", Dimension::c3},
};

const UnitInfo& info(Unit u) {
    for (const auto& i : kUnits)
        if (i.unit == u) return i;
    throw UnitError("unknown unit");
}

// Size of one `u` in SI base units of its dimension.
double si_factor(Unit u, const LatticeUnits& lu) {
    const auto& pc = lu.constants;
    switch (u) {
    case Unit::meter: return 1.0;
    case Unit::nanometer: return 1e-9;
    case Unit::angstrom: return 1e-10;
    case Unit::bohr: return pc.bohr_radius;
    case Unit::lattice_length: return lu.length_unit;
    case Unit::joule: return 1.0;
    case Unit::electronvolt: return pc.electronvolt;
    case Unit::millielectronvolt: return 1e-3 * pc.electronvolt;
    case Unit::recoil: return lu.recoil_energy;
    case Unit::hertz: return pc.h;
    case Unit::joule_cubic_meter: return 1.0;
    case Unit::ev_bohr3: return pc.electronvolt * std::pow(pc.bohr_radius, 3);
    case Unit::recoil_lattice3: return lu.recoil_energy * std::pow(lu.length_unit, 3);
    }
    throw UnitError("unknown unit");
}

} // namespace

Dimension dimension_of(Unit u) { return info(u).dim; }

std::string_view unit_name(Unit u) { return info(u).name; }

Unit parse_unit(std::string_view name) {
    for (const auto& i : kUnits)
        if (i.name == name) return i.unit;
    throw UnitError("unknown unit '" + std::string(name) + "'");
}

double convert(double value, Unit from, Unit to, const LatticeUnits& lu) {
    if (dimension_of(from) != dimension_of(to))
        throw UnitError("cannot convert " + std::string(unit_name(from)) + " to " +
                        std::string(unit_name(to)));
    if (from == to) return value;
    if (lu.recoil_energy <= 0 &&
        (from == Unit::recoil || to == Unit::recoil || from == Unit::recoil_lattice3 ||
         to == Unit::recoil_lattice3))
        throw UnitError("lattice units not initialised");
    return value * (si_factor(from, lu) / si_factor(to, lu));
}

} // namespace smwss
