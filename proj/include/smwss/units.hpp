#pragma once

#include <string_view>

namespace smwss {

/// CODATA 2018 values (SI). `g` is the only field that is not a fundamental constant.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;        // J s
    double h = 6.62607015e-34;            // J s
    double c = 299792458.0;               // m/s
    double k_B = 1.380649e-23;            // J/K
    double epsilon_0 = 8.8541878128e-12;  // F/m
    double g = 9.81;                      // m/s^2
    double bohr_radius = 5.29177210903e-11;  // m
    double electronvolt = 1.602176634e-19;   // J
    double atomic_mass_unit = 1.66053906660e-27;  // kg
};

inline constexpr double kRb87MassKg = 86.909180527 * 1.66053906660e-27;
inline constexpr double kDefaultLatticeWavelength = 532e-9;

/// Recoil energy hbar^2 k_l^2 / 2m with k_l = 2 pi / lambda_l. Throws DomainError on non-positive input.
double recoil_energy(double lambda_l, double mass, const PhysicalConstants& pc = {});

/// Bloch frequency m g (lambda_l / 2) / h in Hz.
double bloch_frequency(double lambda_l, double mass, double g, const PhysicalConstants& pc = {});

/// Program units: lengths in lambda_l/2, energies in E_r.
struct LatticeUnits {
    double lambda_l = kDefaultLatticeWavelength;
    double atom_mass = kRb87MassKg;
    double length_unit = kDefaultLatticeWavelength / 2;
    double recoil_energy = ::smwss::recoil_energy(kDefaultLatticeWavelength, kRb87MassKg);
    double g = 9.81;
    PhysicalConstants constants{};

    static LatticeUnits make(double lambda_l, double mass, const PhysicalConstants& pc = {});

    /// hbar^2/2m in program units; exactly 1/pi^2 because k_l * (lambda_l/2) = pi.
    double kinetic_prefactor() const;
    /// Gravitational tilt m g (lambda_l/2) in E_r per lattice unit.
    double tilt() const;
    /// E_r / h in Hz.
    double recoil_frequency() const;
};

enum class Unit {
    meter,
    nanometer,
    angstrom,
    bohr,
    lattice_length,  // lambda_l / 2
    joule,
    electronvolt,
    millielectronvolt,
    recoil,          // E_r
    hertz,           // energy h * nu
    joule_cubic_meter,
    ev_bohr3,        // C3 unit a0^3 eV
    recoil_lattice3, // E_r (lambda_l/2)^3
};

enum class Dimension { length, energy, c3 };

Dimension dimension_of(Unit u);
std::string_view unit_name(Unit u);
Unit parse_unit(std::string_view name);

/// Exact multiplicative conversion; throws UnitError on incompatible dimensions.
double convert(double value, Unit from, Unit to, const LatticeUnits& lu);

} // namespace smwss
