#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smwss/units.hpp"

namespace smwss {

/// Ground-state transition: angular frequency and effective dipole d_jg such that
/// the line contributes 2 omega d^2 / (hbar (omega^2 + xi^2)) to alpha.
struct TransitionLine {
    double omega = 0;   // rad/s
    double dipole = 0;  // C m
};

struct AtomModel {
    std::string name;
    double mass = 0;  // kg
    std::vector<TransitionLine> lines;

    void validate() const;
};

/// Dynamic polarizability alpha(i xi) in SI (C m^2 / V).
double polarizability_imag(const AtomModel& atom, double xi, const PhysicalConstants& pc = {});

/// alpha / (4 pi eps0) in m^3.
double polarizability_volume(const AtomModel& atom, double xi, const PhysicalConstants& pc = {});

/// alpha / (4 pi eps0 a0^3), the atomic-unit convention.
double polarizability_au(const AtomModel& atom, double xi, const PhysicalConstants& pc = {});

/// Same atom with every dipole scaled so that alpha scales by `factor`.
AtomModel scale_polarizability(AtomModel atom, double factor);

/// Parses an atom line file:
///   name <str>
///   mass_kg <value>            (or mass_u <value>)
///   ground_degeneracy <2J+1>   (needed by 'reduced' dipoles)
///   line <value> <nm|rad/s> <dipole> <ea0|ea0_reduced>
AtomModel load_atom(const std::filesystem::path& path, const PhysicalConstants& pc = {});

} // namespace smwss
