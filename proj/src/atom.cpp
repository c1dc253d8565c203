#include "smwss/atom.hpp"

#include <cmath>
#include <numbers>

#include "smwss/errors.hpp"
#include "text_io.hpp"

namespace smwss {

void AtomModel::validate() const {
    if (lines.empty()) throw ConfigError("atom '" + name + "' has no transition lines");
    if (!(mass > 0)) throw ConfigError("atom '" + name + "' needs a positive mass");
    for (const auto& l : lines)
        if (!(l.omega > 0) || !(l.dipole >= 0))
            throw ConfigError("atom '" + name + "': lines need omega > 0 and dipole >= 0");
}

double polarizability_imag(const AtomModel& atom, double xi, const PhysicalConstants& pc) {
    if (!(xi >= 0)) throw DomainError("polarizability_imag: xi must be >= 0");
    if (atom.lines.empty()) throw ConfigError("polarizability_imag: empty line list");
    double sum = 0;
    for (const auto& l : atom.lines) sum += l.omega * l.dipole * l.dipole / (l.omega * l.omega + xi * xi);
    return 2.0 / pc.hbar * sum;
}

double polarizability_volume(const AtomModel& atom, double xi, const PhysicalConstants& pc) {
    return polarizability_imag(atom, xi, pc) / (4 * std::numbers::pi * pc.epsilon_0);
}

double polarizability_au(const AtomModel& atom, double xi, const PhysicalConstants& pc) {
    return polarizability_volume(atom, xi, pc) / std::pow(pc.bohr_radius, 3);
}

AtomModel scale_polarizability(AtomModel atom, double factor) {
    if (!(factor >= 0)) throw DomainError("scale_polarizability: factor must be >= 0");
    const double s = std::sqrt(factor);
    for (auto& l : atom.lines) l.dipole *= s;
    return atom;
}

AtomModel load_atom(const std::filesystem::path& path, const PhysicalConstants& pc) {
    AtomModel atom;
    int degeneracy = 0;
    struct Pending {
        detail::Record rec;
        double omega;
        double dipole_au;
        bool reduced;
    };
    std::vector<Pending> pending;
    const double ea0 = pc.electronvolt * pc.bohr_radius;  // e * a0 in C m (numerically)
    for (const auto& line : detail::read_records(path)) {
        const auto& t = line.tokens;
        if (t[0] == "name" && t.size() == 2) {
            atom.name = t[1];
        } else if (t[0] == "mass_kg" && t.size() == 2) {
            atom.mass = line.number(1);
        } else if (t[0] == "mass_u" && t.size() == 2) {
            atom.mass = line.number(1) * pc.atomic_mass_unit;
        } else if (t[0] == "ground_degeneracy" && t.size() == 2) {
            degeneracy = static_cast<int>(line.number(1));
            if (degeneracy < 1) line.fail("ground_degeneracy must be >= 1", 1);
        } else if (t[0] == "line" && t.size() == 5) {
            const double value = line.number(1);
            if (!(value > 0)) line.fail("line position must be positive", 1);
            double omega = 0;
            if (t[2] == "nm")
                omega = 2 * std::numbers::pi * pc.c / (value * 1e-9);
            else if (t[2] == "rad/s")
                omega = value;
            else
                line.fail("line unit must be 'nm' or 'rad/s'", 2);
            const double d = line.number(3);
            if (!(d >= 0)) line.fail("dipole must be >= 0", 3);
            bool reduced = false;
            if (t[4] == "ea0_reduced")
                reduced = true;
            else if (t[4] != "ea0")
                line.fail("dipole unit must be 'ea0' or 'ea0_reduced'", 4);
            pending.push_back({line, omega, d, reduced});
        } else {
            line.fail("unrecognised record '" + t[0] + "'");
        }
    }
    for (const auto& p : pending) {
        double d2 = p.dipole_au * p.dipole_au;
        if (p.reduced) {
            if (degeneracy == 0) p.rec.fail("'ea0_reduced' dipoles need a ground_degeneracy record", 4);
            // Scalar polarizability: alpha = sum |<J'||d||J>|^2 / (3 (2J+1) hbar omega) * 2.
            d2 /= 3.0 * degeneracy;
        }
        atom.lines.push_back({p.omega, std::sqrt(d2) * ea0});
    }
    if (atom.name.empty()) atom.name = path.stem().string();
    atom.validate();
    return atom;
}

} // namespace smwss
