#pragma once

#include <memory>
#include <optional>

#include "smwss/casimir_polder.hpp"
#include "smwss/units.hpp"

namespace smwss {

/// Short-range well (D/(p-3)) [3 (z0/z)^p - p (z0/z)^3]; p = 12 is the model,
/// other repulsive exponents are a hook only. C3 = D p z0^3 / (p - 3).
struct LennardJonesParams {
    double z0 = 0;  // m
    double D = 0;   // J
    double C3 = 0;  // J m^3
    int repulsive_exponent = 12;

    /// D fixed by C3 and z0 so that the long-range tail is exactly -C3/z^3.
    static LennardJonesParams from_z0_c3(double z0, double C3, int repulsive_exponent = 12);
    void validate() const;
};

/// D = 3 C3 / (4 z0^3).
double lj_depth_from_z0(double z0, double C3);

/// Lennard-Jones energy in J at z in m.
double lj_potential(double z, const LennardJonesParams& params);

/// U (1 - cos 2 pi z) / 2 with z in lattice units.
double optical_potential(double z, double U);

/// -m g z in J for z in m.
double gravity_potential(double z, double mass, double g);

/// Smallest z >= 5 z0 where (z0/z)^9/4 < 1e-3 and |z^3 V_CP + C3| / C3 < 1e-2.
/// Candidates are 5 z0 and the table nodes above it; throws MatchingError if none below 50 nm.
double find_matching_distance(const LennardJonesParams& params, const CPInterpolant& cp);

enum class SurfaceVariant { lj_cp, perfect, none };

class SurfacePotential {
public:
    /// LJ below z_m, tabulated CP above. `z_m` defaults to find_matching_distance.
    static SurfacePotential lj_cp(const LennardJonesParams& lj, std::shared_ptr<const CPInterpolant> cp,
                                  std::optional<double> z_m = std::nullopt);
    /// Hard wall at z = 0 (Dirichlet in the solver).
    static SurfacePotential perfect();
    static SurfacePotential none();

    SurfaceVariant variant() const { return variant_; }
    const LennardJonesParams& lj() const { return lj_; }
    const CPInterpolant* cp() const { return cp_.get(); }
    std::shared_ptr<const CPInterpolant> shared_cp() const { return cp_; }
    double z_m() const { return z_m_; }

    /// Surface energy in J at z in m. Perfect surface: +inf below 0, 0 above.
    double operator()(double z) const;

private:
    SurfaceVariant variant_ = SurfaceVariant::none;
    LennardJonesParams lj_;
    std::shared_ptr<const CPInterpolant> cp_;
    double z_m_ = 0;
};

struct PotentialParts {
    double surface = 0, gravity = 0, optical = 0, total = 0;  // E_r
};

/// V = V_s + V_g + V_op in program units.
struct TotalPotential {
    double U = 3.0;  // E_r
    SurfacePotential surface = SurfacePotential::none();
    bool include_gravity = true;
    bool include_lattice = true;
    LatticeUnits units{};

    /// z in lattice units, energies in E_r.
    PotentialParts parts(double z) const;
    double operator()(double z) const { return parts(z).total; }
};

} // namespace smwss
