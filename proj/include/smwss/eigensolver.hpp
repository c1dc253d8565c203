#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smwss/potential.hpp"
#include "smwss/tridiagonal.hpp"

namespace smwss {

struct Mesh {
    std::vector<double> z;  // lattice units, strictly increasing; psi = 0 at both ends
    double z_min = 0, z_max = 0;
    double graded_end = 0;       // first node where the lattice spacing takes over
    std::size_t graded_nodes = 0;
    double density = 0;          // points per local wavelength in the graded region
    int points_per_period = 0;   // uniform region
    std::string policy;          // "graded" or "uniform"

    std::size_t size() const { return z.size(); }
    /// Trapezoid weights (h_{i-1} + h_i)/2; zero-width ends get h/2.
    std::vector<double> weights() const;
    void validate() const;
};

struct MeshOptions {
    double density = 5000;         // points per local de Broglie wavelength
    int points_per_period = 400;   // uniform spacing in the lattice region
    double z_start = 0;            // left end for the perfect and no-surface variants
    std::size_t max_nodes = 10'000'000;
};

/// Uniform mesh with `intervals` steps on [a, b].
Mesh uniform_mesh(double a, double b, std::size_t intervals);

/// Graded mesh from just inside the repulsive wall (V_LJ = 1e3 D) for the LJ+CP surface;
/// uniform from z_start otherwise.
Mesh build_mesh(const TotalPotential& tp, double z_max, const MeshOptions& options = {});

/// z where V_LJ = 1e3 D, in m.
double wall_position(const LennardJonesParams& lj);

enum class StateLabel { surface_bound, smwss, edge_artifact, excited_band };
std::string label_name(StateLabel label);

struct EigenState {
    double energy = 0;               // E_r
    std::vector<double> psi;         // on mesh nodes, sum w psi^2 = 1
    double mean_z = 0;               // lattice units
    double z0_sensitivity = 0;       // dE/d ln z0 at fixed C3 (Hellmann-Feynman), E_r
    double edge_mass = 0;            // probability in the outermost 2 lattice units
    double surface_mass = 0;         // probability within 2 lattice units of the surface
    StateLabel label = StateLabel::smwss;
    int index = 0;                   // n for reported states, 0 otherwise
    int vib = 0;                     // v = -1, -2, ... for surface-bound states
};

struct SpectrumResult {
    std::shared_ptr<const Mesh> mesh;
    std::vector<EigenState> states;  // sorted by mean_z, ties by energy
    std::string fingerprint;
    double energy_lo = 0, energy_hi = 0;

    /// Reported states: every state not labelled edge_artifact or excited_band.
    std::vector<const EigenState*> reported() const;
    /// E_n - E_{n-1} over reported states; the first entry is E_1 itself.
    std::vector<double> intervals() const;
};

struct SolveOptions {
    double energy_lo = -5, energy_hi = 5;  // E_r
    bool include_bound_below = false;      // also return every state below energy_lo
    double eigen_tol = 1e-13;              // absolute bisection width, E_r
};

/// Interior-node operator in the symmetrised variable phi = sqrt(w) psi; eigenvalues are the energies.
SymTridiagonal assemble_hamiltonian(const Mesh& mesh, const std::vector<double>& V);

/// Eigenpairs of -(1/pi^2) d^2/dz^2 + V with V sampled on the mesh nodes (program units).
SpectrumResult solve_sampled(std::shared_ptr<const Mesh> mesh, const std::vector<double>& V,
                             const SolveOptions& options = {});

/// tp at the mesh nodes, zero at the two Dirichlet ends.
std::vector<double> sample_potential(const TotalPotential& tp, const Mesh& mesh);

/// Samples tp on the mesh, solves, and fills mean_z and z0_sensitivity; labels are left
/// at smwss until classify() runs.
SpectrumResult solve(const TotalPotential& tp, std::shared_ptr<const Mesh> mesh, const SolveOptions& options = {});

double mean_distance(const EigenState& state, const Mesh& mesh);

struct ClassifyOptions {
    double bound_sensitivity = 2.0;  // |dE/d ln z0| above which a state is surface-bound, E_r
    double surface_width = 2.0;      // surface-bound states keep most of their mass below this z
    double edge_width = 2.0;         // lattice units
    double edge_mass = 1e-4;
};

/// First band gap of the untilted lattice at depth U: top of band 1 and bottom of band 2 (E_r).
std::pair<double, double> first_band_gap(double U);

/// Labels states: surface-bound by z0 sensitivity and mass near the surface, edge artifacts by edge mass, excited-band
/// by tilt-corrected energy above the first gap midpoint; n numbers reported states by mean_z.
void classify(SpectrumResult& result, const TotalPotential& tp, const ClassifyOptions& options = {});

} // namespace smwss
