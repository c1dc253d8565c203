#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smwss/eigensolver.hpp"

namespace smwss {

// ---- model description shared by single solves and scans ------------------------

/// Everything needed to assemble and solve one configuration.
struct ModelSpec {
    SurfaceVariant variant = SurfaceVariant::lj_cp;
    std::shared_ptr<const PotentialTable> cp_table;  // required for lj_cp
    double C3 = 0;                 // J m^3, the LJ tail; 0 means "extract from cp_table"
    double z0 = 2.3e-10;           // m
    int repulsive_exponent = 12;
    std::optional<double> z_m;     // m; default find_matching_distance
    double z_m_scale = 1.0;        // robustness knob applied after matching
    double U = 3.0;                // E_r
    bool include_gravity = true;
    bool include_lattice = true;
    LatticeUnits units{};
    double z_max = 25.0;           // lattice units
    MeshOptions mesh{};
    SolveOptions solve{};
    ClassifyOptions classify{};
};

TotalPotential build_potential(const ModelSpec& spec);

struct Solution {
    TotalPotential potential;
    std::shared_ptr<const Mesh> mesh;
    SpectrumResult spectrum;
};

/// Build, mesh, solve and classify.
Solution solve_model(const ModelSpec& spec);
/// Same on a caller-supplied mesh (scans that must not remesh).
Solution solve_model(const ModelSpec& spec, std::shared_ptr<const Mesh> mesh);

// ---- Raman lines ------------------------------------------------------------------

struct RamanConfig {
    double k_eff = 4 * 3.14159265358979323846 / 780e-9;  // 1/m
    double floor = 1e-6;
    bool include_bound = false;
};

/// sum_i w_i psi_n psi_m e^{i k z_i}, k in 1/m converted to lattice units.
std::complex<double> raman_amplitude(const EigenState& a, const EigenState& b, const Mesh& mesh, double k_eff,
                                     const LatticeUnits& units);

struct SpectrumLine {
    int n = 0, m = 0;
    double offset_hz = 0;  // (E_n - E_m)/h
    double intensity = 0;
};

/// All ordered reported pairs above the intensity floor, n = m included.
std::vector<SpectrumLine> stick_spectrum(const SpectrumResult& result, const RamanConfig& config,
                                         const LatticeUnits& units);

/// Full |<n|e^{ikz}|m>|^2 matrix over reported states (no floor).
std::vector<SpectrumLine> probability_map(const SpectrumResult& result, const RamanConfig& config,
                                          const LatticeUnits& units);

// ---- scans --------------------------------------------------------------------------

struct ScanPoint {
    double parameter = 0;
    std::shared_ptr<const Solution> solution;
    std::vector<int> track;         // per reported state, stable identity across the scan
    std::vector<double> overlap;    // overlap with the matched state of the previous point
    bool tracking_warning = false;  // some match fell below 0.5
    std::vector<char> near_crossing;  // per reported state, see annotate_crossings
};

struct Crossing {
    int track_a = 0, track_b = 0;
    double parameter = 0;
    double gap = 0;  // E_r, at the local minimum
};

struct ScanResult {
    std::string parameter_name;
    std::vector<ScanPoint> points;
    std::vector<Crossing> crossings;

    /// Energy of a track at each point (NaN where absent).
    std::vector<double> curve(int track) const;
    int track_count() const;
};

/// |<a|b>| over the common outer region z >= z_from on a uniform grid (linear interpolation).
double state_overlap(const EigenState& a, const Mesh& ma, const EigenState& b, const Mesh& mb,
                     double z_from = 0.5, double step = 1.0 / 400);

/// Global greedy maximal-overlap assignment: result[i] = index in `next` for prev state i, or -1.
std::vector<int> match_states(const std::vector<const EigenState*>& prev, const Mesh& mprev,
                              const std::vector<const EigenState*>& next, const Mesh& mnext,
                              std::vector<double>* overlaps = nullptr);

/// Local minima of gaps between energy-adjacent tracked curves below `threshold`.
std::vector<Crossing> find_crossings(const ScanResult& scan, double threshold = 0.05);

/// Flags a state at a point when it takes part in a detected crossing there, or when its
/// |dE/d ln z0| exceeds `factor` times the median of its track (borrowed bound-state character).
void annotate_crossings(ScanResult& scan, double factor = 2.0);

/// z0 in m, strictly increasing; C3 held fixed, D from the constraint at each point.
ScanResult scan_z0(const ModelSpec& base, const std::vector<double>& z0_values, int threads = 0);

struct TransitionDelta {
    int n = 0, m = 0;
    std::vector<double> nu_hz;     // per factor
    std::vector<double> delta_hz;  // nu - nu(factor 1)
};

struct C3ScanResult {
    std::vector<double> factors;
    bool rescale_D = true;
    ScanResult scan;  // parameter = factor
    std::vector<TransitionDelta> transitions;
};

/// Pairs (n, n + d) for n in [n_lo, n_hi] and d in `spacings`.
std::vector<std::pair<int, int>> default_transitions(int n_lo = 6, int n_hi = 10, std::vector<int> spacings = {1, 3, 5});

/// CP table and C3 scaled by each factor. With rescale_D, D follows the constraint and z_m is
/// re-matched; otherwise the LJ branch and z_m stay at their unscaled values. Every factor is
/// solved on the mesh of the unscaled model so remeshing does not enter the deltas.
C3ScanResult scan_c3(const ModelSpec& base, const std::vector<double>& factors, bool rescale_D,
                     const std::vector<std::pair<int, int>>& transitions, int threads = 0);

struct C3Uncertainty {
    int n = 0, m = 0;
    double sensitivity_hz = 0;  // d nu / d ln C3
    double relative = 0;        // delta C3 / C3, +inf when insensitive
};

/// Centered finite difference around factor 1 using the nearest factors on each side.
std::vector<C3Uncertainty> infer_c3_uncertainty(const C3ScanResult& scan, double freq_uncertainty_hz);

} // namespace smwss
