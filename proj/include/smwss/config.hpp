#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smwss/potential.hpp"

namespace smwss {

// Run configuration, read from `key = value` lines ('#' starts a comment).
// Relative paths are resolved against the directory of the file that set them;
// defaults point into the shipped data directory.
struct RunConfig {
    // units and constants
    double lattice_wavelength_nm = 532.0;
    double g = 9.81;

    // inputs
    std::filesystem::path atom_file;
    std::filesystem::path materials_dir;
    std::filesystem::path stack_file;
    std::string mirror = "stack";  // stack | ideal

    // Casimir-Polder
    double temperature = 300.0;  // K
    double table_z_min_nm = 0.1;
    double table_z_max_nm = 10000.0;
    int table_per_decade = 60;
    double matsubara_rel_tol = 1e-7;
    int k_quadrature_order = 64;
    std::optional<double> c3_override;  // a0^3 eV

    // surface and lattice
    SurfaceVariant surface = SurfaceVariant::lj_cp;
    double U = 3.0;     // E_r
    double z0 = 2.3;    // angstrom
    int repulsive_exponent = 12;
    std::optional<double> z_m_nm;
    double z_m_scale = 1.0;
    bool gravity = true;
    bool lattice = true;

    // solver
    double energy_lo = -5.0, energy_hi = 5.0;  // E_r
    double z_max = 25.0;                       // lattice units
    double mesh_density = 5000;
    int points_per_period = 400;
    double edge_mass = 1e-4;

    // outputs
    std::vector<int> wavefunction_states = {1, 2, 3, 4};
    double potential_step = 1.0 / 400;   // lattice units
    double potential_z_max = 6.0;
    double raman_wavelength_nm = 780.0;  // k_eff = 4 pi / lambda
    double intensity_floor = 1e-6;
    bool include_bound_lines = false;

    // scans
    double scan_z0_min = 2.0, scan_z0_max = 6.0;  // angstrom
    int scan_z0_points = 10;
    std::vector<double> c3_factors = {0.99, 0.995, 0.999, 1.0, 1.001, 1.005, 1.01};
    bool rescale_D = true;
    double freq_uncertainty_mhz = 20.0;

    std::filesystem::path output_dir = "out";
    std::filesystem::path cache_dir;  // empty: <output_dir>/cache

    /// Throws ConfigError listing every field outside its range and every missing file.
    void validate() const;
    /// Resolved `key = value` lines in a fixed order; the basis of the fingerprint.
    std::string canonical() const;
    /// SHA-256 over canonical() and the contents of every referenced data file.
    std::string fingerprint() const;
};

/// Directory holding atoms/, materials/ and stacks/ (SMWSS_DATA_DIR overrides the built-in path).
std::filesystem::path data_dir();

RunConfig default_config();

/// Applies `key = value` text on top of `base`; `origin` names the source in errors.
RunConfig parse_config_text(std::string_view text, const std::string& origin,
                            const std::filesystem::path& base_dir, RunConfig base = default_config());

RunConfig parse_config(const std::filesystem::path& path);

/// One `key=value` override (the --set flag); paths resolve against the working directory.
void apply_override(RunConfig& config, std::string_view assignment);

std::vector<std::string> config_keys();

} // namespace smwss
