#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smwss/atom.hpp"
#include "smwss/stack_optics.hpp"
#include "smwss/units.hpp"

namespace boost::math::interpolators {
template <class Real>
class cardinal_cubic_b_spline;
}

namespace smwss {

struct CPConfig {
    double temperature = 300.0;  // K
    AtomModel atom;
    Mirror mirror = LayerStack{};
    double matsubara_rel_tol = 1e-7;
    int k_quadrature_order = 64;
    /// Number of explicitly summed Matsubara terms before the tail integral is tried;
    /// doubled adaptively until the tail error estimate meets the tolerance.
    int explicit_terms = 128;
    int threads = 0;
    PhysicalConstants constants{};

    void validate() const;
    /// SHA-256 over every numeric input (atom, mirror, temperature, tolerances).
    std::string fingerprint() const;
};

/// xi_n = 2 pi n k_B T / hbar.
double matsubara_frequency(double temperature, int n, const PhysicalConstants& pc = {});

/// Transverse-momentum integral of one Matsubara term, including the (xi/c)^2 prefactor:
///   (xi^2/c^2) int_0^inf (2 pi k dk / kappa) e^{-2 kappa z} [rho_TE - (1 + 2 kappa^2 c^2/xi^2) rho_TM]
/// in m^-3. At xi = 0 the finite TM limit int (2 pi k dk/k) e^{-2kz} (-2 k^2) rho_TM is returned.
double cp_k_integral(double z, double xi, const Mirror& mirror, int order,
                     const PhysicalConstants& pc = {});

struct CPEvaluation {
    double value = 0;           // J
    int explicit_terms = 0;     // Matsubara terms summed one by one
    double tail = 0;            // J, contribution of the tail integral (0 if not needed)
    double error_estimate = 0;  // J
};

/// Finite-temperature potential k_B T sum'_n (alpha(i xi_n)/4 pi eps0) cp_k_integral / (2 pi)^2.
CPEvaluation cp_potential_detailed(double z, const CPConfig& config);
double cp_potential(double z, const CPConfig& config);

struct PotentialTable {
    std::vector<double> z;  // m, strictly increasing
    std::vector<double> V;  // J
    std::string fingerprint;
    double temperature = 0;

    void validate() const;
    /// New table with every V multiplied by `factor`; fingerprint tagged accordingly.
    PotentialTable scaled(double factor) const;
};

/// Logarithmic grid [z_min, z_max] with `per_decade` points per decade.
std::vector<double> log_grid(double z_min, double z_max, int per_decade);

PotentialTable tabulate_cp(const CPConfig& config, double z_min = 0.5e-9, double z_max = 10e-6,
                           int per_decade = 60);

/// -A/z^3 sampled on a log grid (used for synthetic matching tests).
PotentialTable synthetic_table(double c3, double z_min, double z_max, int per_decade);

struct C3Fit {
    double c3 = 0;        // J m^3
    double flatness = 0;  // (max - min) / |median| of z^3 V over the chosen window
    double z_lo = 0, z_hi = 0;
};

/// Median of -z^3 V over the flattest one-decade window below 10 nm.
C3Fit extract_C3(const PotentialTable& table, double z_ceiling = 10e-9);

/// (max - min)/|median| of z^3 V over table points in [z_lo, z_hi].
double plateau_flatness(const PotentialTable& table, double z_lo, double z_hi);

/// Cubic B-spline in (log z, log|V|) over a log-uniform table.
class CPInterpolant {
public:
    explicit CPInterpolant(std::shared_ptr<const PotentialTable> table);
    ~CPInterpolant();
    CPInterpolant(CPInterpolant&&) noexcept;
    CPInterpolant& operator=(CPInterpolant&&) noexcept;

    /// V(z) in J; throws ExtrapolationError outside the table.
    double operator()(double z) const;
    double z_min() const { return table_->z.front(); }
    double z_max() const { return table_->z.back(); }
    const PotentialTable& table() const { return *table_; }
    std::shared_ptr<const PotentialTable> shared_table() const { return table_; }

private:
    std::shared_ptr<const PotentialTable> table_;
    std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
    double log_z0_ = 0, log_step_ = 0;
};

// ---- cache files ----------------------------------------------------------------

void save_table(const PotentialTable& table, const std::filesystem::path& path);
PotentialTable load_table(const std::filesystem::path& path);

/// Loads `<dir>/cp-<fingerprint>.tsv` when present, otherwise tabulates and stores it.
PotentialTable cached_table(const CPConfig& config, const std::filesystem::path& cache_dir,
                            double z_min = 0.5e-9, double z_max = 10e-6, int per_decade = 60,
                            bool* cache_hit = nullptr);

} // namespace smwss
