#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "smwss/units.hpp"

namespace smwss {

/// One Lorentz oscillator: eps contribution strength / (resonance^2 + xi^2 + damping * xi).
struct Oscillator {
    double strength = 0;   // rad^2/s^2
    double resonance = 0;  // rad/s
    double damping = 0;    // rad/s
};

/// Dielectric response along the imaginary frequency axis.
struct MaterialModel {
    std::string name;
    std::vector<Oscillator> oscillators;

    static MaterialModel vacuum() { return {"vacuum", {}}; }
};

/// eps(i xi); throws DomainError for xi < 0.
double epsilon_imag(const MaterialModel& material, double xi);

/// Real part of eps at a real angular frequency (used to size quarter-wave layers).
double epsilon_real_frequency(const MaterialModel& material, double omega);

struct Layer {
    MaterialModel material;
    double thickness = 0;  // m
};

/// Layers ordered from the vacuum-facing side towards the semi-infinite substrate.
struct LayerStack {
    std::vector<Layer> layers;
    MaterialModel substrate = MaterialModel::vacuum();

    void validate() const;
};

enum class Polarization { TE, TM };

/// Interface amplitude from medium i to medium j at imaginary frequency, with
/// kappa_a = sqrt(k^2 + eps_a xi^2 / c^2).
double fresnel_imag(double k, double xi, double eps_i, double eps_j, Polarization pol,
                    const PhysicalConstants& pc = {});

/// 2x2 real transfer matrix along the imaginary axis.
struct TransferMatrix {
    std::array<double, 4> m{1, 0, 0, 1};  // row-major

    double operator()(int r, int c) const { return m[2 * r + c]; }
    TransferMatrix operator*(const TransferMatrix& o) const;
    /// Divides by the largest |entry|; returns that scale.
    double renormalize();
};

/// Interface i -> i+1 followed by propagation through layer i+1 of the given
/// thickness. The common growth factor e^{kappa d} is divided out.
TransferMatrix interface_matrix(double r, double kappa_next, double thickness_next);

/// Per-interface matrices of the stack at (k, xi), vacuum side first. The stack
/// matrix is their product composed right to left: T = M_N ... M_1 M_0.
std::vector<TransferMatrix> stack_matrices(const LayerStack& stack, double k, double xi,
                                           Polarization pol, const PhysicalConstants& pc = {});

/// rho = -T21/T22 of the composed stack; real with |rho| <= 1.
double stack_reflection(const LayerStack& stack, double k, double xi, Polarization pol,
                        const PhysicalConstants& pc = {});

/// rho from an already composed matrix.
inline double reflection_from_matrix(const TransferMatrix& t) { return -t(1, 0) / t(1, 1); }

/// rho^TE = -1, rho^TM = +1 at every (k, xi).
struct IdealMirror {};

using Mirror = std::variant<LayerStack, IdealMirror>;

struct ReflectionPair {
    double te = 0;
    double tm = 0;
};

/// Stack evaluator with eps(i xi) cached per layer; the hot path of the k integral.
class MirrorResponse {
public:
    MirrorResponse(const Mirror& mirror, double xi, const PhysicalConstants& pc = {});
    /// Reflection amplitudes for the vacuum-side decay constant kappa0 >= xi/c.
    ReflectionPair at_kappa(double kappa0) const;

private:
    bool ideal_ = false;
    double a2_ = 0;  // (xi/c)^2
    std::vector<double> eps_;        // media 0..N+1 (vacuum, layers, substrate)
    std::vector<double> thickness_;  // media 0..N+1, zero for half spaces
};

// ---- data files -------------------------------------------------------------

/// Parses a material file (`name`, `units SI`, `oscillator S w0 gamma` lines).
MaterialModel load_material(const std::filesystem::path& path);

/// Material library keyed by name: every *.mat file in a directory.
std::map<std::string, MaterialModel> load_material_dir(const std::filesystem::path& dir);

/// Parses a stack file (`layer <material> <thickness_nm>` lines, one `substrate <material>`).
LayerStack load_stack(const std::filesystem::path& path,
                      const std::map<std::string, MaterialModel>& materials);

/// Alternating quarter-wave pairs (d = lambda/(4 n), n = sqrt(Re eps(omega))) on a substrate.
LayerStack quarter_wave_stack(const MaterialModel& top, const MaterialModel& bottom, int pairs,
                              double design_wavelength, const MaterialModel& substrate,
                              const PhysicalConstants& pc = {});

} // namespace smwss
