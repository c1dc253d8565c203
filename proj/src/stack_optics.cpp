#include "smwss/stack_optics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "smwss/errors.hpp"
#include "text_io.hpp"

namespace smwss {

double epsilon_imag(const MaterialModel& material, double xi) {
    if (!(xi >= 0)) throw DomainError("epsilon_imag: xi must be >= 0");
    double eps = 1.0;
    for (const auto& o : material.oscillators)
        eps += o.strength / (o.resonance * o.resonance + xi * xi + o.damping * xi);
    return eps;
}

double epsilon_real_frequency(const MaterialModel& material, double omega) {
    std::complex<double> eps = 1.0;
    for (const auto& o : material.oscillators)
        eps += o.strength /
               std::complex<double>(o.resonance * o.resonance - omega * omega, -o.damping * omega);
    return eps.real();
}

void LayerStack::validate() const {
    for (const auto& l : layers)
        if (!(l.thickness > 0))
            throw ConfigError("layer '" + l.material.name + "' must have positive thickness");
}

double fresnel_imag(double k, double xi, double eps_i, double eps_j, Polarization pol,
                    const PhysicalConstants& pc) {
    if (!(k >= 0) || !(xi >= 0)) throw DomainError("fresnel_imag: k and xi must be >= 0");
    if (k == 0 && xi == 0) throw DomainError("fresnel_imag: degenerate input k = xi = 0");
    if (!(eps_i >= 1) || !(eps_j >= 1)) throw DomainError("fresnel_imag: eps must be >= 1");
    const double a2 = (xi / pc.c) * (xi / pc.c);
    const double ki = std::sqrt(k * k + eps_i * a2);
    const double kj = std::sqrt(k * k + eps_j * a2);
    if (pol == Polarization::TE) return (ki - kj) / (ki + kj);
    return (eps_j * ki - eps_i * kj) / (eps_j * ki + eps_i * kj);
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& o) const {
    const auto& a = m;
    const auto& b = o.m;
    return {{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
             a[2] * b[1] + a[3] * b[3]}};
}

double TransferMatrix::renormalize() {
    double s = 0;
    for (double v : m) s = std::max(s, std::abs(v));
    if (s > 0)
        for (double& v : m) v /= s;
    return s;
}

TransferMatrix interface_matrix(double r, double kappa_next, double thickness_next) {
    // Maps (down, up) amplitudes on side i to side i+1, with the decaying
    // factor e^{-2 kappa d} of layer i+1 kept and the common e^{kappa d} dropped.
    const double p = std::exp(-2.0 * kappa_next * thickness_next);
    return {{p, -r * p, -r, 1.0}};
}

namespace {

double interface_r(double ki, double kj, double eps_i, double eps_j, Polarization pol) {
    if (pol == Polarization::TE) return (ki - kj) / (ki + kj);
    return (eps_j * ki - eps_i * kj) / (eps_j * ki + eps_i * kj);
}

} // namespace

std::vector<TransferMatrix> stack_matrices(const LayerStack& stack, double k, double xi,
                                           Polarization pol, const PhysicalConstants& pc) {
    if (!(k >= 0) || !(xi >= 0)) throw DomainError("stack_reflection: k and xi must be >= 0");
    if (k == 0 && xi == 0) throw DomainError("stack_reflection: degenerate input k = xi = 0");
    const double a2 = (xi / pc.c) * (xi / pc.c);
    const std::size_t n = stack.layers.size();
    std::vector<double> eps(n + 2), kappa(n + 2), d(n + 2, 0.0);
    eps[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        eps[i + 1] = epsilon_imag(stack.layers[i].material, xi);
        d[i + 1] = stack.layers[i].thickness;
    }
    eps[n + 1] = epsilon_imag(stack.substrate, xi);
    for (std::size_t i = 0; i < n + 2; ++i) kappa[i] = std::sqrt(k * k + eps[i] * a2);
    std::vector<TransferMatrix> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(interface_matrix(interface_r(kappa[i], kappa[i + 1], eps[i], eps[i + 1], pol),
                                       kappa[i + 1], d[i + 1]));
    return out;
}

double stack_reflection(const LayerStack& stack, double k, double xi, Polarization pol,
                        const PhysicalConstants& pc) {
    TransferMatrix total;
    for (const auto& t : stack_matrices(stack, k, xi, pol, pc)) {
        total = t * total;
        total.renormalize();
    }
    return reflection_from_matrix(total);
}

MirrorResponse::MirrorResponse(const Mirror& mirror, double xi, const PhysicalConstants& pc) {
    if (!(xi >= 0)) throw DomainError("MirrorResponse: xi must be >= 0");
    a2_ = (xi / pc.c) * (xi / pc.c);
    if (std::holds_alternative<IdealMirror>(mirror)) {
        ideal_ = true;
        return;
    }
    const auto& stack = std::get<LayerStack>(mirror);
    eps_.push_back(1.0);
    thickness_.push_back(0.0);
    for (const auto& l : stack.layers) {
        eps_.push_back(epsilon_imag(l.material, xi));
        thickness_.push_back(l.thickness);
    }
    eps_.push_back(epsilon_imag(stack.substrate, xi));
    thickness_.push_back(0.0);
}

ReflectionPair MirrorResponse::at_kappa(double kappa0) const {
    if (ideal_) return {-1.0, 1.0};
    const std::size_t media = eps_.size();
    // kappa_i^2 = kappa0^2 + (eps_i - 1) (xi/c)^2 avoids forming k^2 = kappa0^2 - a^2.
    double k_prev = kappa0;
    TransferMatrix te, tm;
    for (std::size_t i = 0; i + 1 < media; ++i) {
        const double k_next = std::sqrt(kappa0 * kappa0 + (eps_[i + 1] - 1.0) * a2_);
        const double r_te = interface_r(k_prev, k_next, eps_[i], eps_[i + 1], Polarization::TE);
        const double r_tm = interface_r(k_prev, k_next, eps_[i], eps_[i + 1], Polarization::TM);
        te = interface_matrix(r_te, k_next, thickness_[i + 1]) * te;
        tm = interface_matrix(r_tm, k_next, thickness_[i + 1]) * tm;
        te.renormalize();
        tm.renormalize();
        k_prev = k_next;
    }
    return {reflection_from_matrix(te), reflection_from_matrix(tm)};
}

// ---- data files -------------------------------------------------------------

MaterialModel load_material(const std::filesystem::path& path) {
    MaterialModel m;
    bool si = false;
    for (const auto& line : detail::read_records(path)) {
        const auto& t = line.tokens;
        if (t[0] == "name" && t.size() == 2) {
            m.name = t[1];
        } else if (t[0] == "units" && t.size() == 2) {
            if (t[1] != "SI") line.fail("only 'units SI' is supported");
            si = true;
        } else if (t[0] == "oscillator" && t.size() == 4) {
            Oscillator o{line.number(1), line.number(2), line.number(3)};
            if (!(o.strength >= 0) || !(o.resonance > 0) || !(o.damping >= 0))
                line.fail("oscillator needs strength >= 0, resonance > 0, damping >= 0");
            m.oscillators.push_back(o);
        } else {
            line.fail("unrecognised record '" + t[0] + "'");
        }
    }
    if (!si) throw ConfigError(path.string() + ": missing 'units SI' record");
    if (m.name.empty()) m.name = path.stem().string();
    return m;
}

std::map<std::string, MaterialModel> load_material_dir(const std::filesystem::path& dir) {
    std::map<std::string, MaterialModel> out;
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("material directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".mat") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        auto m = load_material(f);
        out[m.name] = std::move(m);
    }
    out.emplace("vacuum", MaterialModel::vacuum());
    return out;
}

LayerStack load_stack(const std::filesystem::path& path,
                      const std::map<std::string, MaterialModel>& materials) {
    LayerStack s;
    bool have_substrate = false;
    auto lookup = [&](const detail::Record& line, const std::string& name) {
        auto it = materials.find(name);
        if (it == materials.end()) line.fail("unknown material '" + name + "'");
        return it->second;
    };
    for (const auto& line : detail::read_records(path)) {
        const auto& t = line.tokens;
        if (t[0] == "layer" && t.size() == 3) {
            const double nm = line.number(2);
            if (!(nm > 0)) line.fail("layer thickness must be positive");
            s.layers.push_back({lookup(line, t[1]), nm * 1e-9});
        } else if (t[0] == "substrate" && t.size() == 2) {
            if (have_substrate) line.fail("duplicate substrate record");
            s.substrate = lookup(line, t[1]);
            have_substrate = true;
        } else {
            line.fail("unrecognised record '" + t[0] + "'");
        }
    }
    if (!have_substrate) throw ConfigError(path.string() + ": missing substrate record");
    return s;
}

LayerStack quarter_wave_stack(const MaterialModel& top, const MaterialModel& bottom, int pairs,
                              double design_wavelength, const MaterialModel& substrate,
                              const PhysicalConstants& pc) {
    if (pairs < 0 || !(design_wavelength > 0))
        throw DomainError("quarter_wave_stack: need pairs >= 0 and a positive wavelength");
    const double omega = 2 * std::numbers::pi * pc.c / design_wavelength;
    auto thickness = [&](const MaterialModel& m) {
        return design_wavelength / (4.0 * std::sqrt(epsilon_real_frequency(m, omega)));
    };
    LayerStack s;
    for (int i = 0; i < pairs; ++i) {
        s.layers.push_back({top, thickness(top)});
        s.layers.push_back({bottom, thickness(bottom)});
    }
    s.substrate = substrate;
    return s;
}

} // namespace smwss
