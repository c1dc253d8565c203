#include "smwss/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "smwss/errors.hpp"
#include "smwss/tridiagonal.hpp"

namespace smwss {

namespace {
constexpr double kInvPi2 = 1.0 / (std::numbers::pi * std::numbers::pi);
}

std::vector<double> Mesh::weights() const {
    const std::size_t n = z.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = z[i + 1] - z[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

void Mesh::validate() const {
    if (z.size() < 3) throw InputError("mesh needs at least three nodes");
    for (std::size_t i = 1; i < z.size(); ++i)
        if (!(z[i] > z[i - 1])) throw InputError("mesh nodes must be strictly increasing");
}

Mesh uniform_mesh(double a, double b, std::size_t intervals) {
    if (!(b > a) || intervals < 2) throw DomainError("uniform_mesh: need b > a and >= 2 intervals");
    Mesh m;
    m.z.resize(intervals + 1);
    const double h = (b - a) / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) m.z[i] = a + h * static_cast<double>(i);
    m.z.back() = b;
    m.z_min = a;
    m.z_max = b;
    m.graded_end = a;
    m.points_per_period = static_cast<int>(std::lround(1.0 / h));
    m.policy = "uniform";
    return m;
}

double wall_position(const LennardJonesParams& lj) {
    lj.validate();
    const int p = lj.repulsive_exponent;
    // (1/(p-3)) (3 x^p - p x^3) = 1e3
    auto f = [p](double x) { return (3 * std::pow(x, p) - p * x * x * x) / (p - 3) - 1e3; };
    boost::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, 1.0, 1e3, boost::math::tools::eps_tolerance<double>(52), iters);
    return lj.z0 / (0.5 * (lo + hi));
}

Mesh build_mesh(const TotalPotential& tp, double z_max, const MeshOptions& opt) {
    if (!(opt.density >= 12)) throw DomainError("build_mesh: density must be >= 12 points per wavelength");
    if (opt.points_per_period < 40) throw DomainError("build_mesh: need >= 40 points per lattice period");
    const double h_lattice = 1.0 / opt.points_per_period;
    if (tp.surface.variant() != SurfaceVariant::lj_cp) {
        if (!(z_max - opt.z_start >= 20)) throw DomainError("build_mesh: domain must span >= 20 lattice units");
        const auto n = static_cast<std::size_t>(std::ceil((z_max - opt.z_start) * opt.points_per_period - 1e-9));
        if (n + 1 > opt.max_nodes) throw ResourceError("build_mesh: node count exceeds limit; lower the density");
        Mesh m = uniform_mesh(opt.z_start, z_max, n);
        m.points_per_period = opt.points_per_period;
        return m;
    }
    if (!(z_max >= 20)) throw DomainError("build_mesh: z_max must be >= 20 lattice units");
    const double L = tp.units.length_unit;
    // Only the surface term sets the grading; the lattice and tilt are covered by h_lattice.
    auto spacing = [&](double z) {
        const double v = std::abs(tp.surface(z * L)) / tp.units.recoil_energy;
        return std::min(h_lattice, 2.0 / (opt.density * std::sqrt(v)));
    };
    Mesh m;
    m.policy = "graded";
    m.density = opt.density;
    m.points_per_period = opt.points_per_period;
    m.z_min = wall_position(tp.surface.lj()) / L;
    m.z_max = z_max;
    double z = m.z_min;
    m.z.push_back(z);
    bool graded = true;
    while (true) {
        double h = spacing(z);
        h = std::min(h, spacing(z + h));
        if (graded && h >= h_lattice) {
            graded = false;
            m.graded_end = z;
            m.graded_nodes = m.z.size();
        }
        if (z + 1.5 * h > z_max) {
            m.z.push_back(z_max);
            break;
        }
        z += h;
        m.z.push_back(z);
        if (m.z.size() > opt.max_nodes) {
            std::ostringstream os;
            os << "build_mesh: more than " << opt.max_nodes << " nodes at density " << opt.density
               << "; use a coarser density";
            throw ResourceError(os.str());
        }
    }
    if (graded) {
        m.graded_end = z_max;
        m.graded_nodes = m.z.size();
    }
    return m;
}

std::string label_name(StateLabel label) {
    switch (label) {
    case StateLabel::surface_bound: return "surface-bound";
    case StateLabel::smwss: return "smwss";
    case StateLabel::edge_artifact: return "edge-artifact";
    case StateLabel::excited_band: return "excited-band";
    }
    return "unknown";
}

std::vector<const EigenState*> SpectrumResult::reported() const {
    std::vector<const EigenState*> out;
    for (const auto& s : states)
        if (s.label == StateLabel::smwss || s.label == StateLabel::surface_bound) out.push_back(&s);
    return out;
}

std::vector<double> SpectrumResult::intervals() const {
    const auto r = reported();
    std::vector<double> out;
    for (std::size_t i = 0; i < r.size(); ++i) out.push_back(i ? r[i]->energy - r[i - 1]->energy : r[i]->energy);
    return out;
}

double mean_distance(const EigenState& state, const Mesh& mesh) {
    if (state.psi.size() != mesh.size()) throw InputError("mean_distance: state and mesh differ in size");
    const auto w = mesh.weights();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double p = w[i] * state.psi[i] * state.psi[i];
        num += p * mesh.z[i];
        den += p;
    }
    return num / den;
}

SymTridiagonal assemble_hamiltonian(const Mesh& mesh, const std::vector<double>& V) {
    const auto& z = mesh.z;
    const std::size_t N = z.size();
    if (N < 3 || V.size() != N) throw InputError("assemble_hamiltonian: potential and mesh differ in size");
    const std::size_t n = N - 2;
    std::vector<double> d(n), e(n - 1), sw(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = k + 1;
        const double hl = z[i] - z[i - 1], hr = z[i + 1] - z[i];
        const double w = 0.5 * (hl + hr);
        if (!std::isfinite(V[i])) throw DomainError("solve: non-finite potential at an interior node");
        d[k] = kInvPi2 * (1 / hl + 1 / hr) / w + V[i];
        sw[k] = std::sqrt(w);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) e[k] = -kInvPi2 / ((z[k + 2] - z[k + 1]) * sw[k] * sw[k + 1]);
    return SymTridiagonal(std::move(d), std::move(e));
}

SpectrumResult solve_sampled(std::shared_ptr<const Mesh> mesh, const std::vector<double>& V,
                             const SolveOptions& opt) {
    if (!mesh) throw InputError("solve: missing mesh");
    mesh->validate();
    if (!(opt.energy_hi > opt.energy_lo)) throw DomainError("solve: empty energy window");
    const auto& z = mesh->z;
    const std::size_t N = z.size();
    if (V.size() != N) throw InputError("solve: potential and mesh differ in size");
    const SymTridiagonal T = assemble_hamiltonian(*mesh, V);
    const std::size_t n = N - 2;
    std::vector<double> sw(n);
    for (std::size_t k = 0; k < n; ++k) sw[k] = std::sqrt(0.5 * ((z[k + 1] - z[k]) + (z[k + 2] - z[k + 1])));
    const double lo = opt.include_bound_below ? T.lower_bound() : opt.energy_lo;
    const auto lambdas = T.eigenvalues(lo, opt.energy_hi, opt.eigen_tol);
    const auto vecs = T.eigenvectors(lambdas);

    SpectrumResult r;
    r.mesh = mesh;
    r.energy_lo = opt.energy_lo;
    r.energy_hi = opt.energy_hi;
    const auto w = mesh->weights();
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        EigenState s;
        // The Rayleigh quotient of the converged vector is second-order accurate; the bisection
        // midpoint carries the Sturm-count rounding of the stiff wall region.
        s.energy = T.rayleigh(vecs[j]);
        s.psi.assign(N, 0.0);
        std::size_t imax = 0;
        for (std::size_t k = 0; k < n; ++k) {
            s.psi[k + 1] = vecs[j][k] / sw[k];
            if (std::abs(vecs[j][k]) > std::abs(vecs[j][imax])) imax = k;
        }
        if (vecs[j][imax] < 0)
            for (double& p : s.psi) p = -p;
        s.mean_z = mean_distance(s, *mesh);
        r.states.push_back(std::move(s));
    }
    std::stable_sort(r.states.begin(), r.states.end(), [](const EigenState& a, const EigenState& b) {
        return a.mean_z != b.mean_z ? a.mean_z < b.mean_z : a.energy < b.energy;
    });
    return r;
}

std::vector<double> sample_potential(const TotalPotential& tp, const Mesh& mesh) {
    std::vector<double> V(mesh.size());
    for (std::size_t i = 0; i < V.size(); ++i)
        // the hard wall sits exactly on the first node; only interior nodes enter the operator
        V[i] = (i == 0 || i + 1 == V.size()) ? 0.0 : tp(mesh.z[i]);
    return V;
}

SpectrumResult solve(const TotalPotential& tp, std::shared_ptr<const Mesh> mesh, const SolveOptions& opt) {
    if (!mesh) throw InputError("solve: missing mesh");
    auto r = solve_sampled(mesh, sample_potential(tp, *mesh), opt);
    if (tp.surface.variant() == SurfaceVariant::lj_cp) {
        const auto& lj = tp.surface.lj();
        const double L = tp.units.length_unit, Er = tp.units.recoil_energy;
        const double zm = tp.surface.z_m() / L;
        const auto w = mesh->weights();
        std::vector<double> dV(mesh->size(), 0.0);
        for (std::size_t i = 0; i < dV.size(); ++i)
            if (mesh->z[i] < zm) dV[i] = 3 * lj.D * std::pow(lj.z0 / (mesh->z[i] * L), lj.repulsive_exponent) / Er;
        for (auto& s : r.states) {
            double acc = 0;
            for (std::size_t i = 0; i < dV.size() && mesh->z[i] < zm; ++i) acc += w[i] * s.psi[i] * s.psi[i] * dV[i];
            s.z0_sensitivity = acc;
        }
    }
    return r;
}

std::pair<double, double> first_band_gap(double U) {
    if (!(U >= 0)) throw DomainError("first_band_gap: U must be >= 0");
    // Antiperiodic plane waves e^{i (2m+1) pi z}: kinetic (2m+1)^2, lattice couples m <-> m+1 by -U/4.
    constexpr int M = 24;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * M, 2 * M);
    for (int j = 0; j < 2 * M; ++j) {
        const double k = 2.0 * (j - M) + 1.0;
        H(j, j) = k * k + U / 2;
        if (j + 1 < 2 * M) H(j, j + 1) = H(j + 1, j) = -U / 4;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

void classify(SpectrumResult& r, const TotalPotential& tp, const ClassifyOptions& opt) {
    const Mesh& mesh = *r.mesh;
    const auto w = mesh.weights();
    const double edge_from = mesh.z_max - opt.edge_width;
    // without a surface the left end is a box wall as well
    const double edge_to = tp.surface.variant() == SurfaceVariant::none ? mesh.z_min + opt.edge_width
                                                                         : -std::numeric_limits<double>::infinity();
    const double tilt = tp.include_gravity ? tp.units.tilt() : 0.0;
    double gap_mid = std::numeric_limits<double>::infinity();
    if (tp.include_lattice && tp.U > 0) {
        const auto [top, bottom] = first_band_gap(tp.U);
        gap_mid = 0.5 * (top + bottom);
    }
    const bool surface = tp.surface.variant() == SurfaceVariant::lj_cp;
    std::vector<EigenState*> bound;
    for (auto& s : r.states) {
        double edge = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mesh.z[i] > edge_from || mesh.z[i] < edge_to) edge += w[i] * s.psi[i] * s.psi[i];
        s.edge_mass = edge;
        double near = 0;
        for (std::size_t i = 0; i < w.size() && mesh.z[i] < opt.surface_width; ++i)
            near += w[i] * s.psi[i] * s.psi[i];
        s.surface_mass = near;
        s.index = 0;
        s.vib = 0;
        if (edge > opt.edge_mass)
            s.label = StateLabel::edge_artifact;
        else if (surface && std::abs(s.z0_sensitivity) > opt.bound_sensitivity && near > 0.5)
            s.label = StateLabel::surface_bound;
        else if (s.energy + tilt * s.mean_z > gap_mid)
            s.label = StateLabel::excited_band;
        else
            s.label = StateLabel::smwss;
        if (s.label == StateLabel::surface_bound) bound.push_back(&s);
    }
    std::sort(bound.begin(), bound.end(), [](auto* a, auto* b) { return a->energy > b->energy; });
    for (std::size_t i = 0; i < bound.size(); ++i) bound[i]->vib = -static_cast<int>(i) - 1;
    int n = 0;
    for (auto& s : r.states)
        if (s.label == StateLabel::smwss || s.label == StateLabel::surface_bound) s.index = ++n;
}

} // namespace smwss
