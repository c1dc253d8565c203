#include "smwss/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>

#include <json.hpp>

#include "smwss/errors.hpp"
#include "smwss/numerics.hpp"

#ifndef SMWSS_VERSION
#define SMWSS_VERSION "0.0.0"
#endif

namespace smwss {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version() { return SMWSS_VERSION; }

Pipeline::Pipeline(RunConfig config, int threads) : config_(std::move(config)), threads_(threads) {
    config_.validate();
    fingerprint_ = config_.fingerprint();
    PhysicalConstants pc;
    pc.g = config_.g;
    cp_config_.temperature = config_.temperature;
    cp_config_.atom = load_atom(config_.atom_file, pc);
    if (config_.mirror == "ideal")
        cp_config_.mirror = IdealMirror{};
    else
        cp_config_.mirror = load_stack(config_.stack_file, load_material_dir(config_.materials_dir));
    cp_config_.matsubara_rel_tol = config_.matsubara_rel_tol;
    cp_config_.k_quadrature_order = config_.k_quadrature_order;
    cp_config_.threads = threads;
    cp_config_.constants = pc;
    units_ = LatticeUnits::make(config_.lattice_wavelength_nm * 1e-9, cp_config_.atom.mass, pc);
}

fs::path Pipeline::cache_dir() const {
    return config_.cache_dir.empty() ? config_.output_dir / "cache" : config_.cache_dir;
}

std::shared_ptr<const PotentialTable> Pipeline::cp_table() {
    if (table_) return table_;
    auto t = cached_table(cp_config_, cache_dir(), config_.table_z_min_nm * 1e-9, config_.table_z_max_nm * 1e-9,
                          config_.table_per_decade, &cache_hit_);
    if (config_.c3_override) {
        const PhysicalConstants& pc = cp_config_.constants;
        const double target = *config_.c3_override * pc.electronvolt * std::pow(pc.bohr_radius, 3);
        t = t.scaled(target / extract_C3(t).c3);
    }
    table_ = std::make_shared<const PotentialTable>(std::move(t));
    return table_;
}

ModelSpec Pipeline::model_spec() {
    ModelSpec s;
    s.variant = config_.surface;
    if (s.variant == SurfaceVariant::lj_cp) s.cp_table = cp_table();
    s.z0 = config_.z0 * 1e-10;
    s.repulsive_exponent = config_.repulsive_exponent;
    if (config_.z_m_nm) s.z_m = *config_.z_m_nm * 1e-9;
    s.z_m_scale = config_.z_m_scale;
    s.U = config_.U;
    s.include_gravity = config_.gravity;
    s.include_lattice = config_.lattice;
    s.units = units_;
    s.z_max = config_.z_max;
    s.mesh.density = config_.mesh_density;
    s.mesh.points_per_period = config_.points_per_period;
    s.solve.energy_lo = config_.energy_lo;
    s.solve.energy_hi = config_.energy_hi;
    s.classify.edge_mass = config_.edge_mass;
    return s;
}

const Solution& Pipeline::solution() {
    if (!solution_) solution_ = std::make_unique<Solution>(solve_model(model_spec()));
    return *solution_;
}

// ---- tables -------------------------------------------------------------------------

namespace {

std::string num(double v) { return format_double(v); }

void header(CsvWriter& csv, Pipeline& p, const std::string& what) {
    csv.comment("smwss " + version() + " " + what);
    csv.comment("config " + p.fingerprint());
}

double a03ev(const PhysicalConstants& pc) { return pc.electronvolt * std::pow(pc.bohr_radius, 3); }

Table cp_table_csv(Pipeline& p) {
    const auto t = p.cp_table();
    const auto& pc = p.cp_config().constants;
    const auto fit = extract_C3(*t);
    Table out{"cp_table", CsvWriter({"z_nm", "V_J", "V_Er", "minus_z3V_a03eV"})};
    header(out.csv, p, "Casimir-Polder potential");
    out.csv.comment("C3 " + num(fit.c3 / a03ev(pc)) + " a0^3 eV from [" + num(fit.z_lo * 1e9) + ", " +
                    num(fit.z_hi * 1e9) + "] nm, flatness " + num(fit.flatness));
    out.csv.comment("plateau flatness over [1, 10] nm " + num(plateau_flatness(*t, 1e-9, 10e-9)));
    out.csv.comment("temperature " + num(p.config().temperature) + " K");
    for (std::size_t i = 0; i < t->z.size(); ++i)
        out.csv.row_numbers({t->z[i] * 1e9, t->V[i], t->V[i] / p.units().recoil_energy,
                             -t->V[i] * std::pow(t->z[i], 3) / a03ev(pc)});
    return out;
}

// Log-spaced near the wall, uniform beyond.
std::vector<double> plot_grid(double z_lo, double step, double z_hi) {
    std::vector<double> z;
    if (z_lo < step) {
        const int n = 200;
        const double r = std::log(step / z_lo);
        for (int i = 0; i < n; ++i) z.push_back(z_lo * std::exp(r * i / n));
    }
    const double start = std::max(step, z_lo);
    const auto m = static_cast<std::size_t>(std::floor((z_hi - start) / step + 1e-9));
    for (std::size_t i = 0; i <= m; ++i) z.push_back(start + step * static_cast<double>(i));
    return z;
}

Table potential_csv(Pipeline& p) {
    const auto spec = p.model_spec();
    const auto tp = build_potential(spec);
    const auto& cfg = p.config();
    double z_lo = cfg.potential_step;
    if (tp.surface.variant() == SurfaceVariant::lj_cp) z_lo = wall_position(tp.surface.lj()) / p.units().length_unit;
    Table out{"potential", CsvWriter({"z_L", "z_nm", "V_s_Er", "V_g_Er", "V_op_Er", "V_total_Er"})};
    header(out.csv, p, "potential, z in lattice units of " + num(p.units().length_unit * 1e9) + " nm");
    if (tp.surface.variant() == SurfaceVariant::lj_cp) {
        const auto& lj = tp.surface.lj();
        out.csv.comment("LJ z0 " + num(lj.z0 * 1e10) + " A, D " + num(lj.D / p.cp_config().constants.electronvolt * 1e3) +
                        " meV, C3 " + num(lj.C3 / a03ev(p.cp_config().constants)) + " a0^3 eV, z_m " +
                        num(tp.surface.z_m() * 1e9) + " nm");
    }
    for (double z : plot_grid(z_lo, cfg.potential_step, cfg.potential_z_max)) {
        const auto v = tp.parts(z);
        out.csv.row_numbers({z, z * p.units().length_unit * 1e9, v.surface, v.gravity, v.optical, v.total});
    }
    return out;
}

Table eigen_csv(const SpectrumResult& r, Pipeline& p, const std::string& name, const std::string& what) {
    Table out{name, CsvWriter({"n", "v", "label", "mean_z_L", "energy_Er", "interval_Er", "z0_sensitivity_Er",
                               "edge_mass", "surface_mass"})};
    header(out.csv, p, what);
    out.csv.comment("mesh " + std::to_string(r.mesh->size()) + " nodes, " + r.mesh->policy + ", z in [" +
                    num(r.mesh->z_min) + ", " + num(r.mesh->z_max) + "] L; window [" + num(r.energy_lo) + ", " +
                    num(r.energy_hi) + "] E_r");
    out.csv.comment("n = 0 marks states that are not reported (edge artifacts, excited band)");
    const EigenState* prev = nullptr;
    for (const auto& s : r.states) {
        std::string interval;
        if (s.index > 0) {
            interval = num(prev ? s.energy - prev->energy : s.energy);
            prev = &s;
        }
        out.csv.row({std::to_string(s.index), std::to_string(s.vib), label_name(s.label), num(s.mean_z),
                     num(s.energy), interval, num(s.z0_sensitivity), num(s.edge_mass), num(s.surface_mass)});
    }
    return out;
}

Table wavefunctions_csv(Pipeline& p) {
    const auto& sol = p.solution();
    const auto rep = sol.spectrum.reported();
    const Mesh& m = *sol.mesh;
    Table out{"wavefunctions", CsvWriter({"n", "energy_Er", "z_L", "psi"})};
    header(out.csv, p, "wavefunctions, psi normalised over z in lattice units");
    out.csv.comment("graded region thinned to every 16th node, uniform region to spacing >= 1/200");
    std::vector<std::size_t> keep;
    double last = -1;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const bool graded = m.z[i] < m.graded_end;
        if ((graded && i % 16 == 0) || (!graded && m.z[i] - last >= 1.0 / 200 - 1e-12) || i + 1 == m.size()) {
            keep.push_back(i);
            last = m.z[i];
        }
    }
    for (int n : p.config().wavefunction_states) {
        if (n < 1 || static_cast<std::size_t>(n) > rep.size())
            throw DomainError("wavefunctions: state n = " + std::to_string(n) + " is not among the " +
                              std::to_string(rep.size()) + " reported states");
        const auto& s = *rep[n - 1];
        for (auto i : keep) out.csv.row({std::to_string(n), num(s.energy), num(m.z[i]), num(s.psi[i])});
    }
    return out;
}

RamanConfig raman_config(const RunConfig& cfg) {
    RamanConfig rc;
    rc.k_eff = 4 * std::numbers::pi / (cfg.raman_wavelength_nm * 1e-9);
    rc.floor = cfg.intensity_floor;
    rc.include_bound = cfg.include_bound_lines;
    return rc;
}

Table raman_map_csv(Pipeline& p) {
    const auto lines = probability_map(p.solution().spectrum, raman_config(p.config()), p.units());
    Table out{"raman_map", CsvWriter({"n", "m", "probability"})};
    header(out.csv, p, "|<n|exp(i k_eff z)|m>|^2, k_eff = 4 pi / " + num(p.config().raman_wavelength_nm) + " nm");
    for (const auto& l : lines) out.csv.row({std::to_string(l.n), std::to_string(l.m), num(l.intensity)});
    return out;
}

Table spectrum_csv(Pipeline& p) {
    const auto lines = stick_spectrum(p.solution().spectrum, raman_config(p.config()), p.units());
    Table out{"spectrum", CsvWriter({"n", "m", "offset_Hz", "intensity"})};
    header(out.csv, p, "Raman stick spectrum");
    out.csv.comment("Bloch frequency " + num(p.units().tilt() * p.units().recoil_frequency()) + " Hz, floor " +
                    num(p.config().intensity_floor));
    for (const auto& l : lines)
        out.csv.row({std::to_string(l.n), std::to_string(l.m), num(l.offset_hz), num(l.intensity)});
    return out;
}

void scan_rows(CsvWriter& csv, const ScanResult& scan, double param_scale) {
    for (const auto& pt : scan.points) {
        const auto rep = pt.solution->spectrum.reported();
        for (std::size_t k = 0; k < rep.size(); ++k) {
            const bool near = k < pt.near_crossing.size() && pt.near_crossing[k];
            csv.row({num(pt.parameter * param_scale), label_name(rep[k]->label), num(rep[k]->energy),
                     std::to_string(pt.track[k]), std::to_string(rep[k]->index), num(rep[k]->mean_z),
                     num(rep[k]->z0_sensitivity), num(pt.overlap[k]), near ? "1" : "0"});
        }
    }
}

const std::vector<std::string> kScanColumns = {"parameter",       "state_label", "energy_Er", "track", "n", "mean_z_L",
                                               "z0_sensitivity_Er", "overlap",  "near_crossing"};

std::vector<Table> scan_z0_csv(Pipeline& p) {
    const auto& cfg = p.config();
    std::vector<double> z0;
    for (int i = 0; i < cfg.scan_z0_points; ++i)
        z0.push_back((cfg.scan_z0_min + (cfg.scan_z0_max - cfg.scan_z0_min) * i / (cfg.scan_z0_points - 1)) * 1e-10);
    const auto scan = scan_z0(p.model_spec(), z0, p.threads());
    std::vector<Table> out;
    out.push_back({"scan_z0", CsvWriter(kScanColumns)});
    header(out.back().csv, p, "z0 scan at fixed C3, parameter = z0 in angstrom");
    int warnings = 0;
    for (const auto& pt : scan.points) warnings += pt.tracking_warning;
    out.back().csv.comment("points with a tracking warning (overlap < 0.5): " + std::to_string(warnings));
    scan_rows(out.back().csv, scan, 1e10);
    out.push_back({"scan_z0_crossings", CsvWriter({"track_a", "track_b", "z0_A", "gap_Er"})});
    header(out.back().csv, p, "local gap minima below 0.05 E_r between energy-adjacent tracks");
    for (const auto& c : scan.crossings)
        out.back().csv.row({std::to_string(c.track_a), std::to_string(c.track_b), num(c.parameter * 1e10), num(c.gap)});
    return out;
}

std::vector<Table> scan_c3_csv(Pipeline& p) {
    const auto& cfg = p.config();
    const auto res = scan_c3(p.model_spec(), cfg.c3_factors, cfg.rescale_D, default_transitions(), p.threads());
    std::vector<Table> out;
    out.push_back({"scan_c3", CsvWriter(kScanColumns)});
    header(out.back().csv, p, std::string("C3 scan, parameter = C3 factor, rescale_D ") + (cfg.rescale_D ? "on" : "off"));
    scan_rows(out.back().csv, res.scan, 1.0);
    out.push_back({"scan_c3_transitions", CsvWriter({"factor", "n", "m", "nu_Hz", "delta_Hz"})});
    header(out.back().csv, p, "nu = (E_n - E_m)/h, delta relative to factor 1");
    for (const auto& t : res.transitions)
        for (std::size_t i = 0; i < res.factors.size(); ++i)
            out.back().csv.row({num(res.factors[i]), std::to_string(t.n), std::to_string(t.m), num(t.nu_hz[i]),
                                num(t.delta_hz[i])});
    // factors are sorted by validate(); the uncertainty needs one on each side of 1
    if (cfg.c3_factors.front() < 1 && cfg.c3_factors.back() > 1) {
        out.push_back({"c3_uncertainty", CsvWriter({"n", "m", "sensitivity_Hz", "relative_uncertainty"})});
        header(out.back().csv, p,
               "delta C3 / C3 = " + num(cfg.freq_uncertainty_mhz) + " mHz / |d nu / d ln C3|");
        for (const auto& u : infer_c3_uncertainty(res, cfg.freq_uncertainty_mhz * 1e-3))
            out.back().csv.row({std::to_string(u.n), std::to_string(u.m), num(u.sensitivity_hz), num(u.relative)});
    }
    return out;
}

Table perfect_surface_csv(Pipeline& p) {
    auto spec = p.model_spec();
    spec.variant = SurfaceVariant::perfect;
    spec.cp_table.reset();
    const auto sol = solve_model(spec);
    return eigen_csv(sol.spectrum, p, "perfect_surface", "perfect surface (hard wall at z = 0)");
}

} // namespace

std::vector<std::string> subcommands() {
    return {"cp-table", "potential", "eigen", "wavefunctions", "raman-map",
            "spectrum", "scan-z0",   "scan-c3", "perfect-surface"};
}

std::vector<Table> compute(const std::string& sub, Pipeline& p) {
    if (sub == "cp-table") return {cp_table_csv(p)};
    if (sub == "potential") return {potential_csv(p)};
    if (sub == "eigen") return {eigen_csv(p.solution().spectrum, p, "eigen", "eigenstates, ordered by <z>")};
    if (sub == "wavefunctions") return {wavefunctions_csv(p)};
    if (sub == "raman-map") return {raman_map_csv(p)};
    if (sub == "spectrum") return {spectrum_csv(p)};
    if (sub == "scan-z0") return scan_z0_csv(p);
    if (sub == "scan-c3") return scan_c3_csv(p);
    if (sub == "perfect-surface") return {perfect_surface_csv(p)};
    throw ConfigError("unknown subcommand '" + sub + "'");
}

// ---- output -------------------------------------------------------------------------

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json cell(const std::string& s) {
    if (s.empty()) return nullptr;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) {
        if (std::isfinite(v)) return v;
        return s;  // inf / nan stay strings
    }
    return s;
}

} // namespace

std::string table_json(const Table& t) {
    json j;
    j["name"] = t.name;
    j["columns"] = t.csv.columns();
    json rows = json::array();
    for (const auto& r : t.csv.rows()) {
        json row = json::array();
        for (const auto& c : r) row.push_back(cell(c));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

std::string RunManifest::to_json() const {
    json j;
    j["tool"] = "smwss";
    j["version"] = version;
    j["subcommand"] = subcommand;
    j["config_fingerprint"] = fingerprint;
    j["started"] = started;
    j["finished"] = finished;
    j["cp_table_cache_hit"] = cache_hit;
    json outs = json::array();
    for (const auto& o : outputs)
        outs.push_back({{"file", o.path.filename().string()}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    j["outputs"] = std::move(outs);
    return j.dump(2) + "\n";
}

RunManifest run(const std::string& subcommand, const RunConfig& config, const RunOptions& options) {
    RunManifest m;
    m.subcommand = subcommand;
    m.version = version();
    m.started = utc_now();
    Pipeline p(config, options.threads);
    m.fingerprint = p.fingerprint();
    const auto tables = compute(subcommand, p);
    m.cache_hit = p.cache_hit();
    fs::create_directories(config.output_dir);
    const auto emit = [&](const fs::path& path, const std::string& text) {
        atomic_write(path, text);
        m.outputs.push_back({path, sha256_hex(text), text.size()});
    };
    for (const auto& t : tables) {
        emit(config.output_dir / (t.name + ".csv"), t.csv.str());
        if (options.json) emit(config.output_dir / (t.name + ".json"), table_json(t));
    }
    m.finished = utc_now();
    atomic_write(config.output_dir / (subcommand + ".manifest.json"), m.to_json());
    return m;
}

} // namespace smwss
