#include "smwss/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "smwss/errors.hpp"
#include "smwss/io.hpp"

#ifndef SMWSS_DATA_DIR
#define SMWSS_DATA_DIR "data"
#endif

namespace smwss {

namespace fs = std::filesystem;

fs::path data_dir() {
    if (const char* env = std::getenv("SMWSS_DATA_DIR"); env && *env) return env;
    return SMWSS_DATA_DIR;
}

RunConfig default_config() {
    RunConfig c;
    const auto d = data_dir();
    c.atom_file = d / "atoms" / "rb87_d1d2.atom";
    c.materials_dir = d / "materials";
    c.stack_file = d / "stacks" / "bragg532.stack";
    return c;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty list entry");
        out.push_back(item);
    }
    return out;
}

std::optional<double> to_optional(const std::string& s) {
    if (s == "none" || s.empty()) return std::nullopt;
    return to_double(s);
}

std::string surface_name(SurfaceVariant v) {
    switch (v) {
    case SurfaceVariant::lj_cp: return "lj+cp";
    case SurfaceVariant::perfect: return "perfect";
    case SurfaceVariant::none: return "none";
    }
    return "?";
}

SurfaceVariant to_surface(const std::string& s) {
    if (s == "lj+cp" || s == "lj_cp") return SurfaceVariant::lj_cp;
    if (s == "perfect") return SurfaceVariant::perfect;
    if (s == "none") return SurfaceVariant::none;
    throw std::invalid_argument("surface must be lj+cp, perfect or none, got '" + s + "'");
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }
std::string fmt(bool v) { return v ? "true" : "false"; }

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, double>)
            out += format_double(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

fs::path resolve(const std::string& s, const fs::path& base) {
    fs::path p(s);
    return p.is_absolute() || base.empty() ? p : base / p;
}

struct Field {
    const char* key;
    bool is_path;  // paths enter the fingerprint through file contents instead
    std::function<void(RunConfig&, const std::string&, const fs::path&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define NUM(name)                                                                                                   \
    Field{#name, false, [](RunConfig& c, const std::string& v, const fs::path&) { c.name = to_double(v); },       \
          [](const RunConfig& c) { return fmt(c.name); }}
#define INT(name)                                                                                                   \
    Field{#name, false, [](RunConfig& c, const std::string& v, const fs::path&) { c.name = to_int(v); },          \
          [](const RunConfig& c) { return std::to_string(c.name); }}
#define BOOL(name)                                                                                                  \
    Field{#name, false, [](RunConfig& c, const std::string& v, const fs::path&) { c.name = to_bool(v); },         \
          [](const RunConfig& c) { return fmt(c.name); }}
#define OPT(name)                                                                                                   \
    Field{#name, false, [](RunConfig& c, const std::string& v, const fs::path&) { c.name = to_optional(v); },     \
          [](const RunConfig& c) { return fmt(c.name); }}
#define PATH(name)                                                                                                  \
    Field{#name, true, [](RunConfig& c, const std::string& v, const fs::path& b) { c.name = resolve(v, b); },     \
          [](const RunConfig& c) { return c.name.generic_string(); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        NUM(lattice_wavelength_nm),
        NUM(g),
        PATH(atom_file),
        PATH(materials_dir),
        PATH(stack_file),
        Field{"mirror", false,
              [](RunConfig& c, const std::string& v, const fs::path&) {
                  if (v != "stack" && v != "ideal") throw std::invalid_argument("mirror must be stack or ideal");
                  c.mirror = v;
              },
              [](const RunConfig& c) { return c.mirror; }},
        NUM(temperature),
        NUM(table_z_min_nm),
        NUM(table_z_max_nm),
        INT(table_per_decade),
        NUM(matsubara_rel_tol),
        INT(k_quadrature_order),
        OPT(c3_override),
        Field{"surface", false,
              [](RunConfig& c, const std::string& v, const fs::path&) { c.surface = to_surface(v); },
              [](const RunConfig& c) { return surface_name(c.surface); }},
        NUM(U),
        NUM(z0),
        INT(repulsive_exponent),
        OPT(z_m_nm),
        NUM(z_m_scale),
        BOOL(gravity),
        BOOL(lattice),
        NUM(energy_lo),
        NUM(energy_hi),
        NUM(z_max),
        NUM(mesh_density),
        INT(points_per_period),
        NUM(edge_mass),
        Field{"wavefunction_states", false,
              [](RunConfig& c, const std::string& v, const fs::path&) {
                  c.wavefunction_states.clear();
                  for (const auto& s : split_list(v)) c.wavefunction_states.push_back(to_int(s));
              },
              [](const RunConfig& c) { return join(c.wavefunction_states); }},
        NUM(potential_step),
        NUM(potential_z_max),
        NUM(raman_wavelength_nm),
        NUM(intensity_floor),
        BOOL(include_bound_lines),
        NUM(scan_z0_min),
        NUM(scan_z0_max),
        INT(scan_z0_points),
        Field{"c3_factors", false,
              [](RunConfig& c, const std::string& v, const fs::path&) {
                  c.c3_factors.clear();
                  for (const auto& s : split_list(v)) c.c3_factors.push_back(to_double(s));
              },
              [](const RunConfig& c) { return join(c.c3_factors); }},
        BOOL(rescale_D),
        NUM(freq_uncertainty_mhz),
        PATH(output_dir),
        PATH(cache_dir),
    };
    return f;
}

#undef NUM
#undef INT
#undef BOOL
#undef OPT
#undef PATH

const Field* find_field(const std::string& key) {
    for (const auto& f : fields())
        if (key == f.key) return &f;
    return nullptr;
}

void assign(RunConfig& c, const std::string& key, const std::string& value, const fs::path& base,
            const std::string& where_key, const std::string& where_value) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError(where_key + ": unknown key '" + key + "'");
    try {
        f->set(c, value, base);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where_value + ": " + key + ": " + e.what());
    }
}

} // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
}

RunConfig parse_config_text(std::string_view text, const std::string& origin, const fs::path& base_dir,
                            RunConfig base) {
    RunConfig c = std::move(base);
    std::vector<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        if (trim(raw).empty()) continue;
        const auto at = [&](std::size_t col) { return origin + ":" + std::to_string(line) + ":" + std::to_string(col + 1); };
        const auto eq = raw.find('=');
        const auto key_col = raw.find_first_not_of(" \t");
        if (eq == std::string::npos) throw ConfigError(at(key_col) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(raw).substr(0, eq));
        if (key.empty()) throw ConfigError(at(key_col) + ": missing key");
        std::size_t val_col = raw.find_first_not_of(" \t", eq + 1);
        if (val_col == std::string::npos) val_col = eq + 1;
        const std::string value = trim(std::string_view(raw).substr(eq + 1));
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw ConfigError(at(key_col) + ": key '" + key + "' given twice");
        seen.push_back(key);
        assign(c, key, value, base_dir, at(key_col), at(val_col));
    }
    return c;
}

RunConfig parse_config(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    const auto text = read_file(path);
    auto c = parse_config_text(text, path.string(), fs::absolute(path).parent_path());
    c.validate();
    return c;
}

void apply_override(RunConfig& c, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    assign(c, key, value, fs::current_path(), "--set " + key, "--set " + key);
}

void RunConfig::validate() const {
    std::vector<std::string> bad;
    const auto need = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    need(lattice_wavelength_nm > 0, "lattice_wavelength_nm must be > 0");
    need(g > 0, "g must be > 0");
    need(temperature > 0 && temperature <= 1000, "temperature must be in (0, 1000] K");
    need(table_z_min_nm > 0 && table_z_max_nm > 10 * table_z_min_nm, "table range must satisfy 0 < z_min and z_max > 10 z_min");
    need(table_per_decade >= 10 && table_per_decade <= 1000, "table_per_decade must be in [10, 1000]");
    need(matsubara_rel_tol > 0 && matsubara_rel_tol <= 1e-2, "matsubara_rel_tol must be in (0, 1e-2]");
    need(k_quadrature_order >= 8 && k_quadrature_order <= 512, "k_quadrature_order must be in [8, 512]");
    need(!c3_override || *c3_override > 0, "c3_override must be > 0");
    need(U > 0 && U <= 20, "U must be in (0, 20] E_r");
    need(z0 >= 1 && z0 <= 20, "z0 must be in [1, 20] angstrom");
    need(repulsive_exponent >= 4 && repulsive_exponent <= 24, "repulsive_exponent must be in [4, 24]");
    need(!z_m_nm || *z_m_nm > 0, "z_m_nm must be > 0");
    need(z_m_scale > 0, "z_m_scale must be > 0");
    need(energy_hi > energy_lo, "energy_hi must exceed energy_lo");
    need(z_max >= 20 && z_max <= 500, "z_max must be in [20, 500] lattice units");
    need(mesh_density >= 12, "mesh_density must be >= 12");
    need(points_per_period >= 40, "points_per_period must be >= 40");
    need(edge_mass > 0 && edge_mass < 1, "edge_mass must be in (0, 1)");
    need(!wavefunction_states.empty() &&
             std::all_of(wavefunction_states.begin(), wavefunction_states.end(), [](int n) { return n >= 1; }),
         "wavefunction_states must list state numbers >= 1");
    need(potential_step > 0 && potential_z_max > potential_step, "potential_step and potential_z_max must be positive");
    need(raman_wavelength_nm > 0, "raman_wavelength_nm must be > 0");
    need(intensity_floor >= 0, "intensity_floor must be >= 0");
    need(scan_z0_min >= 1 && scan_z0_max <= 20 && scan_z0_max > scan_z0_min, "scan z0 range must lie in [1, 20] angstrom");
    need(scan_z0_points >= 2, "scan_z0_points must be >= 2");
    need(!c3_factors.empty() && std::all_of(c3_factors.begin(), c3_factors.end(), [](double f) { return f > 0; }),
         "c3_factors must be positive");
    need(std::is_sorted(c3_factors.begin(), c3_factors.end()) &&
             std::adjacent_find(c3_factors.begin(), c3_factors.end()) == c3_factors.end(),
         "c3_factors must be strictly increasing");
    need(std::any_of(c3_factors.begin(), c3_factors.end(), [](double f) { return f == 1.0; }),
         "c3_factors must contain 1");
    need(freq_uncertainty_mhz > 0, "freq_uncertainty_mhz must be > 0");
    need(fs::is_regular_file(atom_file), "atom_file not found: " + atom_file.string());
    if (mirror == "stack") {
        need(fs::is_regular_file(stack_file), "stack_file not found: " + stack_file.string());
        need(fs::is_directory(materials_dir), "materials_dir not found: " + materials_dir.string());
    }
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(*this) + "\n";
    return out;
}

std::string RunConfig::fingerprint() const {
    Fingerprint fp;
    fp.add("format", 1LL);
    for (const auto& f : fields()) {
        if (f.is_path) continue;
        fp.add(f.key, f.get(*this));
    }
    if (fs::is_regular_file(atom_file)) fp.add("atom_file", sha256_file(atom_file));
    if (mirror == "stack") {
        if (fs::is_regular_file(stack_file)) fp.add("stack_file", sha256_file(stack_file));
        if (fs::is_directory(materials_dir)) {
            std::vector<fs::path> mats;
            for (const auto& e : fs::directory_iterator(materials_dir))
                if (e.path().extension() == ".mat") mats.push_back(e.path());
            std::sort(mats.begin(), mats.end());
            for (const auto& m : mats) fp.add("material:" + m.filename().string(), sha256_file(m));
        }
    }
    return fp.hex();
}

} // namespace smwss
