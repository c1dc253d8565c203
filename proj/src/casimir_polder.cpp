#include "smwss/casimir_polder.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "smwss/errors.hpp"
#include "smwss/io.hpp"
#include "smwss/numerics.hpp"

namespace smwss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxMatsubara = 1'000'000;
constexpr double kTermCutoff = 1e-12;
constexpr char kTableMagic[] = "# smwss-cp-table v1";

void add_material(Fingerprint& fp, const std::string& prefix, const MaterialModel& m) {
    fp.add(prefix + ".name", std::string_view(m.name));
    fp.add(prefix + ".n", static_cast<int>(m.oscillators.size()));
    for (const auto& o : m.oscillators) {
        fp.add(prefix + ".S", o.strength);
        fp.add(prefix + ".w", o.resonance);
        fp.add(prefix + ".g", o.damping);
    }
}

} // namespace

void CPConfig::validate() const {
    if (!(temperature > 0)) throw ConfigError("CP temperature must be positive");
    if (!(matsubara_rel_tol > 0) || matsubara_rel_tol > 1e-4)
        throw ConfigError("matsubara_rel_tol must lie in (0, 1e-4]");
    if (k_quadrature_order < 20) throw ConfigError("k_quadrature_order must be >= 20");
    if (explicit_terms < 8) throw ConfigError("explicit_terms must be >= 8");
    atom.validate();
    if (const auto* s = std::get_if<LayerStack>(&mirror)) s->validate();
}

std::string CPConfig::fingerprint() const {
    Fingerprint fp;
    fp.add("T", temperature).add("tol", matsubara_rel_tol).add("order", k_quadrature_order);
    fp.add("explicit", explicit_terms);
    fp.add("hbar", constants.hbar).add("c", constants.c).add("kB", constants.k_B);
    fp.add("eps0", constants.epsilon_0);
    fp.add("atom", std::string_view(atom.name)).add("mass", atom.mass);
    for (const auto& l : atom.lines) fp.add("line.w", l.omega).add("line.d", l.dipole);
    if (std::holds_alternative<IdealMirror>(mirror)) {
        fp.add("mirror", "ideal");
    } else {
        const auto& s = std::get<LayerStack>(mirror);
        fp.add("layers", static_cast<int>(s.layers.size()));
        for (const auto& l : s.layers) {
            add_material(fp, "layer", l.material);
            fp.add("layer.d", l.thickness);
        }
        add_material(fp, "substrate", s.substrate);
    }
    return fp.hex();
}

double matsubara_frequency(double temperature, int n, const PhysicalConstants& pc) {
    if (n < 0) throw DomainError("matsubara_frequency: n must be >= 0");
    if (!(temperature > 0)) throw DomainError("matsubara_frequency: temperature must be positive");
    return 2 * kPi * n * pc.k_B * temperature / pc.hbar;
}

double cp_k_integral(double z, double xi, const Mirror& mirror, int order, const PhysicalConstants& pc) {
    if (!(z > 0)) throw DomainError("cp_k_integral: z must be positive");
    if (!(xi >= 0)) throw DomainError("cp_k_integral: xi must be >= 0");
    const double a = xi / pc.c;
    const double damping = std::exp(-2 * a * z);
    if (damping == 0.0) return 0.0;
    const MirrorResponse response(mirror, xi, pc);
    const auto& rule = gauss_laguerre(order);
    // kappa = a + u/(2z): int_a^inf dkappa e^{-2 kappa z} g(kappa) = e^{-2az}/(2z) int e^{-u} g du,
    // with k dk / kappa = dkappa and (xi/c)^2 (1 + 2 kappa^2 c^2/xi^2) = a^2 + 2 kappa^2.
    CompensatedSum sum;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double kappa = a + rule.nodes[j] / (2 * z);
        if (kappa == 0) continue;
        const auto rho = response.at_kappa(kappa);
        sum += rule.weights[j] * (a * a * rho.te - (a * a + 2 * kappa * kappa) * rho.tm);
    }
    return 2 * kPi * damping / (2 * z) * sum.value();
}

namespace {

// One Matsubara term without the k_B T factor, at continuous index x (xi = x xi_1).
double matsubara_term(double z, double x, const CPConfig& cfg) {
    const double xi = x * matsubara_frequency(cfg.temperature, 1, cfg.constants);
    const double alpha = polarizability_volume(cfg.atom, xi, cfg.constants);
    if (alpha == 0) return 0.0;
    // d^2k measure normalised as d^2k / (2 pi)^2.
    return alpha * cp_k_integral(z, xi, cfg.mirror, cfg.k_quadrature_order, cfg.constants) /
           (4 * kPi * kPi);
}

// int_X^inf f(x) dx through x = X/t on (0, 1].
double tail_integral(double z, double X, const CPConfig& cfg, int order) {
    const auto& rule = gauss_legendre_unit(order);
    CompensatedSum s;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double t = rule.nodes[j];
        s += rule.weights[j] * matsubara_term(z, X / t, cfg) * X / (t * t);
    }
    return s.value();
}

} // namespace

CPEvaluation cp_potential_detailed(double z, const CPConfig& cfg) {
    if (!(z > 0)) throw DomainError("cp_potential: z must be positive");
    const double kT = cfg.constants.k_B * cfg.temperature;
    CompensatedSum sum;
    sum += 0.5 * matsubara_term(z, 0.0, cfg);
    int switch_at = cfg.explicit_terms;
    for (int n = 1; n <= kMaxMatsubara; ++n) {
        const double f = matsubara_term(z, n, cfg);
        sum += f;
        if (std::abs(f) <= kTermCutoff * std::abs(sum.value()))
            return {kT * sum.value(), n, 0.0, kT * std::abs(f)};
        if (n == switch_at) {
            // Sum_{m>n} f(m) = int_{n+1/2}^inf f + f'(n+1/2)/24 + ...
            const double next = matsubara_term(z, n + 1.0, cfg);
            const double correction = (next - f) / 24.0;
            const double hi = tail_integral(z, n + 0.5, cfg, 96);
            const double lo = tail_integral(z, n + 0.5, cfg, 48);
            const double tail = hi + correction;
            const double total = sum.value() + tail;
            const double err = std::abs(hi - lo) + 1e-2 * std::abs(correction);
            if (err <= cfg.matsubara_rel_tol * std::abs(total))
                return {kT * total, n, kT * tail, kT * err};
            switch_at *= 2;
        }
    }
    std::ostringstream os;
    os << "Matsubara sum not converged within " << kMaxMatsubara << " terms at z = " << z << " m";
    throw AccuracyError(os.str());
}

double cp_potential(double z, const CPConfig& config) { return cp_potential_detailed(z, config).value; }

// ---- tables -----------------------------------------------------------------------

void PotentialTable::validate() const {
    if (z.size() != V.size() || z.size() < 4) throw InputError("potential table needs >= 4 samples");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0)) throw InputError("potential table: z must be positive");
        if (i && !(z[i] > z[i - 1])) throw InputError("potential table: z must be strictly increasing");
        if (!(V[i] < 0)) throw InputError("potential table: V must be negative (attractive)");
    }
}

PotentialTable PotentialTable::scaled(double factor) const {
    if (!(factor > 0)) throw DomainError("PotentialTable::scaled: factor must be positive");
    PotentialTable t = *this;
    for (double& v : t.V) v *= factor;
    t.fingerprint = Fingerprint().add("base", std::string_view(fingerprint)).add("scale", factor).hex();
    return t;
}

std::vector<double> log_grid(double z_min, double z_max, int per_decade) {
    if (!(z_min > 0) || !(z_max > z_min) || per_decade < 1)
        throw DomainError("log_grid: need 0 < z_min < z_max and per_decade >= 1");
    const double decades = std::log10(z_max / z_min);
    const int n = static_cast<int>(std::ceil(decades * per_decade - 1e-9));
    std::vector<double> z(n + 1);
    const double step = decades / n;
    for (int i = 0; i <= n; ++i) z[i] = z_min * std::pow(10.0, i * step);
    z.back() = z_max;
    return z;
}

PotentialTable tabulate_cp(const CPConfig& config, double z_min, double z_max, int per_decade) {
    config.validate();
    PotentialTable t;
    t.z = log_grid(z_min, z_max, per_decade);
    t.V.assign(t.z.size(), 0.0);
    parallel_for(t.z.size(), config.threads, [&](std::size_t i) { t.V[i] = cp_potential(t.z[i], config); });
    t.temperature = config.temperature;
    t.fingerprint = Fingerprint()
                        .add("cp", std::string_view(config.fingerprint()))
                        .add("zmin", z_min)
                        .add("zmax", z_max)
                        .add("per_decade", per_decade)
                        .hex();
    t.validate();
    return t;
}

PotentialTable synthetic_table(double c3, double z_min, double z_max, int per_decade) {
    PotentialTable t;
    t.z = log_grid(z_min, z_max, per_decade);
    for (double z : t.z) t.V.push_back(-c3 / (z * z * z));
    t.fingerprint = Fingerprint().add("synthetic", c3).add("zmin", z_min).add("zmax", z_max).hex();
    return t;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double flatness_of(const std::vector<double>& w) {
    const auto [mn, mx] = std::minmax_element(w.begin(), w.end());
    return (*mx - *mn) / std::abs(median(w));
}

} // namespace

C3Fit extract_C3(const PotentialTable& table, double z_ceiling) {
    table.validate();
    const auto& z = table.z;
    if (z.front() * 10 > z_ceiling * (1 + 1e-9))
        throw ExtractionError("extract_C3: table must cover at least one decade below the ceiling");
    std::vector<double> z3v(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) z3v[i] = z[i] * z[i] * z[i] * table.V[i];
    C3Fit best;
    best.flatness = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double top = z[i] * 10 * (1 + 1e-9);
        if (top > z_ceiling * (1 + 1e-9)) break;
        std::size_t j = i;
        while (j + 1 < z.size() && z[j + 1] <= top) ++j;
        std::vector<double> w(z3v.begin() + i, z3v.begin() + j + 1);
        const double f = flatness_of(w);
        if (f < best.flatness) best = {-median(w), f, z[i], z[j]};
    }
    if (!(best.flatness <= 0.1))
        throw ExtractionError("extract_C3: no one-decade window is flat to 10%");
    return best;
}

double plateau_flatness(const PotentialTable& table, double z_lo, double z_hi) {
    std::vector<double> w;
    for (std::size_t i = 0; i < table.z.size(); ++i)
        if (table.z[i] >= z_lo * (1 - 1e-9) && table.z[i] <= z_hi * (1 + 1e-9))
            w.push_back(std::pow(table.z[i], 3) * table.V[i]);
    if (w.size() < 2) throw ExtractionError("plateau_flatness: fewer than two samples in range");
    return flatness_of(w);
}

// ---- interpolation ----------------------------------------------------------------

CPInterpolant::CPInterpolant(std::shared_ptr<const PotentialTable> table) : table_(std::move(table)) {
    table_->validate();
    const auto& z = table_->z;
    const std::size_t n = z.size();
    log_z0_ = std::log(z.front());
    log_step_ = (std::log(z.back()) - log_z0_) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double step = std::log(z[i]) - std::log(z[i - 1]);
        if (std::abs(step - log_step_) > 1e-6 * log_step_)
            throw InputError("CPInterpolant: table must be uniformly spaced in log z");
    }
    std::vector<double> logv(n);
    for (std::size_t i = 0; i < n; ++i) logv[i] = std::log(-table_->V[i]);
    spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        logv.data(), n, log_z0_, log_step_);
}

CPInterpolant::~CPInterpolant() = default;
CPInterpolant::CPInterpolant(CPInterpolant&&) noexcept = default;
CPInterpolant& CPInterpolant::operator=(CPInterpolant&&) noexcept = default;

double CPInterpolant::operator()(double z) const {
    const double lo = z_min() * (1 - 1e-12), hi = z_max() * (1 + 1e-12);
    if (!(z >= lo && z <= hi)) {
        std::ostringstream os;
        os << "CP table covers [" << z_min() << ", " << z_max() << "] m; requested z = " << z;
        throw ExtrapolationError(os.str());
    }
    const double t = std::clamp(std::log(z), log_z0_, log_z0_ + log_step_ * (table_->z.size() - 1));
    return -std::exp((*spline_)(t));
}

// ---- cache files ----------------------------------------------------------------

void save_table(const PotentialTable& table, const std::filesystem::path& path) {
    std::ostringstream os;
    os << kTableMagic << "\n";
    os << "# fingerprint " << table.fingerprint << "\n";
    os << "# temperature_K " << format_double(table.temperature) << "\n";
    os << "# columns z_m V_J\n";
    for (std::size_t i = 0; i < table.z.size(); ++i)
        os << format_double(table.z[i]) << "\t" << format_double(table.V[i]) << "\n";
    atomic_write(path, os.str());
}

PotentialTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CP table " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kTableMagic)
        throw InputError(path.string() + ": not a v1 CP table");
    PotentialTable t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream is(line.substr(1));
            std::string key;
            is >> key;
            if (key == "fingerprint") is >> t.fingerprint;
            if (key == "temperature_K") is >> t.temperature;
            continue;
        }
        std::istringstream is(line);
        double z = 0, v = 0;
        if (!(is >> z >> v)) throw InputError(path.string() + ": malformed row '" + line + "'");
        t.z.push_back(z);
        t.V.push_back(v);
    }
    t.validate();
    return t;
}

PotentialTable cached_table(const CPConfig& config, const std::filesystem::path& cache_dir, double z_min,
                            double z_max, int per_decade, bool* cache_hit) {
    const std::string key = Fingerprint()
                                .add("cp", std::string_view(config.fingerprint()))
                                .add("zmin", z_min)
                                .add("zmax", z_max)
                                .add("per_decade", per_decade)
                                .hex();
    const auto path = cache_dir / ("cp-" + key.substr(0, 24) + ".tsv");
    if (std::filesystem::exists(path)) {
        try {
            auto t = load_table(path);
            if (t.fingerprint == key) {
                if (cache_hit) *cache_hit = true;
                return t;
            }
        } catch (const Error&) {
            // stale or corrupt cache entry: recompute below
        }
    }
    if (cache_hit) *cache_hit = false;
    auto t = tabulate_cp(config, z_min, z_max, per_decade);
    save_table(t, path);
    return t;
}

} // namespace smwss
