#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "smwss/config.hpp"
#include "smwss/errors.hpp"
#include "smwss/pipeline.hpp"
#include "smwss/spectrum.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace smwss;

namespace {

double ev_a03() {
    const PhysicalConstants pc;
    return pc.electronvolt * std::pow(pc.bohr_radius, 3);
}

RunConfig make_config(const std::optional<std::filesystem::path>& path, const std::map<std::string, std::string>& set) {
    RunConfig c = path ? parse_config(*path) : default_config();
    for (const auto& [k, v] : set) apply_override(c, k + "=" + v);
    c.validate();
    return c;
}

py::dict state_dict(const EigenState& s) {
    return py::dict("n"_a = s.index, "v"_a = s.vib, "label"_a = label_name(s.label), "mean_z"_a = s.mean_z,
                    "energy"_a = s.energy, "z0_sensitivity"_a = s.z0_sensitivity, "edge_mass"_a = s.edge_mass,
                    "surface_mass"_a = s.surface_mass);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wannier-Stark states near a surface: Casimir-Polder tables, eigenstates, Raman spectra";

    // translators run newest first, so the base class goes in first
    auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<InputError>(m, "InputError", base.ptr());

    m.def("version", &version);
    m.def("recoil_energy", [](double lambda, double mass) { return recoil_energy(lambda, mass); },
          "lambda_l"_a = 532e-9, "mass"_a = kRb87MassKg);
    m.def("bloch_frequency", [](double lambda, double mass, double g) { return bloch_frequency(lambda, mass, g); },
          "lambda_l"_a = 532e-9, "mass"_a = kRb87MassKg, "g"_a = 9.81);
    m.def("lj_depth_from_z0", [](double z0_angstrom, double c3_au) {
        return lj_depth_from_z0(z0_angstrom * 1e-10, c3_au * ev_a03()) / PhysicalConstants{}.electronvolt;
    }, "z0_angstrom"_a, "c3_au"_a, "Well depth in eV for z0 in angstrom and C3 in a0^3 eV.");
    m.def("config_keys", &config_keys);

    py::class_<RunConfig>(m, "Config")
        .def(py::init([](std::optional<std::filesystem::path> path, std::map<std::string, std::string> set) {
                 return make_config(path, set);
             }),
             "path"_a = py::none(), "set"_a = std::map<std::string, std::string>{})
        .def("set", [](RunConfig& c, const std::string& key, const std::string& value) {
            apply_override(c, key + "=" + value);
        })
        .def("validate", &RunConfig::validate)
        .def("canonical", &RunConfig::canonical)
        .def("fingerprint", &RunConfig::fingerprint)
        .def_property("output_dir", [](const RunConfig& c) { return c.output_dir; },
                      [](RunConfig& c, const std::filesystem::path& p) { c.output_dir = p; })
        .def_property("cache_dir", [](const RunConfig& c) { return c.cache_dir; },
                      [](RunConfig& c, const std::filesystem::path& p) { c.cache_dir = p; });

    m.def("run", [](const std::string& sub, const RunConfig& c, bool json) {
        RunOptions o;
        o.json = json;
        py::gil_scoped_release nogil;
        return run(sub, c, o).to_json();
    }, "subcommand"_a, "config"_a, "json"_a = false, "Writes the subcommand outputs; returns the manifest as JSON text.");

    m.def("compute", [](const std::string& sub, const RunConfig& c) {
        std::vector<std::pair<std::string, std::string>> out;
        {
            py::gil_scoped_release nogil;
            Pipeline p(c);
            for (const auto& t : compute(sub, p)) out.emplace_back(t.name, table_json(t));
        }
        py::dict d;
        for (const auto& [name, text] : out) d[py::str(name)] = py::str(text);
        return d;
    }, "subcommand"_a, "config"_a, "Tables of one subcommand as JSON text, keyed by name; nothing is written.");

    m.def("cp_potential", [](const RunConfig& c, const std::vector<double>& z_m) {
        Pipeline p(c);
        std::vector<double> v(z_m.size());
        for (std::size_t i = 0; i < z_m.size(); ++i) v[i] = cp_potential(z_m[i], p.cp_config());
        return py::array_t<double>(v.size(), v.data());
    }, "config"_a, "z"_a, "Casimir-Polder energy in J at distances in m, evaluated directly.");

    m.def("extract_c3", [](const RunConfig& c) {
        Pipeline p(c);
        const auto fit = extract_C3(*p.cp_table());
        return py::dict("c3"_a = fit.c3 / ev_a03(), "flatness"_a = fit.flatness, "z_lo"_a = fit.z_lo,
                        "z_hi"_a = fit.z_hi);
    }, "config"_a, "C3 in a0^3 eV from the (cached) table.");

    m.def("solve", [](const RunConfig& c, bool wavefunctions) {
        std::unique_ptr<Pipeline> p;
        const Solution* s = nullptr;
        {
            py::gil_scoped_release nogil;
            p = std::make_unique<Pipeline>(c);
            s = &p->solution();
        }
        py::list states;
        for (const auto* st : s->spectrum.reported()) {
            auto d = state_dict(*st);
            if (wavefunctions) d["psi"] = py::array_t<double>(st->psi.size(), st->psi.data());
            states.append(d);
        }
        py::dict out("states"_a = states, "intervals"_a = s->spectrum.intervals());
        if (wavefunctions) out["z"] = py::array_t<double>(s->mesh->z.size(), s->mesh->z.data());
        return out;
    }, "config"_a, "wavefunctions"_a = false, "Reported eigenstates of the configured model.");
}
