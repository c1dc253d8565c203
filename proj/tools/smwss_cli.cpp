#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "smwss/errors.hpp"
#include "smwss/numerics.hpp"
#include "smwss/pipeline.hpp"

namespace {

// 0 ok, 2 configuration or input, 3 numerical accuracy, 4 resources.
int exit_code(const smwss::Error& e) {
    const std::string k = e.kind();
    if (k == "accuracy" || k == "matching" || k == "extrapolation" || k == "extraction") return 3;
    if (k == "resource") return 4;
    return 2;
}

int report(const std::string& kind, const std::string& message, int code) {
    nlohmann::json j;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface-modified Wannier-Stark states of atoms in a vertical optical lattice"};
    app.set_version_flag("--version", smwss::version());
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "csv";
    std::vector<std::string> sets;
    int threads = 0;
    app.add_option("--config", config_path, "configuration file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides SMWSS_OUT_DIR and the config)");
    app.add_option("--set", sets, "override one configuration key, key=value")->allow_extra_args(false);
    app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "csv+json"}));
    app.fallthrough();

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"cp-table", "Casimir-Polder potential table and the extracted C3"},
        {"potential", "surface, gravity, lattice and total potential"},
        {"eigen", "eigenstates: <z>, energies, intervals and labels"},
        {"wavefunctions", "wavefunctions of selected states"},
        {"raman-map", "Raman transition probabilities between all reported states"},
        {"spectrum", "Raman stick spectrum"},
        {"scan-z0", "energies against the LJ equilibrium distance at fixed C3"},
        {"scan-c3", "transition frequencies against a scaled C3 and the inferred C3 uncertainty"},
        {"perfect-surface", "eigenstates with a hard wall instead of the surface potential"},
    };
    for (const auto& [name, help] : subs) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), 2);
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        smwss::RunConfig cfg = config_path.empty() ? smwss::default_config() : smwss::parse_config(config_path);
        for (const auto& s : sets) smwss::apply_override(cfg, s);
        if (const char* env = std::getenv("SMWSS_OUT_DIR"); env && *env) cfg.output_dir = env;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.validate();
        if (threads > 0) smwss::set_default_threads(threads);
        smwss::RunOptions opt;
        opt.json = format == "csv+json";
        opt.threads = threads;
        const auto manifest = smwss::run(sub, cfg, opt);
        std::cout << manifest.to_json();
        return 0;
    } catch (const smwss::Error& e) {
        return report(e.kind(), e.what(), exit_code(e));
    } catch (const std::filesystem::filesystem_error& e) {
        return report("resource", e.what(), 4);
    } catch (const std::bad_alloc&) {
        return report("resource", "out of memory", 4);
    } catch (const std::exception& e) {
        return report("internal", e.what(), 1);
    }
}
