#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "smwss/casimir_polder.hpp"
#include "smwss/config.hpp"
#include "smwss/io.hpp"
#include "smwss/spectrum.hpp"

namespace smwss {

std::string version();

/// Loaded inputs for one configuration; the CP table is computed (or read from the cache) on first use.
class Pipeline {
public:
    explicit Pipeline(RunConfig config, int threads = 0);

    const RunConfig& config() const { return config_; }
    const std::string& fingerprint() const { return fingerprint_; }
    int threads() const { return threads_; }
    const LatticeUnits& units() const { return units_; }
    const CPConfig& cp_config() const { return cp_config_; }
    std::filesystem::path cache_dir() const;

    /// CP table over the configured range, scaled to c3_override when one is set.
    std::shared_ptr<const PotentialTable> cp_table();
    bool cache_hit() const { return cache_hit_; }

    ModelSpec model_spec();
    const Solution& solution();  // default model, solved once

private:
    RunConfig config_;
    int threads_ = 0;
    std::string fingerprint_;
    LatticeUnits units_;
    CPConfig cp_config_;
    std::shared_ptr<const PotentialTable> table_;
    bool cache_hit_ = false;
    std::unique_ptr<Solution> solution_;
};

struct Table {
    std::string name;  // file stem
    CsvWriter csv;
};

std::vector<std::string> subcommands();

/// Tables produced by one subcommand (no files written).
std::vector<Table> compute(const std::string& subcommand, Pipeline& pipeline);

struct OutputFile {
    std::filesystem::path path;
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunManifest {
    std::string subcommand;
    std::string fingerprint;
    std::string version;
    std::string started, finished;  // UTC, ISO 8601
    std::vector<OutputFile> outputs;
    bool cache_hit = false;

    std::string to_json() const;
};

struct RunOptions {
    bool json = false;  // also write a JSON mirror of every CSV
    int threads = 0;
};

/// Computes the subcommand and writes `<name>.csv` (+ `.json`) and `<subcommand>.manifest.json`
/// into config.output_dir, each atomically.
RunManifest run(const std::string& subcommand, const RunConfig& config, const RunOptions& options = {});

/// JSON mirror of a CSV table; numeric cells become numbers.
std::string table_json(const Table& table);

} // namespace smwss
