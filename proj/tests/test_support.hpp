#pragma once

#include <filesystem>
#include <memory>

#include "smwss/config.hpp"
#include "smwss/pipeline.hpp"

namespace smwss::testing {

inline std::filesystem::path data_path() { return SMWSS_TEST_DATA; }

// Shipped inputs at the default config; the CP table is shared through the test cache.
inline RunConfig shipped_config() {
    RunConfig c = default_config();
    c.cache_dir = SMWSS_TEST_CACHE;
    return c;
}

inline Pipeline& shipped_pipeline() {
    static Pipeline p(shipped_config());
    return p;
}

inline ModelSpec default_spec(double density = 1500) {
    ModelSpec s = shipped_pipeline().model_spec();
    s.mesh.density = density;
    return s;
}

inline double ev_a03() {
    const PhysicalConstants pc;
    return pc.electronvolt * std::pow(pc.bohr_radius, 3);
}

} // namespace smwss::testing
