#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mspseg/hierarchy.hpp"
#include "mspseg/vidgraph.hpp"

namespace mspseg {

struct RunConfig {
    int bins_color = 50;
    int bins_flow = 50;
    std::vector<int> dictionaries = {100, 200, 400, 800, 1000};
    std::vector<double> taus = default_taus();
    int max_cycles = 10;
    std::uint64_t seed = 0;
    FlowHistogramMode flow_histogram_mode = FlowHistogramMode::component;
    bool warm_start = false;

    GraphOptions graph_options() const;
    SweepOptions sweep_options(int threads) const;
};

// Sets one key from its text value; throws InputError on unknown keys or bad values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// `key = value` lines; '#' starts a comment; blank lines are skipped.
RunConfig parse_config(std::istream& in, const std::string& name, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& file, RunConfig base = {});

// Checks counts >= 1 and taus strictly increasing within [0, 1.01].
void validate_config(const RunConfig& cfg);

}  // namespace mspseg
