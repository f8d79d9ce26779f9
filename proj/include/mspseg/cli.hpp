#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mspseg/bench.hpp"

namespace mspseg {

struct SegmentArgs {
    std::filesystem::path input;
    std::filesystem::path config;  // empty: defaults
    std::optional<double> tau;     // empty: first tau of the config
    std::filesystem::path out;
    std::filesystem::path pairs_csv;  // optional dumps
    std::filesystem::path move_log;
    int threads = 1;
};

struct SweepArgs {
    std::filesystem::path input;
    std::filesystem::path config;
    std::string taus;  // "a:step:b"; empty: config taus
    std::filesystem::path out;
    int threads = 1;
};

struct EvalArgs {
    std::vector<std::filesystem::path> pred;  // paired with gt, one per video
    std::vector<std::filesystem::path> gt;
    std::string metric = "both";
    std::filesystem::path out;  // summary.json; eval_report.csv goes next to it
    int threads = 1;
};

struct SynthArgs {
    std::string preset;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    std::vector<std::string> params;  // key=value
};

// Each command throws InputError / InvariantError; progress goes to `log`.
void cmd_segment(const SegmentArgs& a, std::ostream& log);
void cmd_sweep(const SweepArgs& a, std::ostream& log);
void cmd_eval(const EvalArgs& a, std::ostream& log);
void cmd_synth(const SynthArgs& a, std::ostream& log);

// Parses argv and dispatches; returns the process exit code
// (0 success, 1 input error, 2 invariant violation).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// --threads value, else MSP_SEG_THREADS, else hardware parallelism.
int resolve_threads(int flag);

}  // namespace mspseg
