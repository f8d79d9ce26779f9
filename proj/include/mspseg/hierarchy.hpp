#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mspseg/inference.hpp"

namespace mspseg {

struct SweepOptions {
    ExpansionOptions expansion;
    bool warm_start = false;  // start each level from the previous level's labeling
    int threads = 1;          // ignored when warm_start is set
};

struct HierarchyResult {
    std::vector<InferenceResult> levels;  // tau strictly increasing
};

// The default grid 0.30, 0.35, ..., 0.95, 1.01.
std::vector<double> default_taus();

// Inclusive "a:step:b" grid, rounded to 1e-9.
std::vector<double> parse_tau_range(const std::string& spec);

// One inference per tau over the same vertex set.
HierarchyResult sweep_tau(const PotentialSet& pot, const std::vector<double>& taus, const SweepOptions& opts = {});

// Directory name for one level, e.g. "tau_0.55".
std::string tau_dir_name(double tau);

// CSV: tau,num_labels,energy,edge_count
void write_hierarchy_csv(std::ostream& out, const HierarchyResult& h);

}  // namespace mspseg
