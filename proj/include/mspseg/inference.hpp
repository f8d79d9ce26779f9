#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mspseg/potentials.hpp"

namespace mspseg {

struct Labeling {
    std::vector<int> labels;  // one per vertex, in [0, L)
    double energy = 0.0;
};

struct EnergyBreakdown {
    double unary_total = 0.0;
    double pairwise_total = 0.0;
    std::vector<char> violated;  // per edge: labels differ

    double total() const { return unary_total + pairwise_total; }
};

// Potts energy: sum_i phi_i(y_i) + sum_edges w_ij [y_i != y_j].
double energy(std::span<const int> labels, const NodeCosts& phi, std::span<const PottsEdge> edges);
EnergyBreakdown energy_breakdown(std::span<const int> labels, const NodeCosts& phi,
                                 std::span<const PottsEdge> edges);

// Exhaustive minimum; ties go to the lexicographically smallest labeling.
// Requires L^|V| <= 1e7.
Labeling brute_force(const NodeCosts& phi, std::span<const PottsEdge> edges);

// Iterated conditional modes in gid order until a sweep changes nothing.
// `trace`, if given, receives the energy after every accepted move.
Labeling icm(const NodeCosts& phi, std::span<const PottsEdge> edges, const Labeling& init,
             std::vector<double>* trace = nullptr);

struct MoveRecord {
    int cycle = 0;
    int alpha = 0;
    double energy_before = 0.0;
    double energy_after = 0.0;  // equals energy_before when rejected
    double cut_energy = 0.0;    // min-cut value plus the move's constant
    bool accepted = false;
};

struct ExpansionOptions {
    int max_cycles = 10;
};

// Alpha-expansion: cycles alpha = 0..L-1, each move an exact binary min-cut;
// only strictly improving moves are accepted.
Labeling alpha_expansion(const NodeCosts& phi, std::span<const PottsEdge> edges, const Labeling& init,
                         const ExpansionOptions& opts = {}, std::vector<MoveRecord>* log = nullptr);

// Per-vertex argmin of phi (lowest label on ties).
// energy is the unary part only (no edges)
Labeling unary_argmin(const NodeCosts& phi);

// Renumbers labels 0,1,2,... in order of first occurrence by vertex.
std::vector<int> dense_relabel(std::span<const int> labels);

struct InferenceResult {
    double tau = 0.0;
    Labeling labeling;        // in the temporal-smooth label space
    std::vector<int> dense;   // relabeled output
    int num_labels = 0;
    std::size_t edge_count = 0;
    double initial_energy = 0.0;
    std::vector<MoveRecord> moves;
};

InferenceResult infer(const PotentialSet& pot, double tau, const ExpansionOptions& opts = {},
                      const Labeling* init = nullptr);

// CSV: cycle,alpha,energy_before,energy_after
void write_move_log(std::ostream& out, std::span<const MoveRecord> moves);

}  // namespace mspseg
