#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mspseg/vidgraph.hpp"

namespace mspseg {

// Per-vertex unary cost vectors, row-major |V| x L.
struct NodeCosts {
    int vertex_count = 0;
    int label_count = 0;
    std::vector<double> cost;

    double operator()(int v, int l) const { return cost[static_cast<std::size_t>(v) * label_count + l]; }
    double& operator()(int v, int l) { return cost[static_cast<std::size_t>(v) * label_count + l]; }
    std::span<const double> row(int v) const {
        return {cost.data() + static_cast<std::size_t>(v) * label_count, static_cast<std::size_t>(label_count)};
    }
};

struct CueGammas {
    double boundary = 1.0;  // mean minimax boundary path weight
    double color = 1.0;     // mean color EMD over spatial and temporal pairs
    double flow = 1.0;      // mean flow EMD
    double texture = 1.0;   // mean chi-squared over dictionaries
};

// Raw cue distances of one candidate pair. NaN marks a missing value
// (empty histogram); +inf boundary distance marks disconnected vertices.
struct PairDistances {
    double boundary = 0.0;
    double color = 0.0;
    double flow = 0.0;
    double texture = 0.0;
    double overlap = 0.0;  // trajectory Jaccard, temporal pairs only
};

// A weighted candidate pair with its per-cue breakdown.
struct PairWeight {
    int i = 0;
    int j = 0;
    PairKind kind = PairKind::spatial;
    double psi_b = 0.0;
    double psi_c = 0.0;
    double psi_o = 0.0;
    double psi_x = 0.0;
    double psi_r = 0.0;
    double weight = 0.0;
};

struct PottsEdge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
    PairKind kind = PairKind::spatial;
};

struct PotentialSet {
    NodeCosts node;
    std::vector<PairWeight> spatial;
    std::vector<PairWeight> temporal;
    CueGammas gammas;
    std::vector<std::string> warnings;
};

// phi_i(l) = -ts_hist_i(l); an empty histogram becomes uniform -1/L.
NodeCosts node_costs(const VideoGraph& g, std::vector<std::string>* warnings = nullptr);

// Minimax boundary distances for every spatial candidate pair, in order.
std::vector<double> boundary_distances(const VideoGraph& g);

// Cue distances for the spatial and temporal candidate pairs.
std::vector<PairDistances> spatial_distances(const VideoGraph& g);
std::vector<PairDistances> temporal_distances(const VideoGraph& g);

// Means of each cue's finite, present distances.
CueGammas compute_gammas(const std::vector<PairDistances>& spatial, const std::vector<PairDistances>& temporal,
                         std::vector<std::string>* warnings = nullptr);
CueGammas compute_gammas(const VideoGraph& g, std::vector<std::string>* warnings = nullptr);

std::vector<PairWeight> spatial_weights(const VideoGraph& g, const std::vector<PairDistances>& d,
                                        const CueGammas& gammas);
std::vector<PairWeight> temporal_weights(const VideoGraph& g, const std::vector<PairDistances>& d,
                                         const CueGammas& gammas);

PotentialSet compute_potentials(const VideoGraph& g);

// Keeps exactly the pairs with weight >= tau. Any tau > 1 yields no edges.
std::vector<PottsEdge> threshold_edges(const PotentialSet& pot, double tau);

// CSV: i,j,kind,psi_b,psi_c,psi_o,psi_x,psi_r,weight
void write_pair_csv(std::ostream& out, const PotentialSet& pot);

}  // namespace mspseg
