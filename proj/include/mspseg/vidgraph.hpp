#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mspseg/dataio.hpp"
#include "mspseg/kernels.hpp"

namespace mspseg {

enum class FlowHistogramMode { component, direction };

struct GraphOptions {
    int bins_color = 50;
    int bins_flow = 50;
    std::vector<int> dictionary_sizes = {100, 200, 400, 800, 1000};
    FlowHistogramMode flow_mode = FlowHistogramMode::component;
    std::uint64_t seed = 0;
    // When non-empty these replace the k-means dictionaries.
    std::vector<Dictionary> dictionaries;
};

struct Vertex {
    int gid = 0;
    int frame = 0;
    int local_id = 0;     // superpixel id within its frame
    int pixel_count = 0;
};

// All histograms are normalized, or all-zero with the matching empty flag set.
struct VertexFeatures {
    std::vector<double> ts_hist;
    bool ts_empty = false;
    std::array<std::vector<double>, 3> color_hist;
    std::vector<std::vector<double>> flow_hist;  // 2 channels (component) or 1 (direction)
    bool flow_empty = false;
    std::vector<std::vector<double>> tex_hists;  // one per dictionary
    std::vector<char> tex_empty;
    std::vector<int> traj_ids;                   // sorted, unique
};

enum class PairKind { spatial, temporal };

struct CandidatePair {
    int i = 0;  // i < j
    int j = 0;
    PairKind kind = PairKind::spatial;
    bool adjacent = false;
    double boundary_strength = 0.0;  // adjacent spatial pairs only
};

struct VertexSet {
    std::vector<Vertex> vertices;
    std::vector<VertexFeatures> features;
    std::vector<LabelGrid> vertex_map;     // per frame: gid of every pixel
    std::vector<int> frame_offset;         // first gid of each frame, plus a final sentinel
    std::vector<std::int32_t> label_values;  // dense label index -> temporal-smooth label value
    std::vector<Dictionary> dictionaries;
    std::vector<std::string> warnings;

    int frames() const { return static_cast<int>(vertex_map.size()); }
    int label_count() const { return static_cast<int>(label_values.size()); }
};

struct VideoGraph : VertexSet {
    int width = 0;
    int height = 0;
    std::vector<CandidatePair> spatial_pairs;
    std::vector<CandidatePair> temporal_pairs;
};

// One vertex per distinct (frame, superpixel id), with every cue histogram.
VertexSet build_vertices(const VideoDataset& ds, const GraphOptions& opts = {});

// Every unordered same-frame pair; adjacency and mean shared contour strength
// from 4-connected boundary pixel pairs.
std::vector<CandidatePair> build_spatial_pairs(const VideoDataset& ds, const VertexSet& vs);

// Cross-frame pairs that share at least one trajectory.
std::vector<CandidatePair> build_temporal_pairs(const VertexSet& vs);

VideoGraph build_graph(const VideoDataset& ds, const GraphOptions& opts = {});

// Adjacent spatial pairs of one frame, in frame-local vertex indices.
BoundaryGraph boundary_graph(const VideoGraph& g, int frame);

}  // namespace mspseg
