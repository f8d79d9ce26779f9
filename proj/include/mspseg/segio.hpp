#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "mspseg/dataio.hpp"
#include "mspseg/inference.hpp"
#include "mspseg/vidgraph.hpp"

namespace mspseg {

struct SegmentationManifest {
    double tau = 0.0;
    int num_labels = 0;
    double energy = 0.0;
    int frames = 0;
};

// Paints every pixel with its superpixel's label.
std::vector<LabelGrid> paint_labels(std::span<const int> vertex_labels, const VideoGraph& g);

// Writes seg_%04d.lgm per frame plus manifest.json into `dir`.
SegmentationManifest write_segmentation(const InferenceResult& r, const VideoGraph& g, const fs::path& dir);

// Reads seg_%04d.lgm files from `dir`, keyed by frame.
std::map<int, LabelGrid> load_segmentation(const fs::path& dir);

SegmentationManifest read_manifest(const fs::path& file);

}  // namespace mspseg
