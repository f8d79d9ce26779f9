#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mspseg/dataio.hpp"

namespace mspseg {

using SynthParams = std::map<std::string, std::string>;

// Preset names accepted by synth_generate.
const std::vector<std::string>& synth_presets();

// Parameter keys with their defaults, as text.
SynthParams synth_default_params();

// Deterministic synthetic video with ground truth in `groundtruth`.
// Superpixels are grid cells clipped to object boundaries; contour is 1 on
// object boundaries; flow is each object's translation; trajectories follow
// object motion on a pixel lattice; temporal-smooth labels are the ground
// truth with label-split and patch-merge noise.
VideoDataset synth_generate(const std::string& preset, const SynthParams& params, std::uint64_t seed);

}  // namespace mspseg
