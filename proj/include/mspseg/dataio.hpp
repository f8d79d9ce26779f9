#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mspseg {

namespace fs = std::filesystem;

// Row-major integer label per pixel.
struct LabelGrid {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> values;

    LabelGrid() = default;
    LabelGrid(int w, int h, std::int32_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return values.size(); }
    std::int32_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::int32_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    bool operator==(const LabelGrid&) const = default;
};

// Channel-major, then row-major reals.
struct FloatGrid {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> values;

    FloatGrid() = default;
    FloatGrid(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          values(static_cast<std::size_t>(w) * h * c, fill) {}

    std::size_t plane() const { return static_cast<std::size_t>(width) * height; }
    double at(int c, int x, int y) const {
        return values[c * plane() + static_cast<std::size_t>(y) * width + x];
    }
    double& at(int c, int x, int y) {
        return values[c * plane() + static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const FloatGrid&) const = default;
};

struct TrajectoryPoint {
    int frame = 0;
    int x = 0;
    int y = 0;
    bool operator==(const TrajectoryPoint&) const = default;
};

struct Trajectory {
    int id = 0;
    std::vector<TrajectoryPoint> points;  // frames strictly increasing
    bool operator==(const Trajectory&) const = default;
};

struct Descriptor {
    int frame = 0;
    int x = 0;
    int y = 0;
    std::vector<double> values;
    bool operator==(const Descriptor&) const = default;
};

struct DescriptorSet {
    int dim = 0;
    std::vector<Descriptor> entries;
    bool operator==(const DescriptorSet&) const = default;
};

// One annotator's labelings, keyed by frame index. Frames may be sparse.
struct Annotation {
    int annotator = 0;
    std::map<int, LabelGrid> frames;
    bool operator==(const Annotation&) const = default;
};

struct VideoDataset {
    std::vector<LabelGrid> superpixels;
    std::vector<LabelGrid> tslabels;   // one global label space across frames
    std::vector<FloatGrid> contour;    // 1 channel, values in [0,1]
    std::vector<FloatGrid> flow;       // 2 channels (u, v)
    std::vector<FloatGrid> color;      // 3 channels, CIELab
    std::vector<Trajectory> trajectories;
    DescriptorSet descriptors;
    std::vector<Annotation> groundtruth;

    int frames() const { return static_cast<int>(superpixels.size()); }
    int width() const { return superpixels.empty() ? 0 : superpixels.front().width; }
    int height() const { return superpixels.empty() ? 0 : superpixels.front().height; }

    bool operator==(const VideoDataset&) const = default;
};

// Formats a real with 9 significant digits, the canonical text form.
std::string format_real(double v);

// Single-file readers. `name` is used in error messages only.
LabelGrid read_lgm(std::istream& in, const std::string& name);
FloatGrid read_fgm(std::istream& in, const std::string& name);
struct TrajectoryBounds {
    int frames = 0;
    int width = 0;
    int height = 0;
};
std::vector<Trajectory> read_trj(std::istream& in, const std::string& name,
                                 std::optional<TrajectoryBounds> bounds = std::nullopt);
DescriptorSet read_dsc(std::istream& in, const std::string& name);

void write_lgm(std::ostream& out, const LabelGrid& g);
void write_fgm(std::ostream& out, const FloatGrid& g);
void write_trj(std::ostream& out, const std::vector<Trajectory>& trajectories);
void write_dsc(std::ostream& out, const DescriptorSet& d);

LabelGrid load_lgm(const fs::path& p);
FloatGrid load_fgm(const fs::path& p);
void save_lgm(const fs::path& p, const LabelGrid& g);
void save_fgm(const fs::path& p, const FloatGrid& g);

// Per-video directory layout file names.
std::string frame_file(const std::string& prefix, int frame, const std::string& ext);
std::string gt_file(int annotator, int frame);

// Loads and fully validates a video directory. Throws FormatError or
// InputError naming the offending file.
VideoDataset load_dataset(const fs::path& dir);

// Loads only the gt/ annotations found under `dir` (or `dir/gt`).
std::vector<Annotation> load_groundtruth(const fs::path& dir);

// Writes every file of the layout; creates `dir` if needed.
void save_dataset(const VideoDataset& ds, const fs::path& dir);

// Checks every VideoDataset invariant; throws InputError on violation.
void validate_dataset(const VideoDataset& ds);

}  // namespace mspseg
