#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "mspseg/dataio.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Fresh, empty directory under the system temp dir.
inline fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mspseg_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Every regular file under `dir` keyed by relative path, with its bytes.
inline std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
    return out;
}

inline std::vector<double> random_histogram(std::mt19937_64& rng, int bins, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> h(bins);
    double s = 0.0;
    for (auto& v : h) {
        v = u(rng) < zero_prob ? 0.0 : u(rng);
        s += v;
    }
    if (s == 0.0) {
        h[0] = 1.0;
        return h;
    }
    for (auto& v : h) v /= s;
    return h;
}

// Two frames of 4x3: superpixels split left/right, one trajectory crossing both.
inline mspseg::VideoDataset tiny_dataset() {
    using namespace mspseg;
    VideoDataset ds;
    for (int f = 0; f < 2; ++f) {
        LabelGrid sp(4, 3), ts(4, 3);
        FloatGrid contour(4, 3, 1, 0.1), flow(4, 3, 2, 0.0), lab(4, 3, 3, 0.0);
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 4; ++x) {
                sp.at(x, y) = x < 2 ? 0 : 1;
                ts.at(x, y) = x < 2 ? 0 : 1;
                if (x == 1 || x == 2) contour.at(0, x, y) = 0.8;
                lab.at(0, x, y) = x < 2 ? 30.0 : 70.0;
                flow.at(0, x, y) = x < 2 ? 1.0 : -1.0;
            }
        ds.superpixels.push_back(sp);
        ds.tslabels.push_back(ts);
        ds.contour.push_back(contour);
        ds.flow.push_back(flow);
        ds.color.push_back(lab);
    }
    ds.trajectories = {{0, {{0, 0, 0}, {1, 1, 0}}}, {1, {{0, 3, 2}, {1, 2, 2}}}};
    ds.descriptors.dim = 2;
    for (int f = 0; f < 2; ++f)
        for (int x = 0; x < 4; ++x) ds.descriptors.entries.push_back({f, x, 1, {x < 2 ? 0.0 : 1.0, 0.5}});
    Annotation a;
    a.annotator = 0;
    for (int f = 0; f < 2; ++f) a.frames.emplace(f, ds.tslabels[f]);
    ds.groundtruth.push_back(a);
    return ds;
}

// Dataset with the given superpixel and label grids; other cues are flat.
inline mspseg::VideoDataset flat_dataset(const std::vector<mspseg::LabelGrid>& sp,
                                         const std::vector<mspseg::LabelGrid>& ts,
                                         std::vector<mspseg::Trajectory> trajectories = {}) {
    using namespace mspseg;
    VideoDataset ds;
    ds.superpixels = sp;
    ds.tslabels = ts;
    for (const auto& g : sp) {
        ds.contour.emplace_back(g.width, g.height, 1, 0.1);
        ds.flow.emplace_back(g.width, g.height, 2, 0.0);
        ds.color.emplace_back(g.width, g.height, 3, 50.0);
    }
    ds.trajectories = std::move(trajectories);
    ds.descriptors.dim = 1;
    for (int f = 0; f < static_cast<int>(sp.size()); ++f) ds.descriptors.entries.push_back({f, 0, 0, {1.0}});
    return ds;
}

inline mspseg::LabelGrid grid(int w, int h, std::vector<std::int32_t> values) {
    mspseg::LabelGrid g(w, h);
    g.values = std::move(values);
    return g;
}

}  // namespace testutil
