#include "mspseg/segio.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mspseg/errors.hpp"

namespace mspseg {

std::vector<LabelGrid> paint_labels(std::span<const int> vertex_labels, const VideoGraph& g) {
    if (vertex_labels.size() != g.vertices.size())
        throw InputError("labeling covers " + std::to_string(vertex_labels.size()) + " vertices, graph has " +
                         std::to_string(g.vertices.size()));
    std::vector<LabelGrid> out;
    out.reserve(g.vertex_map.size());
    for (const auto& map : g.vertex_map) {
        LabelGrid grid(map.width, map.height);
        for (std::size_t p = 0; p < map.values.size(); ++p) grid.values[p] = vertex_labels[map.values[p]];
        out.push_back(std::move(grid));
    }
    return out;
}

SegmentationManifest write_segmentation(const InferenceResult& r, const VideoGraph& g, const fs::path& dir) {
    const auto grids = paint_labels(r.dense, g);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
    for (std::size_t f = 0; f < grids.size(); ++f)
        save_lgm(dir / frame_file("seg", static_cast<int>(f), "lgm"), grids[f]);

    SegmentationManifest m{r.tau, r.num_labels, r.labeling.energy, static_cast<int>(grids.size())};
    nlohmann::json j;
    j["tau"] = m.tau;
    j["num_labels"] = m.num_labels;
    j["energy"] = m.energy;
    j["frames"] = m.frames;
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (dir / "manifest.json").string());
    out << j.dump(2) << '\n';
    return m;
}

std::map<int, LabelGrid> load_segmentation(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("segmentation directory does not exist: " + dir.string());
    std::map<int, LabelGrid> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        int f = -1;
        char tail = 0;
        if (std::sscanf(name.c_str(), "seg_%d.lgm%c", &f, &tail) != 1 || f < 0) continue;
        if (name != frame_file("seg", f, "lgm")) continue;
        out.emplace(f, load_lgm(e.path()));
    }
    if (out.empty()) throw InputError(dir.string() + ": no seg_%04d.lgm files");
    return out;
}

SegmentationManifest read_manifest(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file.string());
    nlohmann::json j;
    try {
        in >> j;
        return {j.at("tau").get<double>(), j.at("num_labels").get<int>(), j.at("energy").get<double>(),
                j.at("frames").get<int>()};
    } catch (const nlohmann::json::exception& e) {
        throw InputError(file.string() + ": " + e.what());
    }
}

}  // namespace mspseg
