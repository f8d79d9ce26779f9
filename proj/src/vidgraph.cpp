#include "mspseg/vidgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

int bin_of(double v, double lo, double hi, int bins) {
    const double t = (v - lo) / (hi - lo) * bins;
    const int b = static_cast<int>(std::floor(t));
    return std::clamp(b, 0, bins - 1);
}

void normalize(std::vector<double>& h, bool* empty) {
    double s = 0.0;
    for (double v : h) s += v;
    if (s > 0.0) {
        for (double& v : h) v /= s;
        if (empty) *empty = false;
    } else {
        std::fill(h.begin(), h.end(), 0.0);
        if (empty) *empty = true;
    }
}

}  // namespace

VertexSet build_vertices(const VideoDataset& ds, const GraphOptions& opts) {
    if (opts.bins_color < 1 || opts.bins_flow < 1) throw InputError("histogram bin counts must be >= 1");
    for (int k : opts.dictionary_sizes)
        if (k < 1) throw InputError("dictionary sizes must be >= 1");

    VertexSet vs;
    const int frames = ds.frames();
    const int w = ds.width(), h = ds.height();

    std::map<std::int32_t, int> label_index;
    for (const auto& g : ds.tslabels)
        for (auto v : g.values) label_index.emplace(v, 0);
    for (auto& [value, idx] : label_index) {
        idx = static_cast<int>(vs.label_values.size());
        vs.label_values.push_back(value);
    }
    const int L = vs.label_count();

    // Vertices: distinct superpixel ids per frame, ascending.
    vs.frame_offset.push_back(0);
    for (int f = 0; f < frames; ++f) {
        const LabelGrid& sp = ds.superpixels[f];
        std::map<std::int32_t, int> ids;
        for (auto v : sp.values) ++ids[v];
        std::unordered_map<std::int32_t, int> gid_of;
        for (auto [id, count] : ids) {
            const int gid = static_cast<int>(vs.vertices.size());
            vs.vertices.push_back({gid, f, id, count});
            gid_of.emplace(id, gid);
        }
        LabelGrid map(w, h);
        for (std::size_t p = 0; p < sp.values.size(); ++p) map.values[p] = gid_of.at(sp.values[p]);
        vs.vertex_map.push_back(std::move(map));
        vs.frame_offset.push_back(static_cast<int>(vs.vertices.size()));
    }
    const std::size_t n = vs.vertices.size();

    double flow_range = 0.0;
    for (const auto& fl : ds.flow)
        for (double v : fl.values) flow_range = std::max(flow_range, std::abs(v));
    if (flow_range == 0.0) flow_range = 1.0;

    const int flow_channels = opts.flow_mode == FlowHistogramMode::component ? 2 : 1;
    vs.features.resize(n);
    for (auto& ft : vs.features) {
        ft.ts_hist.assign(L, 0.0);
        for (auto& c : ft.color_hist) c.assign(opts.bins_color, 0.0);
        ft.flow_hist.assign(flow_channels, std::vector<double>(opts.bins_flow, 0.0));
    }

    static constexpr double kColorLo[3] = {0.0, -110.0, -110.0};
    static constexpr double kColorHi[3] = {100.0, 110.0, 110.0};
    for (int f = 0; f < frames; ++f) {
        const LabelGrid& map = vs.vertex_map[f];
        const LabelGrid& tsl = ds.tslabels[f];
        const FloatGrid& lab = ds.color[f];
        const FloatGrid& fl = ds.flow[f];
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                VertexFeatures& ft = vs.features[map.at(x, y)];
                ft.ts_hist[label_index.at(tsl.at(x, y))] += 1.0;
                for (int c = 0; c < 3; ++c)
                    ft.color_hist[c][bin_of(lab.at(c, x, y), kColorLo[c], kColorHi[c], opts.bins_color)] += 1.0;
                const double u = fl.at(0, x, y), v = fl.at(1, x, y);
                if (opts.flow_mode == FlowHistogramMode::component) {
                    ft.flow_hist[0][bin_of(u, -flow_range, flow_range, opts.bins_flow)] += 1.0;
                    ft.flow_hist[1][bin_of(v, -flow_range, flow_range, opts.bins_flow)] += 1.0;
                } else {
                    const double mag = std::hypot(u, v);
                    if (mag > 0.0)
                        ft.flow_hist[0][bin_of(std::atan2(v, u), -std::numbers::pi, std::numbers::pi,
                                               opts.bins_flow)] += mag;
                }
            }
    }
    for (auto& ft : vs.features) {
        normalize(ft.ts_hist, &ft.ts_empty);
        for (auto& c : ft.color_hist) normalize(c, nullptr);
        bool any_empty = false;
        for (auto& c : ft.flow_hist) {
            bool e = false;
            normalize(c, &e);
            any_empty = any_empty || e;
        }
        ft.flow_empty = any_empty;
    }

    // Trajectory membership.
    for (const auto& t : ds.trajectories) {
        for (const auto& p : t.points) {
            if (p.frame < 0 || p.frame >= frames)
                throw InputError("trajectory " + std::to_string(t.id) + " references nonexistent frame " +
                                 std::to_string(p.frame));
            const LabelGrid& map = vs.vertex_map[p.frame];
            if (!map.contains(p.x, p.y))
                throw InputError("trajectory " + std::to_string(t.id) + " point out of bounds");
            auto& ids = vs.features[map.at(p.x, p.y)].traj_ids;
            if (ids.empty() || ids.back() != t.id) ids.push_back(t.id);
        }
    }
    for (auto& ft : vs.features) {
        std::sort(ft.traj_ids.begin(), ft.traj_ids.end());
        ft.traj_ids.erase(std::unique(ft.traj_ids.begin(), ft.traj_ids.end()), ft.traj_ids.end());
    }

    // Texture words.
    const auto& desc = ds.descriptors;
    std::vector<int> owner(desc.entries.size());
    for (std::size_t e = 0; e < desc.entries.size(); ++e) {
        const auto& d = desc.entries[e];
        if (d.frame < 0 || d.frame >= frames)
            throw InputError("descriptor " + std::to_string(e) + " references nonexistent frame " +
                             std::to_string(d.frame));
        if (!vs.vertex_map[d.frame].contains(d.x, d.y))
            throw InputError("descriptor " + std::to_string(e) + " point out of bounds");
        owner[e] = vs.vertex_map[d.frame].at(d.x, d.y);
    }

    if (!opts.dictionaries.empty()) {
        for (const auto& dict : opts.dictionaries)
            if (dict.dim != desc.dim) throw InputError("supplied dictionary dim does not match descriptors");
        vs.dictionaries = opts.dictionaries;
    } else if (!desc.entries.empty() && desc.dim > 0) {
        std::vector<double> points;
        points.reserve(desc.entries.size() * desc.dim);
        for (const auto& d : desc.entries) points.insert(points.end(), d.values.begin(), d.values.end());
        for (std::size_t k = 0; k < opts.dictionary_sizes.size(); ++k) {
            int words = opts.dictionary_sizes[k];
            if (static_cast<std::size_t>(words) > desc.entries.size()) {
                vs.warnings.push_back("dictionary K=" + std::to_string(words) + " exceeds descriptor count " +
                                      std::to_string(desc.entries.size()) + "; clamped");
                words = static_cast<int>(desc.entries.size());
            }
            vs.dictionaries.push_back(kmeans(points, desc.dim, words, opts.seed + k).dictionary);
        }
    }

    for (auto& ft : vs.features) {
        ft.tex_hists.clear();
        for (const auto& dict : vs.dictionaries) ft.tex_hists.emplace_back(dict.words, 0.0);
        ft.tex_empty.assign(vs.dictionaries.size(), 1);
    }
    for (std::size_t e = 0; e < desc.entries.size(); ++e)
        for (std::size_t k = 0; k < vs.dictionaries.size(); ++k)
            vs.features[owner[e]].tex_hists[k][vs.dictionaries[k].assign(desc.entries[e].values)] += 1.0;
    for (auto& ft : vs.features)
        for (std::size_t k = 0; k < ft.tex_hists.size(); ++k) {
            bool e = false;
            normalize(ft.tex_hists[k], &e);
            ft.tex_empty[k] = e;
        }
    return vs;
}

std::vector<CandidatePair> build_spatial_pairs(const VideoDataset& ds, const VertexSet& vs) {
    std::vector<CandidatePair> out;
    for (int f = 0; f < vs.frames(); ++f) {
        const int base = vs.frame_offset[f];
        const int nf = vs.frame_offset[f + 1] - base;
        const LabelGrid& map = vs.vertex_map[f];
        const FloatGrid& contour = ds.contour[f];
        std::vector<double> sum(static_cast<std::size_t>(nf) * nf, 0.0);
        std::vector<int> count(static_cast<std::size_t>(nf) * nf, 0);
        auto visit = [&](int x0, int y0, int x1, int y1) {
            int a = map.at(x0, y0) - base, b = map.at(x1, y1) - base;
            if (a == b) return;
            if (a > b) std::swap(a, b);
            const std::size_t k = static_cast<std::size_t>(a) * nf + b;
            sum[k] += std::max(contour.at(0, x0, y0), contour.at(0, x1, y1));
            ++count[k];
        };
        for (int y = 0; y < map.height; ++y)
            for (int x = 0; x < map.width; ++x) {
                if (x + 1 < map.width) visit(x, y, x + 1, y);
                if (y + 1 < map.height) visit(x, y, x, y + 1);
            }
        for (int a = 0; a < nf; ++a)
            for (int b = a + 1; b < nf; ++b) {
                const std::size_t k = static_cast<std::size_t>(a) * nf + b;
                CandidatePair p{base + a, base + b, PairKind::spatial, count[k] > 0, 0.0};
                if (p.adjacent) p.boundary_strength = sum[k] / count[k];
                out.push_back(p);
            }
    }
    return out;
}

std::vector<CandidatePair> build_temporal_pairs(const VertexSet& vs) {
    std::map<int, std::vector<int>> members;  // trajectory -> vertices in frame order
    for (const auto& v : vs.vertices)
        for (int t : vs.features[v.gid].traj_ids) members[t].push_back(v.gid);

    std::vector<std::pair<int, int>> pairs;
    for (const auto& [_, verts] : members)
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b) {
                const int i = verts[a], j = verts[b];
                if (vs.vertices[i].frame == vs.vertices[j].frame) continue;
                pairs.emplace_back(std::min(i, j), std::max(i, j));
            }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    std::vector<CandidatePair> out;
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) out.push_back({i, j, PairKind::temporal, false, 0.0});
    return out;
}

VideoGraph build_graph(const VideoDataset& ds, const GraphOptions& opts) {
    VideoGraph g;
    static_cast<VertexSet&>(g) = build_vertices(ds, opts);
    g.width = ds.width();
    g.height = ds.height();
    g.spatial_pairs = build_spatial_pairs(ds, g);
    g.temporal_pairs = build_temporal_pairs(g);
    return g;
}

BoundaryGraph boundary_graph(const VideoGraph& g, int frame) {
    const int base = g.frame_offset[frame];
    BoundaryGraph bg;
    bg.vertex_count = g.frame_offset[frame + 1] - base;
    for (const auto& p : g.spatial_pairs) {
        if (g.vertices[p.i].frame != frame) continue;
        if (p.adjacent) bg.edges.push_back({p.i - base, p.j - base, p.boundary_strength});
    }
    return bg;
}

}  // namespace mspseg
