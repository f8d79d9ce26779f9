#include "mspseg/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <unordered_map>

#include "mspseg/dataio.hpp"
#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

// Portable draws on top of mt19937_64 (whose output sequence is fixed by the
// standard, unlike the std:: distributions).
// Snap to what the writer emits so a saved dataset reloads identical.
double written(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

void snap(std::vector<FloatGrid>& grids) {
    for (auto& g : grids)
        for (auto& v : g.values) v = written(v);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(uniform() * n); }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

struct Object {
    // Top-left corner and size as fractions of the frame; motion in pixels per frame.
    double fx, fy, fw, fh;
    int dx, dy;
    double lab[3];
};

struct Preset {
    std::vector<Object> objects;
    double color_noise_scale = 1.0;
    double contour_noise_scale = 1.0;
};

Preset make_preset(const std::string& name) {
    constexpr double kRed[3] = {55.0, 60.0, 35.0};
    constexpr double kBlue[3] = {40.0, 15.0, -60.0};
    constexpr double kYellow[3] = {85.0, -5.0, 75.0};
    auto obj = [](double fx, double fy, double fw, double fh, int dx, int dy, const double* c) {
        return Object{fx, fy, fw, fh, dx, dy, {c[0], c[1], c[2]}};
    };
    Preset p;
    if (name == "two-rect-same-motion") {
        p.objects = {obj(0.125, 0.25, 0.25, 0.375, 1, 0, kRed), obj(0.55, 0.3, 0.25, 0.375, 1, 0, kBlue)};
    } else if (name == "two-rect-diff-motion") {
        p.objects = {obj(0.125, 0.25, 0.25, 0.375, 1, 0, kRed), obj(0.55, 0.15, 0.25, 0.375, -1, 1, kBlue)};
    } else if (name == "occlusion-appear") {
        // The second object starts fully right of the frame and slides in.
        p.objects = {obj(0.125, 0.25, 0.25, 0.375, 1, 0, kRed), obj(1.0, 0.3, 0.22, 0.4, -3, 0, kYellow)};
    } else if (name == "static-noise") {
        p.objects = {obj(0.125, 0.25, 0.25, 0.375, 0, 0, kRed), obj(0.55, 0.3, 0.25, 0.375, 0, 0, kBlue)};
        p.color_noise_scale = 2.5;
        p.contour_noise_scale = 2.0;
    } else {
        std::string list;
        for (const auto& n : synth_presets()) list += (list.empty() ? "" : ", ") + n;
        throw InputError("unknown preset '" + name + "' (available: " + list + ")");
    }
    return p;
}

struct Params {
    int width, height, frames, cell, traj_step, desc_step, desc_dim, split, annotators, patch_size;
    double color_noise, contour_low, contour_noise, patch_prob;
};

double parse_number(const SynthParams& raw, const std::string& key) {
    const std::string& s = raw.at(key);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw InputError("invalid value for synth parameter '" + key + "': '" + s + "'");
    return v;
}

Params parse_params(const SynthParams& given) {
    SynthParams raw = synth_default_params();
    for (const auto& [k, v] : given) {
        if (!raw.count(k)) throw InputError("unknown synth parameter '" + k + "'");
        raw[k] = v;
    }
    auto integer = [&](const std::string& key, int lo, int hi) {
        const double v = parse_number(raw, key);
        if (v != std::floor(v) || v < lo || v > hi)
            throw InputError("synth parameter '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        return static_cast<int>(v);
    };
    auto real = [&](const std::string& key, double lo, double hi) {
        const double v = parse_number(raw, key);
        if (v < lo || v > hi)
            throw InputError("synth parameter '" + key + "' must be in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        return v;
    };
    Params p{};
    p.width = integer("width", 16, 4096);
    p.height = integer("height", 16, 4096);
    p.frames = integer("frames", 1, 1000);
    p.cell = integer("cell", 2, 1024);
    p.traj_step = integer("traj_step", 1, 1024);
    p.desc_step = integer("desc_step", 1, 1024);
    p.desc_dim = integer("desc_dim", 1, 512);
    p.split = integer("split", 0, 16);
    p.annotators = integer("annotators", 1, 16);
    p.patch_size = integer("patch_size", 1, 1024);
    p.color_noise = real("color_noise", 0.0, 100.0);
    p.contour_low = real("contour_low", 0.0, 1.0);
    p.contour_noise = real("contour_noise", 0.0, 1.0);
    p.patch_prob = real("patch_prob", 0.0, 1.0);
    return p;
}

struct Box {
    int x0, y0, w, h;
    bool contains(int x, int y) const { return x >= x0 && y >= y0 && x < x0 + w && y < y0 + h; }
};

}  // namespace

const std::vector<std::string>& synth_presets() {
    static const std::vector<std::string> names = {"two-rect-same-motion", "two-rect-diff-motion",
                                                   "occlusion-appear", "static-noise"};
    return names;
}

SynthParams synth_default_params() {
    return {{"width", "48"},        {"height", "32"},        {"frames", "6"},          {"cell", "8"},
            {"traj_step", "4"},     {"desc_step", "4"},      {"desc_dim", "8"},        {"split", "1"},
            {"annotators", "1"},    {"patch_size", "5"},     {"color_noise", "2"},     {"contour_low", "0.1"},
            {"contour_noise", "0.05"}, {"patch_prob", "0.3"}};
}

VideoDataset synth_generate(const std::string& preset_name, const SynthParams& params, std::uint64_t seed) {
    const Preset preset = make_preset(preset_name);
    const Params p = parse_params(params);
    Rng rng(seed);
    const int W = p.width, H = p.height, F = p.frames;
    const int objects = static_cast<int>(preset.objects.size());

    auto box_at = [&](int k, int f) {
        const Object& o = preset.objects[k];
        return Box{static_cast<int>(std::lround(o.fx * W)) + o.dx * f, static_cast<int>(std::lround(o.fy * H)) + o.dy * f,
                   std::max(1, static_cast<int>(std::lround(o.fw * W))),
                   std::max(1, static_cast<int>(std::lround(o.fh * H)))};
    };
    auto motion = [&](int label) -> std::pair<int, int> {
        if (label == 0) return {0, 0};
        return {preset.objects[label - 1].dx, preset.objects[label - 1].dy};
    };

    // Ground truth: background 0, object k -> k+1, later objects on top.
    std::vector<LabelGrid> gt(F, LabelGrid(W, H, 0));
    for (int f = 0; f < F; ++f)
        for (int k = 0; k < objects; ++k) {
            const Box b = box_at(k, f);
            for (int y = std::max(0, b.y0); y < std::min(H, b.y0 + b.h); ++y)
                for (int x = std::max(0, b.x0); x < std::min(W, b.x0 + b.w); ++x) gt[f].at(x, y) = k + 1;
        }

    VideoDataset ds;
    const double bg_lab[3] = {70.0, 0.0, 0.0};
    const double color_sigma = p.color_noise * preset.color_noise_scale;
    const double contour_amp = p.contour_noise * preset.contour_noise_scale;
    for (int f = 0; f < F; ++f) {
        const LabelGrid& g = gt[f];

        // Superpixels: grid cells split by ground-truth label.
        LabelGrid sp(W, H);
        std::unordered_map<std::int64_t, int> ids;
        const int cells_x = (W + p.cell - 1) / p.cell;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const std::int64_t cell = (y / p.cell) * cells_x + x / p.cell;
                const std::int64_t key = cell * (objects + 1) + g.at(x, y);
                auto [it, _] = ids.try_emplace(key, static_cast<int>(ids.size()));
                sp.at(x, y) = it->second;
            }
        ds.superpixels.push_back(std::move(sp));

        FloatGrid contour(W, H, 1);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const auto v = g.at(x, y);
                const bool edge = (x > 0 && g.at(x - 1, y) != v) || (x + 1 < W && g.at(x + 1, y) != v) ||
                                  (y > 0 && g.at(x, y - 1) != v) || (y + 1 < H && g.at(x, y + 1) != v);
                const double noise = contour_amp * rng.uniform();
                contour.at(0, x, y) = edge ? 1.0 : std::clamp(p.contour_low + noise, 0.0, 1.0);
            }
        ds.contour.push_back(std::move(contour));

        FloatGrid flow(W, H, 2);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const auto [dx, dy] = motion(g.at(x, y));
                flow.at(0, x, y) = dx;
                flow.at(1, x, y) = dy;
            }
        ds.flow.push_back(std::move(flow));

        FloatGrid lab(W, H, 3);
        static constexpr double kLo[3] = {0.0, -110.0, -110.0};
        static constexpr double kHi[3] = {100.0, 110.0, 110.0};
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < W; ++x) {
                    const int l = g.at(x, y);
                    const double base = l == 0 ? bg_lab[c] : preset.objects[l - 1].lab[c];
                    lab.at(c, x, y) = std::clamp(base + color_sigma * rng.normal(), kLo[c], kHi[c]);
                }
        ds.color.push_back(std::move(lab));
    }

    // Temporal-smooth labels: ground truth, one label split per chosen
    // object from a random frame on, then square patches merged into a
    // different label.
    std::vector<int> split_from(objects + 1, F);
    std::vector<int> order(objects);
    for (int k = 0; k < objects; ++k) order[k] = k + 1;
    for (int k = objects - 1; k > 0; --k) std::swap(order[k], order[rng.below(k + 1)]);
    for (int s = 0; s < std::min(p.split, objects); ++s)
        split_from[order[s]] = F > 1 ? 1 + rng.below(F - 1) : F;
    for (int f = 0; f < F; ++f) {
        LabelGrid tsl = gt[f];
        for (auto& v : tsl.values)
            if (v > 0 && f >= split_from[v]) v += 10;
        if (rng.uniform() < p.patch_prob) {
            const int size = std::min({p.patch_size, W, H});
            const int x0 = rng.below(W - size + 1);
            const int y0 = rng.below(H - size + 1);
            const int centre = tsl.at(x0 + size / 2, y0 + size / 2);
            std::vector<int> others;
            for (int l = 0; l <= objects; ++l) {
                const int value = l > 0 && f >= split_from[l] ? l + 10 : l;
                if (value != centre) others.push_back(value);
            }
            const int target = others[rng.below(static_cast<int>(others.size()))];
            for (int y = y0; y < y0 + size; ++y)
                for (int x = x0; x < x0 + size; ++x) tsl.at(x, y) = target;
        }
        ds.tslabels.push_back(std::move(tsl));
    }

    // Trajectories: lattice-seeded, advanced with their object's motion,
    // ended on leaving the frame or being occluded, reseeded in empty cells.
    struct Live {
        int id, x, y, label;
    };
    std::vector<Live> live;
    int next_id = 0;
    const int step = p.traj_step;
    const int lx = (W + step - 1) / step, ly = (H + step - 1) / step;
    for (int f = 0; f < F; ++f) {
        if (f > 0) {
            std::vector<Live> kept;
            for (auto t : live) {
                const auto [dx, dy] = motion(t.label);
                t.x += dx;
                t.y += dy;
                if (t.x < 0 || t.y < 0 || t.x >= W || t.y >= H || gt[f].at(t.x, t.y) != t.label) continue;
                kept.push_back(t);
            }
            live.swap(kept);
        }
        std::vector<char> covered(static_cast<std::size_t>(lx) * ly, 0);
        for (const auto& t : live) covered[static_cast<std::size_t>(t.y / step) * lx + t.x / step] = 1;
        for (int cy = 0; cy < ly; ++cy)
            for (int cx = 0; cx < lx; ++cx) {
                if (covered[static_cast<std::size_t>(cy) * lx + cx]) continue;
                const int x = std::min(W - 1, cx * step + step / 2);
                const int y = std::min(H - 1, cy * step + step / 2);
                live.push_back({next_id++, x, y, gt[f].at(x, y)});
                ds.trajectories.push_back({live.back().id, {}});
            }
        for (const auto& t : live) ds.trajectories[t.id].points.push_back({f, t.x, t.y});
    }

    // Descriptors: per-label prototypes plus noise on a lattice.
    std::vector<std::vector<double>> proto(objects + 1, std::vector<double>(p.desc_dim));
    for (auto& v : proto)
        for (auto& x : v) x = 3.0 * rng.normal();
    ds.descriptors.dim = p.desc_dim;
    for (int f = 0; f < F; ++f)
        for (int y = p.desc_step / 2; y < H; y += p.desc_step)
            for (int x = p.desc_step / 2; x < W; x += p.desc_step) {
                Descriptor d{f, x, y, proto[gt[f].at(x, y)]};
                for (auto& v : d.values) v += 0.5 * rng.normal();
                ds.descriptors.entries.push_back(std::move(d));
            }

    for (int a = 0; a < p.annotators; ++a) {
        Annotation ann;
        ann.annotator = a;
        for (int f = 0; f < F; ++f) ann.frames.emplace(f, gt[f]);
        ds.groundtruth.push_back(std::move(ann));
    }

    snap(ds.contour);
    snap(ds.flow);
    snap(ds.color);
    for (auto& d : ds.descriptors.entries)
        for (auto& v : d.values) v = written(v);
    return ds;
}

}  // namespace mspseg
