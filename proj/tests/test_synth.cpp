#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "mspseg/errors.hpp"
#include "mspseg/potentials.hpp"
#include "mspseg/synth.hpp"

using namespace mspseg;

TEST_CASE("every preset validates and round trips") {
    for (const auto& name : synth_presets()) {
        const auto ds = synth_generate(name, {}, 3);
        CHECK_NOTHROW(validate_dataset(ds));
        const auto dir = testutil::scratch("synth_" + name);
        save_dataset(ds, dir);
        CHECK(load_dataset(dir) == ds);
    }
}

TEST_CASE("same seed, same dataset; other seed, other noise") {
    const auto a = synth_generate("two-rect-same-motion", {}, 7);
    const auto b = synth_generate("two-rect-same-motion", {}, 7);
    const auto c = synth_generate("two-rect-same-motion", {}, 8);
    CHECK(a == b);
    CHECK_FALSE(a.color == c.color);
    const auto d1 = testutil::scratch("synth_det1"), d2 = testutil::scratch("synth_det2");
    save_dataset(a, d1);
    save_dataset(b, d2);
    CHECK(testutil::tree(d1) == testutil::tree(d2));
}

TEST_CASE("unknown preset lists the presets") {
    try {
        synth_generate("three-rect", {}, 0);
        FAIL("expected an error");
    } catch (const InputError& e) {
        for (const auto& n : synth_presets()) CHECK(std::string(e.what()).find(n) != std::string::npos);
    }
}

TEST_CASE("parameters are checked") {
    CHECK_THROWS_AS(synth_generate("static-noise", {{"colour", "1"}}, 0), InputError);
    CHECK_THROWS_AS(synth_generate("static-noise", {{"width", "abc"}}, 0), InputError);
    CHECK_THROWS_AS(synth_generate("static-noise", {{"frames", "0"}}, 0), InputError);
    const auto ds = synth_generate("static-noise", {{"width", "40"}, {"frames", "3"}, {"annotators", "2"}}, 0);
    CHECK(ds.width() == 40);
    CHECK(ds.frames() == 3);
    CHECK(ds.groundtruth.size() == 2);
}

TEST_CASE("contour is one on object boundaries") {
    const auto ds = synth_generate("two-rect-same-motion", {}, 1);
    for (int f = 0; f < ds.frames(); ++f) {
        const auto& gt = ds.groundtruth[0].frames.at(f);
        const auto& c = ds.contour[f];
        for (int y = 0; y + 1 < gt.height; ++y)
            for (int x = 0; x + 1 < gt.width; ++x)
                if (gt.at(x, y) != gt.at(x + 1, y)) CHECK(c.at(0, x, y) == 1.0);
    }
}

TEST_CASE("superpixels never straddle objects") {
    const auto ds = synth_generate("occlusion-appear", {}, 2);
    for (int f = 0; f < ds.frames(); ++f) {
        std::map<int, int> owner;
        const auto& gt = ds.groundtruth[0].frames.at(f);
        for (std::size_t p = 0; p < gt.values.size(); ++p) {
            auto [it, fresh] = owner.emplace(ds.superpixels[f].values[p], gt.values[p]);
            CHECK(it->second == gt.values[p]);
        }
    }
}

TEST_CASE("different motion shows in flow distance") {
    const auto ds = synth_generate("two-rect-diff-motion", {}, 3);
    GraphOptions o;
    o.dictionary_sizes = {5};
    const auto g = build_graph(ds, o);
    const auto d = spatial_distances(g);
    auto object_of = [&](int v) {
        const auto& map = g.vertex_map[g.vertices[v].frame];
        for (std::size_t p = 0; p < map.values.size(); ++p)
            if (map.values[p] == v) return ds.groundtruth[0].frames.at(g.vertices[v].frame).values[p];
        return -1;
    };
    double within = 0.0, across = 1e9;
    for (std::size_t k = 0; k < g.spatial_pairs.size(); ++k) {
        const int a = object_of(g.spatial_pairs[k].i), b = object_of(g.spatial_pairs[k].j);
        if (a == 0 || b == 0) continue;
        if (a == b)
            within = std::max(within, d[k].flow);
        else
            across = std::min(across, d[k].flow);
    }
    CHECK(across > within);
}

TEST_CASE("occluding object appears later") {
    const auto ds = synth_generate("occlusion-appear", {}, 4);
    auto labels = [&](int f) {
        const auto& v = ds.groundtruth[0].frames.at(f).values;
        return std::set<int>(v.begin(), v.end());
    };
    const auto first = labels(0), last = labels(ds.frames() - 1);
    bool appears = false;
    for (int l : last)
        if (!first.count(l)) appears = true;
    CHECK(appears);
}

TEST_CASE("trajectories stay inside their object") {
    const auto ds = synth_generate("two-rect-diff-motion", {}, 5);
    CHECK_FALSE(ds.trajectories.empty());
    for (const auto& t : ds.trajectories) {
        const auto& p0 = t.points.front();
        const int label = ds.groundtruth[0].frames.at(p0.frame).at(p0.x, p0.y);
        for (const auto& p : t.points) CHECK(ds.groundtruth[0].frames.at(p.frame).at(p.x, p.y) == label);
    }
}
