#include <algorithm>
#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mspseg/bench.hpp"
#include "mspseg/dataio.hpp"
#include "mspseg/errors.hpp"
#include "mspseg/hierarchy.hpp"
#include "mspseg/inference.hpp"
#include "mspseg/kernels.hpp"
#include "mspseg/potentials.hpp"
#include "mspseg/segio.hpp"
#include "mspseg/synth.hpp"
#include "mspseg/vidgraph.hpp"

namespace py = pybind11;
using namespace mspseg;

namespace {

using Hist = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Hist& h) {
    if (h.ndim() != 1) throw InputError("histogram must be one-dimensional");
    return {h.data(), static_cast<std::size_t>(h.size())};
}

py::array_t<std::int32_t> to_numpy(const LabelGrid& g) {
    py::array_t<std::int32_t> out({g.height, g.width});
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
}

LabelGrid from_numpy(const Labels& a) {
    if (a.ndim() != 2) throw InputError("label frames must be 2-D (height, width)");
    LabelGrid g(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        if (a.data()[i] < 0) throw InputError("labels must be non-negative");
        g.values[i] = a.data()[i];
    }
    return g;
}

// A list of frames is indexed 0..n-1; a dict keeps its frame keys.
FrameStack frames_from(const py::handle& obj) {
    FrameStack fs;
    if (py::isinstance<py::dict>(obj)) {
        for (auto [k, v] : py::cast<py::dict>(obj)) fs.emplace(py::cast<int>(k), from_numpy(py::cast<Labels>(v)));
    } else {
        int f = 0;
        for (auto v : obj) fs.emplace(f++, from_numpy(py::cast<Labels>(v)));
    }
    return fs;
}

py::list frames_to(const std::vector<LabelGrid>& grids) {
    py::list out;
    for (const auto& g : grids) out.append(to_numpy(g));
    return out;
}

DistanceMatrix run_mmpw(int n, const std::vector<std::tuple<int, int, double>>& edges, const std::string& method) {
    BoundaryGraph g;
    g.vertex_count = n;
    for (auto [u, v, w] : edges) g.edges.push_back({u, v, w});
    if (method == "floyd") return mmpw_floyd(g);
    if (method == "mst") return mmpw_mst(g);
    if (method == "auto") return mmpw_all_pairs(g);
    throw InputError("mmpw: method must be auto, floyd or mst");
}

GraphOptions graph_options(int bins_color, int bins_flow, std::vector<int> dict_sizes, const std::string& flow_mode,
                           std::uint64_t seed) {
    GraphOptions o;
    o.bins_color = bins_color;
    o.bins_flow = bins_flow;
    o.dictionary_sizes = std::move(dict_sizes);
    if (flow_mode == "component") o.flow_mode = FlowHistogramMode::component;
    else if (flow_mode == "direction") o.flow_mode = FlowHistogramMode::direction;
    else throw InputError("flow_mode must be component or direction");
    o.seed = seed;
    return o;
}

struct Model {
    VideoGraph graph;
    PotentialSet pot;
};

py::dict level_dict(const InferenceResult& r, const VideoGraph& g) {
    py::dict d;
    d["tau"] = r.tau;
    d["labels"] = frames_to(paint_labels(r.dense, g));
    d["num_labels"] = r.num_labels;
    d["energy"] = r.labeling.energy;
    d["initial_energy"] = r.initial_energy;
    d["edge_count"] = r.edge_count;
    d["moves"] = r.moves.size();
    return d;
}

py::dict pr_dict(const PRPoint& p) {
    py::dict d;
    d["precision"] = p.precision;
    d["recall"] = p.recall;
    d["f"] = p.f;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-cue MRF video segmentation";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", input_error.ptr());
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    m.def("emd_1d", [](const Hist& a, const Hist& b) { return emd_1d(view(a), view(b)); }, py::arg("h1"), py::arg("h2"));
    m.def(
        "emd_general",
        [](const Hist& a, const Hist& b, const Hist& ground) {
            if (ground.ndim() != 2 || ground.shape(0) != ground.shape(1))
                throw InputError("ground distance must be a square matrix");
            const int n = static_cast<int>(ground.shape(0));
            GroundDistance g(n, std::vector<double>(ground.data(), ground.data() + ground.size()));
            return emd_general(view(a), view(b), g);
        },
        py::arg("h1"), py::arg("h2"), py::arg("ground"));
    m.def("chi2", [](const Hist& a, const Hist& b) { return chi2(view(a), view(b)); }, py::arg("h1"), py::arg("h2"));
    m.def("rbf", &rbf, py::arg("d"), py::arg("gamma"));
    m.def(
        "jaccard", [](std::vector<int> a, std::vector<int> b) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            return jaccard(a, b);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "mmpw",
        [](int n, const std::vector<std::tuple<int, int, double>>& edges, const std::string& method) {
            const auto d = run_mmpw(n, edges, method);
            py::array_t<double> out({d.n, d.n});
            std::copy(d.d.begin(), d.d.end(), out.mutable_data());
            return out;
        },
        py::arg("n"), py::arg("edges"), py::arg("method") = "auto",
        "All-pairs minimum over paths of the maximum edge weight; inf when disconnected.");

    py::class_<VideoDataset>(m, "Dataset")
        .def_property_readonly("width", &VideoDataset::width)
        .def_property_readonly("height", &VideoDataset::height)
        .def_property_readonly("frames", &VideoDataset::frames)
        .def_property_readonly("superpixels", [](const VideoDataset& d) { return frames_to(d.superpixels); })
        .def_property_readonly("groundtruth", [](const VideoDataset& d) {
            py::list out;
            for (const auto& a : d.groundtruth) {
                py::dict frames;
                for (const auto& [f, g] : a.frames) frames[py::int_(f)] = to_numpy(g);
                out.append(frames);
            }
            return out;
        })
        .def("save", [](const VideoDataset& d, const fs::path& dir) { save_dataset(d, dir); }, py::arg("dir"))
        .def("validate", [](const VideoDataset& d) { validate_dataset(d); })
        .def("__eq__", [](const VideoDataset& a, const VideoDataset& b) { return a == b; });

    m.def("load_dataset", &load_dataset, py::arg("dir"));
    m.def("synth_presets", &synth_presets);
    m.def("synth_generate", &synth_generate, py::arg("preset"), py::arg("params") = SynthParams{},
          py::arg("seed") = 0);

    py::class_<Model>(m, "Model")
        .def_property_readonly("vertex_count", [](const Model& md) { return md.graph.vertices.size(); })
        .def_property_readonly("spatial_pairs", [](const Model& md) { return md.pot.spatial.size(); })
        .def_property_readonly("temporal_pairs", [](const Model& md) { return md.pot.temporal.size(); })
        .def_property_readonly("warnings", [](const Model& md) { return md.pot.warnings; })
        .def_property_readonly("gammas", [](const Model& md) {
            py::dict d;
            d["boundary"] = md.pot.gammas.boundary;
            d["color"] = md.pot.gammas.color;
            d["flow"] = md.pot.gammas.flow;
            d["texture"] = md.pot.gammas.texture;
            return d;
        })
        .def("edge_count", [](const Model& md, double tau) { return threshold_edges(md.pot, tau).size(); },
             py::arg("tau"))
        .def(
            "segment",
            [](const Model& md, double tau, int max_cycles) {
                const auto r = infer(md.pot, tau, ExpansionOptions{max_cycles});
                return level_dict(r, md.graph);
            },
            py::arg("tau"), py::arg("max_cycles") = 10)
        .def(
            "sweep",
            [](const Model& md, std::optional<std::vector<double>> taus, int max_cycles, bool warm_start,
               int threads) {
                SweepOptions o;
                o.expansion.max_cycles = max_cycles;
                o.warm_start = warm_start;
                o.threads = threads;
                const auto h = sweep_tau(md.pot, taus ? *taus : default_taus(), o);
                py::list out;
                for (const auto& r : h.levels) out.append(level_dict(r, md.graph));
                return out;
            },
            py::arg("taus") = py::none(), py::arg("max_cycles") = 10, py::arg("warm_start") = false,
            py::arg("threads") = 1);

    m.def(
        "build_model",
        [](const VideoDataset& ds, int bins_color, int bins_flow, std::vector<int> dict_sizes,
           const std::string& flow_mode, std::uint64_t seed) {
            py::gil_scoped_release nogil;
            Model md;
            md.graph = build_graph(ds, graph_options(bins_color, bins_flow, std::move(dict_sizes), flow_mode, seed));
            md.pot = compute_potentials(md.graph);
            return md;
        },
        py::arg("dataset"), py::arg("bins_color") = 50, py::arg("bins_flow") = 50,
        py::arg("dictionary_sizes") = GraphOptions{}.dictionary_sizes, py::arg("flow_mode") = "component",
        py::arg("seed") = 0, "Builds the superpixel graph and its unary and pairwise potentials.");

    m.def("default_taus", &default_taus);

    m.def(
        "vpr",
        [](const py::object& pred, const py::list& gts) {
            std::vector<FrameStack> g;
            for (auto a : gts) g.push_back(frames_from(a));
            return pr_dict(vpr(frames_from(pred), g));
        },
        py::arg("pred"), py::arg("gts"));
    m.def(
        "bpr",
        [](const py::object& pred, const py::list& gts) {
            std::vector<FrameStack> g;
            for (auto a : gts) g.push_back(frames_from(a));
            return pr_dict(bpr(frames_from(pred), g));
        },
        py::arg("pred"), py::arg("gts"));
    m.def("boundary_tolerance", &boundary_tolerance, py::arg("width"), py::arg("height"));
}
