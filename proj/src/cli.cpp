#include "mspseg/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mspseg/config.hpp"
#include "mspseg/errors.hpp"
#include "mspseg/hierarchy.hpp"
#include "mspseg/parallel.hpp"
#include "mspseg/potentials.hpp"
#include "mspseg/segio.hpp"
#include "mspseg/synth.hpp"
#include "mspseg/vidgraph.hpp"

namespace mspseg {

namespace {

RunConfig config_for(const fs::path& file) { return file.empty() ? RunConfig{} : load_config(file); }

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& log) {
    for (const auto& w : warnings) log << "warning: " << w << '\n';
}

struct Prepared {
    VideoGraph graph;
    PotentialSet potentials;
};

Prepared prepare(const fs::path& input, const RunConfig& cfg, std::ostream& log) {
    if (!fs::is_directory(input)) throw InputError("input directory does not exist: " + input.string());
    const VideoDataset ds = load_dataset(input);
    Prepared p{build_graph(ds, cfg.graph_options()), {}};
    p.potentials = compute_potentials(p.graph);
    report_warnings(p.potentials.warnings, log);  // includes the graph's
    log << "graph: " << p.graph.vertices.size() << " vertices, " << p.graph.spatial_pairs.size() << " spatial and "
        << p.graph.temporal_pairs.size() << " temporal pairs, " << p.graph.label_count() << " labels\n";
    return p;
}

// One scale of one predicted video.
struct ScaleDir {
    double scale = 0.0;
    fs::path dir;
};

std::vector<ScaleDir> scale_dirs(const fs::path& pred) {
    if (!fs::is_directory(pred)) throw InputError("prediction directory does not exist: " + pred.string());
    std::vector<ScaleDir> out;
    for (const auto& e : fs::directory_iterator(pred)) {
        const std::string name = e.path().filename().string();
        if (!e.is_directory() || name.rfind("tau_", 0) != 0) continue;
        double tau = 0.0;
        if (fs::exists(e.path() / "manifest.json")) {
            tau = read_manifest(e.path() / "manifest.json").tau;
        } else {
            try {
                tau = std::stod(name.substr(4));
            } catch (const std::exception&) {
                throw InputError("cannot read scale from directory name " + e.path().string());
            }
        }
        out.push_back({tau, e.path()});
    }
    if (out.empty()) {
        const double tau = fs::exists(pred / "manifest.json") ? read_manifest(pred / "manifest.json").tau : 0.0;
        out.push_back({tau, pred});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.scale < b.scale; });
    return out;
}

nlohmann::json curve_json(const PRCurve& c) {
    nlohmann::json j;
    j["ods"] = c.ods;
    j["oss"] = c.oss;
    j["ap"] = c.ap;
    j["curve"] = nlohmann::json::array();
    for (const auto& p : c.points)
        j["curve"].push_back({{"scale", p.scale}, {"precision", p.precision}, {"recall", p.recall}, {"f", p.f}});
    return j;
}

}  // namespace

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("MSP_SEG_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw InputError(std::string("MSP_SEG_THREADS must be a positive integer, got '") + env + "'");
        return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void cmd_segment(const SegmentArgs& a, std::ostream& log) {
    const RunConfig cfg = config_for(a.config);
    const double tau = a.tau.value_or(cfg.taus.front());
    if (!std::isfinite(tau) || tau < 0.0 || tau > 1.01 + 1e-12)
        throw InputError("tau " + format_real(tau) + " outside [0, 1.01]");
    const Prepared p = prepare(a.input, cfg, log);
    ExpansionOptions eo;
    eo.max_cycles = cfg.max_cycles;
    const InferenceResult r = infer(p.potentials, tau, eo);
    const auto m = write_segmentation(r, p.graph, a.out);
    if (!a.pairs_csv.empty()) {
        auto out = open_out(a.pairs_csv);
        write_pair_csv(out, p.potentials);
    }
    if (!a.move_log.empty()) {
        auto out = open_out(a.move_log);
        write_move_log(out, r.moves);
    }
    log << "tau " << format_real(m.tau) << ": " << m.num_labels << " labels, energy " << format_real(m.energy)
        << ", " << r.edge_count << " edges\n";
}

void cmd_sweep(const SweepArgs& a, std::ostream& log) {
    RunConfig cfg = config_for(a.config);
    if (!a.taus.empty()) {
        cfg.taus = parse_tau_range(a.taus);
        validate_config(cfg);
    }
    const Prepared p = prepare(a.input, cfg, log);
    const HierarchyResult h = sweep_tau(p.potentials, cfg.taus, cfg.sweep_options(a.threads));
    for (const auto& level : h.levels) write_segmentation(level, p.graph, a.out / tau_dir_name(level.tau));
    auto csv = open_out(a.out / "hierarchy.csv");
    write_hierarchy_csv(csv, h);
    for (const auto& level : h.levels)
        log << "tau " << format_real(level.tau) << ": " << level.num_labels << " labels, " << level.edge_count
            << " edges\n";
}

void cmd_eval(const EvalArgs& a, std::ostream& log) {
    const bool want_bpr = a.metric == "bpr" || a.metric == "both";
    const bool want_vpr = a.metric == "vpr" || a.metric == "both";
    if (!want_bpr && !want_vpr) throw InputError("unknown metric '" + a.metric + "' (expected bpr, vpr or both)");
    if (a.pred.empty()) throw InputError("eval needs at least one --pred directory");
    if (a.pred.size() != a.gt.size())
        throw InputError("eval needs one --gt per --pred (" + std::to_string(a.pred.size()) + " vs " +
                         std::to_string(a.gt.size()) + ")");
    if (a.out.empty()) throw InputError("eval needs --out");

    const std::size_t videos = a.pred.size();
    struct VideoEval {
        std::vector<PRPoint> bpr, vpr;
        std::vector<SegmentStats> stats;
    };
    std::vector<VideoEval> evals(videos);
    std::vector<std::vector<ScaleDir>> scales(videos);
    for (std::size_t v = 0; v < videos; ++v) scales[v] = scale_dirs(a.pred[v]);
    for (std::size_t v = 1; v < videos; ++v) {
        bool same = scales[v].size() == scales[0].size();
        for (std::size_t k = 0; same && k < scales[v].size(); ++k)
            same = std::abs(scales[v][k].scale - scales[0][k].scale) < 1e-9;
        if (!same) throw InputError("videos " + a.pred[0].string() + " and " + a.pred[v].string() +
                                    " were segmented on different scale grids");
    }

    parallel_for(videos, a.threads, [&](std::size_t v) {
        if (!fs::is_directory(a.gt[v])) throw InputError("ground-truth directory does not exist: " + a.gt[v].string());
        std::vector<FrameStack> gts;
        for (auto& ann : load_groundtruth(a.gt[v])) gts.push_back(std::move(ann.frames));
        if (gts.empty()) throw InputError(a.gt[v].string() + ": no ground-truth annotations");
        for (const auto& s : scales[v]) {
            const FrameStack pred = load_segmentation(s.dir);
            if (want_bpr) evals[v].bpr.push_back(bpr(pred, gts, s.scale));
            if (want_vpr) evals[v].vpr.push_back(vpr(pred, gts, s.scale));
            evals[v].stats.push_back(segment_stats(pred));
        }
    });

    std::vector<ReportRow> rows;
    auto video_name = [&](std::size_t v) {
        std::string n = a.pred[v].lexically_normal().filename().string();
        if (n.empty() || n == ".") n = a.pred[v].lexically_normal().parent_path().filename().string();
        return n.empty() ? "video" + std::to_string(v) : n;
    };
    for (std::size_t v = 0; v < videos; ++v)
        for (std::size_t k = 0; k < scales[v].size(); ++k) {
            if (want_bpr) rows.push_back({video_name(v), scales[v][k].scale, "bpr", evals[v].bpr[k]});
            if (want_vpr) rows.push_back({video_name(v), scales[v][k].scale, "vpr", evals[v].vpr[k]});
        }

    nlohmann::json summary;
    summary["videos"] = videos;
    std::size_t best_scale = 0;
    auto add_metric = [&](const char* name, std::vector<PRPoint> VideoEval::*member) {
        std::vector<std::vector<PRPoint>> per_video;
        for (const auto& e : evals) per_video.push_back(e.*member);
        const PRCurve c = aggregate(per_video);
        summary["metrics"][name] = curve_json(c);
        log << name << ": ODS " << format_real(c.ods) << "  OSS " << format_real(c.oss) << "  AP "
            << format_real(c.ap) << '\n';
        return c;
    };
    // Length and NCL are reported at the ODS scale of the first metric.
    bool first = true;
    for (auto [name, member] : {std::pair{"bpr", &VideoEval::bpr}, std::pair{"vpr", &VideoEval::vpr}}) {
        if ((member == &VideoEval::bpr && !want_bpr) || (member == &VideoEval::vpr && !want_vpr)) continue;
        const PRCurve c = add_metric(name, member);
        if (first) {
            for (std::size_t k = 0; k < c.points.size(); ++k)
                if (c.points[k].f > c.points[best_scale].f) best_scale = k;
            first = false;
        }
    }
    double len = 0.0, ncl = 0.0;
    for (const auto& e : evals) {
        len += e.stats[best_scale].length_mean / static_cast<double>(videos);
        ncl += e.stats[best_scale].ncl / static_cast<double>(videos);
    }
    summary["ods_scale"] = scales[0][best_scale].scale;
    summary["length_mean"] = len;
    summary["ncl_mean"] = ncl;

    {
        auto out = open_out(a.out);
        out << summary.dump(2) << '\n';
    }
    const fs::path report = a.out.has_parent_path() ? a.out.parent_path() / "eval_report.csv" : "eval_report.csv";
    auto out = open_out(report);
    write_eval_report(out, rows);
}

void cmd_synth(const SynthArgs& a, std::ostream& log) {
    SynthParams params;
    for (const auto& kv : a.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("expected key=value, got '" + kv + "'");
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    const VideoDataset ds = synth_generate(a.preset, params, a.seed);
    validate_dataset(ds);
    save_dataset(ds, a.out);
    log << "wrote " << ds.frames() << " frames (" << ds.width() << "x" << ds.height() << ") to " << a.out.string()
        << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporally consistent video segmentation over superpixel graphs"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: MSP_SEG_THREADS or all cores)");

    SegmentArgs seg;
    double seg_tau = 0.0;
    auto* segment = app.add_subcommand("segment", "segment one video at a single tau");
    segment->add_option("--input", seg.input, "video directory")->required();
    segment->add_option("--config", seg.config, "key = value config file");
    auto* tau_opt = segment->add_option("--tau", seg_tau, "edge threshold in [0, 1.01]");
    segment->add_option("--out", seg.out, "output directory")->required();
    segment->add_option("--pairs", seg.pairs_csv, "also write per-pair cue weights as CSV");
    segment->add_option("--moves", seg.move_log, "also write the expansion move log as CSV");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "segment at every tau of a grid");
    sweep->add_option("--input", sw.input, "video directory")->required();
    sweep->add_option("--config", sw.config, "key = value config file");
    sweep->add_option("--taus", sw.taus, "inclusive grid a:step:b");
    sweep->add_option("--out", sw.out, "output directory")->required();

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "boundary and volume precision-recall");
    eval->add_option("--pred", ev.pred, "segmentation directory (repeat per video)")->required();
    eval->add_option("--gt", ev.gt, "ground-truth directory (repeat per video)")->required();
    eval->add_option("--metric", ev.metric, "bpr, vpr or both");
    eval->add_option("--out", ev.out, "summary JSON file")->required();

    SynthArgs sy;
    auto* synth = app.add_subcommand("synth", "write a synthetic video with ground truth");
    synth->add_option("--preset", sy.preset, "preset name")->required();
    synth->add_option("--seed", sy.seed, "random seed");
    synth->add_option("--out", sy.out, "output directory")->required();
    synth->add_option("--param", sy.params, "generator parameter key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        const int n = resolve_threads(threads);
        if (segment->parsed()) {
            if (tau_opt->count()) seg.tau = seg_tau;
            seg.threads = n;
            cmd_segment(seg, err);
        } else if (sweep->parsed()) {
            sw.threads = n;
            cmd_sweep(sw, err);
        } else if (eval->parsed()) {
            ev.threads = n;
            cmd_eval(ev, err);
        } else if (synth->parsed()) {
            cmd_synth(sy, err);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace mspseg
