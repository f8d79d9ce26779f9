#include "mspseg/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <cctype>
#include <string_view>

#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    // Next non-blank line, split into tokens. False at end of input.
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, buf_)) {
            ++line_;
            tokens.clear();
            std::string_view s(buf_);
            std::size_t i = 0;
            while (i < s.size()) {
                while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
                std::size_t j = i;
                while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
                if (j > i) tokens.push_back(s.substr(i, j - i));
                i = j;
            }
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(name_, line_, what); }

    std::size_t line() const { return line_; }
    const std::string& name() const { return name_; }

    long long to_int(std::string_view t) const {
        long long v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size())
            fail("not an integer: '" + std::string(t) + "'");
        return v;
    }

    double to_real(std::string_view t) const {
        double v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
            fail("not a finite real: '" + std::string(t) + "'");
        return v;
    }

private:
    std::istream& in_;
    std::string name_;
    std::string buf_;
    std::size_t line_ = 0;
};

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p.string());
    return in;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

void check_dims(LineReader& r, long long w, long long h) {
    if (w < 1 || h < 1) r.fail("width and height must be >= 1");
    if (w > 1 << 20 || h > 1 << 20) r.fail("grid dimensions too large");
}

}  // namespace

std::string format_real(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

LabelGrid read_lgm(std::istream& in, const std::string& name) {
    LineReader r(in, name);
    std::vector<std::string_view> tok;
    if (!r.next(tok)) r.fail("empty file, expected 'LGM <width> <height>'");
    if (tok.size() != 3 || tok[0] != "LGM") r.fail("malformed header, expected 'LGM <width> <height>'");
    const long long w = r.to_int(tok[1]);
    const long long h = r.to_int(tok[2]);
    check_dims(r, w, h);

    LabelGrid g(static_cast<int>(w), static_cast<int>(h));
    const std::size_t expected = g.size();
    std::size_t n = 0;
    while (r.next(tok)) {
        if (n + tok.size() > expected)
            r.fail("expected " + std::to_string(expected) + " values, found more");
        if (static_cast<long long>(tok.size()) != w)
            r.fail("expected " + std::to_string(expected) + " values (" + std::to_string(w) + " per row), row has " +
                   std::to_string(tok.size()));
        for (auto t : tok) {
            const long long v = r.to_int(t);
            if (v < 0 || v > INT32_MAX) r.fail("label must be a non-negative 32-bit integer");
            g.values[n++] = static_cast<std::int32_t>(v);
        }
    }
    if (n != expected)
        r.fail("expected " + std::to_string(expected) + " values, found " + std::to_string(n));
    return g;
}

FloatGrid read_fgm(std::istream& in, const std::string& name) {
    LineReader r(in, name);
    std::vector<std::string_view> tok;
    if (!r.next(tok)) r.fail("empty file, expected 'FGM <width> <height> <channels>'");
    if (tok.size() != 4 || tok[0] != "FGM")
        r.fail("malformed header, expected 'FGM <width> <height> <channels>'");
    const long long w = r.to_int(tok[1]);
    const long long h = r.to_int(tok[2]);
    const long long c = r.to_int(tok[3]);
    check_dims(r, w, h);
    if (c < 1 || c > 64) r.fail("channel count must be in [1,64]");

    FloatGrid g(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
    const std::size_t expected = g.values.size();
    std::size_t n = 0;
    while (r.next(tok)) {
        if (n + tok.size() > expected)
            r.fail("expected " + std::to_string(expected) + " values, found more");
        if (static_cast<long long>(tok.size()) != w)
            r.fail("expected " + std::to_string(expected) + " values (" + std::to_string(w) + " per row), row has " +
                   std::to_string(tok.size()));
        for (auto t : tok) g.values[n++] = r.to_real(t);
    }
    if (n != expected)
        r.fail("expected " + std::to_string(expected) + " values, found " + std::to_string(n));
    return g;
}

std::vector<Trajectory> read_trj(std::istream& in, const std::string& name,
                                 std::optional<TrajectoryBounds> bounds) {
    LineReader r(in, name);
    std::vector<std::string_view> tok;
    std::vector<Trajectory> out;
    std::map<long long, std::size_t> index;
    while (r.next(tok)) {
        if (tok.size() != 4) r.fail("expected '<tid> <frame> <x> <y>'");
        const long long tid = r.to_int(tok[0]);
        const long long f = r.to_int(tok[1]);
        const long long x = r.to_int(tok[2]);
        const long long y = r.to_int(tok[3]);
        if (tid < 0 || tid > INT32_MAX) r.fail("trajectory id must be a non-negative 32-bit integer");
        if (f < 0 || f > INT32_MAX) r.fail("frame must be non-negative");
        if (x < INT32_MIN || x > INT32_MAX || y < INT32_MIN || y > INT32_MAX) r.fail("coordinate out of range");
        if (bounds) {
            if (f >= bounds->frames) r.fail("frame " + std::to_string(f) + " does not exist");
            if (x < 0 || y < 0 || x >= bounds->width || y >= bounds->height)
                r.fail("point (" + std::to_string(x) + "," + std::to_string(y) + ") out of bounds for " +
                       std::to_string(bounds->width) + "x" + std::to_string(bounds->height) + " frame");
        }
        auto [it, fresh] = index.try_emplace(tid, out.size());
        if (fresh) out.push_back(Trajectory{static_cast<int>(tid), {}});
        auto& pts = out[it->second].points;
        if (!pts.empty() && pts.back().frame >= f)
            r.fail("trajectory " + std::to_string(tid) + ": frames must be strictly increasing");
        pts.push_back({static_cast<int>(f), static_cast<int>(x), static_cast<int>(y)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

DescriptorSet read_dsc(std::istream& in, const std::string& name) {
    LineReader r(in, name);
    std::vector<std::string_view> tok;
    if (!r.next(tok)) r.fail("empty file, expected 'DSC <dim>'");
    if (tok.size() != 2 || tok[0] != "DSC") r.fail("malformed header, expected 'DSC <dim>'");
    const long long dim = r.to_int(tok[1]);
    if (dim < 0 || dim > 1 << 16) r.fail("descriptor dim out of range");

    DescriptorSet d;
    d.dim = static_cast<int>(dim);
    while (r.next(tok)) {
        if (static_cast<long long>(tok.size()) != 3 + dim)
            r.fail("expected '<frame> <x> <y>' followed by " + std::to_string(dim) + " values");
        Descriptor e;
        const long long f = r.to_int(tok[0]);
        if (f < 0 || f > INT32_MAX) r.fail("frame must be non-negative");
        e.frame = static_cast<int>(f);
        e.x = static_cast<int>(r.to_int(tok[1]));
        e.y = static_cast<int>(r.to_int(tok[2]));
        e.values.reserve(dim);
        for (long long k = 0; k < dim; ++k) e.values.push_back(r.to_real(tok[3 + k]));
        d.entries.push_back(std::move(e));
    }
    return d;
}

void write_lgm(std::ostream& out, const LabelGrid& g) {
    out << "LGM " << g.width << ' ' << g.height << '\n';
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (x) out << ' ';
            out << g.at(x, y);
        }
        out << '\n';
    }
}

void write_fgm(std::ostream& out, const FloatGrid& g) {
    out << "FGM " << g.width << ' ' << g.height << ' ' << g.channels << '\n';
    for (int c = 0; c < g.channels; ++c) {
        for (int y = 0; y < g.height; ++y) {
            for (int x = 0; x < g.width; ++x) {
                if (x) out << ' ';
                out << format_real(g.at(c, x, y));
            }
            out << '\n';
        }
    }
}

void write_trj(std::ostream& out, const std::vector<Trajectory>& trajectories) {
    std::vector<const Trajectory*> order;
    for (const auto& t : trajectories) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const auto* t : order)
        for (const auto& p : t->points)
            out << t->id << ' ' << p.frame << ' ' << p.x << ' ' << p.y << '\n';
}

void write_dsc(std::ostream& out, const DescriptorSet& d) {
    out << "DSC " << d.dim << '\n';
    for (const auto& e : d.entries) {
        out << e.frame << ' ' << e.x << ' ' << e.y;
        for (double v : e.values) out << ' ' << format_real(v);
        out << '\n';
    }
}

LabelGrid load_lgm(const fs::path& p) {
    auto in = open_in(p);
    return read_lgm(in, p.string());
}

FloatGrid load_fgm(const fs::path& p) {
    auto in = open_in(p);
    return read_fgm(in, p.string());
}

void save_lgm(const fs::path& p, const LabelGrid& g) {
    auto out = open_out(p);
    write_lgm(out, g);
    if (!out) throw InputError("write failed: " + p.string());
}

void save_fgm(const fs::path& p, const FloatGrid& g) {
    auto out = open_out(p);
    write_fgm(out, g);
    if (!out) throw InputError("write failed: " + p.string());
}

std::string frame_file(const std::string& prefix, int frame, const std::string& ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04d.%s", prefix.c_str(), frame, ext.c_str());
    return buf;
}

std::string gt_file(int annotator, int frame) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "a%02d_f%04d.lgm", annotator, frame);
    return buf;
}

std::vector<Annotation> load_groundtruth(const fs::path& dir) {
    fs::path gt = dir;
    if (fs::is_directory(dir / "gt")) gt = dir / "gt";
    std::map<int, Annotation> by_annotator;
    if (!fs::is_directory(gt)) return {};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(gt))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        int a = 0, f = 0;
        char tail = 0;
        const std::string fname = p.filename().string();
        if (std::sscanf(fname.c_str(), "a%d_f%d.lgm%c", &a, &f, &tail) != 2 || a < 0 || f < 0) continue;
        if (fname != gt_file(a, f)) continue;
        auto& ann = by_annotator[a];
        ann.annotator = a;
        ann.frames.emplace(f, load_lgm(p));
    }
    std::vector<Annotation> out;
    for (auto& [_, ann] : by_annotator) out.push_back(std::move(ann));
    return out;
}

void validate_dataset(const VideoDataset& ds) {
    const int frames = ds.frames();
    if (frames < 1) throw InputError("dataset has no frames");
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw InputError(msg);
    };
    require(ds.tslabels.size() == static_cast<std::size_t>(frames), "tslabels frame count mismatch");
    require(ds.contour.size() == static_cast<std::size_t>(frames), "contour frame count mismatch");
    require(ds.flow.size() == static_cast<std::size_t>(frames), "flow frame count mismatch");
    require(ds.color.size() == static_cast<std::size_t>(frames), "color frame count mismatch");

    const int w = ds.width(), h = ds.height();
    for (int f = 0; f < frames; ++f) {
        auto where = [&](const std::string& prefix, const std::string& ext) {
            return frame_file(prefix, f, ext);
        };
        auto same = [&](int gw, int gh, const std::string& file) {
            require(gw == w && gh == h, file + ": dimension mismatch, expected " + std::to_string(w) + "x" +
                                            std::to_string(h) + ", found " + std::to_string(gw) + "x" +
                                            std::to_string(gh));
        };
        same(ds.superpixels[f].width, ds.superpixels[f].height, where("sp", "lgm"));
        same(ds.tslabels[f].width, ds.tslabels[f].height, where("tsl", "lgm"));
        same(ds.contour[f].width, ds.contour[f].height, where("contour", "fgm"));
        same(ds.flow[f].width, ds.flow[f].height, where("flow", "fgm"));
        same(ds.color[f].width, ds.color[f].height, where("lab", "fgm"));
        require(ds.contour[f].channels == 1, where("contour", "fgm") + ": expected 1 channel");
        require(ds.flow[f].channels == 2, where("flow", "fgm") + ": expected 2 channels");
        require(ds.color[f].channels == 3, where("lab", "fgm") + ": expected 3 channels");
        for (double v : ds.contour[f].values)
            require(v >= 0.0 && v <= 1.0, where("contour", "fgm") + ": contour value outside [0,1]");
    }
    for (const auto& t : ds.trajectories) {
        for (std::size_t k = 0; k < t.points.size(); ++k) {
            const auto& p = t.points[k];
            const std::string id = "traj.trj: trajectory " + std::to_string(t.id);
            require(k == 0 || t.points[k - 1].frame < p.frame, id + ": frames not strictly increasing");
            require(p.frame < frames, id + ": frame " + std::to_string(p.frame) + " does not exist");
            require(p.x >= 0 && p.y >= 0 && p.x < w && p.y < h,
                    id + ": point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") out of bounds");
        }
    }
    for (const auto& e : ds.descriptors.entries) {
        require(static_cast<int>(e.values.size()) == ds.descriptors.dim, "desc.dsc: vector length != dim");
        require(e.frame >= 0 && e.frame < frames, "desc.dsc: frame " + std::to_string(e.frame) + " does not exist");
        require(e.x >= 0 && e.y >= 0 && e.x < w && e.y < h, "desc.dsc: point out of bounds");
    }
    for (const auto& ann : ds.groundtruth) {
        for (const auto& [f, g] : ann.frames) {
            const std::string file = "gt/" + gt_file(ann.annotator, f);
            require(f < frames, file + ": frame does not exist");
            require(g.width == w && g.height == h, file + ": dimension mismatch");
        }
    }
}

VideoDataset load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("input directory does not exist: " + dir.string());
    VideoDataset ds;
    for (int f = 0;; ++f) {
        const fs::path sp = dir / frame_file("sp", f, "lgm");
        if (!fs::exists(sp)) break;
        ds.superpixels.push_back(load_lgm(sp));
        ds.tslabels.push_back(load_lgm(dir / frame_file("tsl", f, "lgm")));
        ds.contour.push_back(load_fgm(dir / frame_file("contour", f, "fgm")));
        ds.flow.push_back(load_fgm(dir / frame_file("flow", f, "fgm")));
        ds.color.push_back(load_fgm(dir / frame_file("lab", f, "fgm")));
    }
    if (ds.superpixels.empty())
        throw InputError(dir.string() + ": no frames found (expected " + frame_file("sp", 0, "lgm") + ")");

    {
        const fs::path p = dir / "traj.trj";
        auto in = open_in(p);
        ds.trajectories = read_trj(in, p.string(), TrajectoryBounds{ds.frames(), ds.width(), ds.height()});
    }
    {
        const fs::path p = dir / "desc.dsc";
        auto in = open_in(p);
        ds.descriptors = read_dsc(in, p.string());
    }
    ds.groundtruth = load_groundtruth(dir / "gt");
    validate_dataset(ds);
    return ds;
}

void save_dataset(const VideoDataset& ds, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
    for (int f = 0; f < ds.frames(); ++f) {
        save_lgm(dir / frame_file("sp", f, "lgm"), ds.superpixels[f]);
        save_lgm(dir / frame_file("tsl", f, "lgm"), ds.tslabels[f]);
        save_fgm(dir / frame_file("contour", f, "fgm"), ds.contour[f]);
        save_fgm(dir / frame_file("flow", f, "fgm"), ds.flow[f]);
        save_fgm(dir / frame_file("lab", f, "fgm"), ds.color[f]);
    }
    {
        auto out = open_out(dir / "traj.trj");
        write_trj(out, ds.trajectories);
    }
    {
        auto out = open_out(dir / "desc.dsc");
        write_dsc(out, ds.descriptors);
    }
    if (!ds.groundtruth.empty()) {
        fs::create_directories(dir / "gt", ec);
        if (ec) throw InputError("cannot create " + (dir / "gt").string());
        for (const auto& ann : ds.groundtruth)
            for (const auto& [f, g] : ann.frames) save_lgm(dir / "gt" / gt_file(ann.annotator, f), g);
    }
}

}  // namespace mspseg
