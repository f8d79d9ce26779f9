#include "mspseg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <unordered_map>

#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

void check_frames(const FrameStack& pred, const FrameStack& gt) {
    if (gt.empty()) throw InputError("ground truth has no annotated frames");
    for (const auto& [f, g] : gt) {
        auto it = pred.find(f);
        if (it == pred.end())
            throw InputError("frame-set mismatch: prediction lacks annotated frame " + std::to_string(f));
        if (it->second.width != g.width || it->second.height != g.height)
            throw InputError("frame " + std::to_string(f) + ": prediction and ground truth sizes differ");
    }
}

std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

PRPoint PRPoint::make(double scale, double precision, double recall) {
    const double s = precision + recall;
    return {scale, precision, recall, s > 0.0 ? 2.0 * precision * recall / s : 0.0};
}

PRPoint vpr(const FrameStack& pred, const std::vector<FrameStack>& gts, double scale) {
    if (gts.empty()) throw InputError("vpr: no annotators");
    double p_sum = 0.0, r_sum = 0.0;
    for (const auto& gt : gts) {
        check_frames(pred, gt);
        std::unordered_map<std::uint64_t, std::size_t> overlap;
        std::size_t voxels = 0;
        for (const auto& [f, g] : gt) {
            const LabelGrid& s = pred.at(f);
            for (std::size_t p = 0; p < g.values.size(); ++p) ++overlap[pair_key(s.values[p], g.values[p])];
            voxels += g.values.size();
        }
        std::unordered_map<std::int32_t, std::size_t> best_for_pred, best_for_gt;
        for (auto [key, count] : overlap) {
            const auto s = static_cast<std::int32_t>(key >> 32);
            const auto g = static_cast<std::int32_t>(key & 0xffffffffu);
            best_for_pred[s] = std::max(best_for_pred[s], count);
            best_for_gt[g] = std::max(best_for_gt[g], count);
        }
        std::size_t p = 0, r = 0;
        for (auto [_, c] : best_for_pred) p += c;
        for (auto [_, c] : best_for_gt) r += c;
        p_sum += static_cast<double>(p) / static_cast<double>(voxels);
        r_sum += static_cast<double>(r) / static_cast<double>(voxels);
    }
    const double m = static_cast<double>(gts.size());
    return PRPoint::make(scale, p_sum / m, r_sum / m);
}

int boundary_tolerance(int width, int height) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    return std::max(1, static_cast<int>(std::lround(0.0075 * diag)));
}

std::vector<char> boundary_map(const LabelGrid& g) {
    std::vector<char> b(g.values.size(), 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const auto v = g.at(x, y);
            if ((x > 0 && g.at(x - 1, y) != v) || (x + 1 < g.width && g.at(x + 1, y) != v) ||
                (y > 0 && g.at(x, y - 1) != v) || (y + 1 < g.height && g.at(x, y + 1) != v))
                b[static_cast<std::size_t>(y) * g.width + x] = 1;
        }
    return b;
}

namespace {

// Marks every pixel within `radius` (Euclidean) of a set pixel in `src`.
std::vector<char> dilate(const std::vector<char>& src, int w, int h, int radius) {
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    std::vector<char> out(src.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!src[static_cast<std::size_t>(y) * w + x]) continue;
            for (auto [dx, dy] : offsets) {
                const int u = x + dx, v = y + dy;
                if (u >= 0 && v >= 0 && u < w && v < h) out[static_cast<std::size_t>(v) * w + u] = 1;
            }
        }
    return out;
}

}  // namespace

PRPoint bpr(const FrameStack& pred, const std::vector<FrameStack>& gts, double scale) {
    if (gts.empty()) throw InputError("bpr: no annotators");
    for (const auto& gt : gts) check_frames(pred, gt);

    std::set<int> frames;
    for (const auto& gt : gts)
        for (const auto& [f, _] : gt) frames.insert(f);

    std::size_t pred_total = 0, pred_matched = 0;
    std::vector<std::size_t> gt_total(gts.size(), 0), gt_matched(gts.size(), 0);
    for (int f : frames) {
        const LabelGrid& s = pred.at(f);
        const int w = s.width, h = s.height;
        const int tol = boundary_tolerance(w, h);
        const auto pb = boundary_map(s);
        const auto pb_near = dilate(pb, w, h, tol);
        std::vector<char> any_gt_near(pb.size(), 0);
        for (std::size_t a = 0; a < gts.size(); ++a) {
            auto it = gts[a].find(f);
            if (it == gts[a].end()) continue;
            const auto gb = boundary_map(it->second);
            const auto gb_near = dilate(gb, w, h, tol);
            for (std::size_t p = 0; p < gb.size(); ++p) {
                if (gb_near[p]) any_gt_near[p] = 1;
                if (gb[p]) {
                    ++gt_total[a];
                    if (pb_near[p]) ++gt_matched[a];
                }
            }
        }
        for (std::size_t p = 0; p < pb.size(); ++p)
            if (pb[p]) {
                ++pred_total;
                if (any_gt_near[p]) ++pred_matched;
            }
    }
    const double precision =
        pred_total == 0 ? 1.0 : static_cast<double>(pred_matched) / static_cast<double>(pred_total);
    double recall = 0.0;
    for (std::size_t a = 0; a < gts.size(); ++a)
        recall += gt_total[a] == 0 ? 1.0 : static_cast<double>(gt_matched[a]) / static_cast<double>(gt_total[a]);
    recall /= static_cast<double>(gts.size());
    return PRPoint::make(scale, precision, recall);
}

double trapezoid_ap(std::vector<PRPoint> points) {
    std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.recall < b.recall; });
    double area = 0.0;
    for (std::size_t k = 1; k < points.size(); ++k)
        area += (points[k].recall - points[k - 1].recall) * (points[k].precision + points[k - 1].precision) / 2.0;
    return std::clamp(area, 0.0, 1.0);
}

PRCurve aggregate(const std::vector<std::vector<PRPoint>>& per_video) {
    if (per_video.empty()) throw InputError("aggregate: no videos");
    const std::size_t scales = per_video.front().size();
    if (scales == 0) throw InputError("aggregate: empty scale grid");
    for (const auto& v : per_video) {
        if (v.size() != scales) throw InputError("aggregate: inconsistent scale grids");
        for (std::size_t k = 0; k < scales; ++k)
            if (std::abs(v[k].scale - per_video.front()[k].scale) > 1e-9)
                throw InputError("aggregate: inconsistent scale grids");
    }
    PRCurve c;
    const double n = static_cast<double>(per_video.size());
    for (std::size_t k = 0; k < scales; ++k) {
        double p = 0.0, r = 0.0;
        for (const auto& v : per_video) {
            p += v[k].precision;
            r += v[k].recall;
        }
        c.points.push_back(PRPoint::make(per_video.front()[k].scale, p / n, r / n));
        c.ods = std::max(c.ods, c.points.back().f);
    }
    for (const auto& v : per_video) {
        double best = 0.0;
        for (const auto& pt : v) best = std::max(best, pt.f);
        c.oss += best / n;
    }
    c.ap = trapezoid_ap(c.points);
    return c;
}

std::vector<PRPoint> pareto_front(std::vector<PRPoint> points) {
    // Sort by recall descending, precision descending; keep strictly rising precision.
    std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
        if (a.recall != b.recall) return a.recall > b.recall;
        return a.precision > b.precision;
    });
    std::vector<PRPoint> front;
    double best_precision = -1.0;
    for (const auto& p : points) {
        if (p.precision > best_precision) {
            front.push_back(p);
            best_precision = p.precision;
        }
    }
    std::reverse(front.begin(), front.end());
    return front;
}

PRCurve hybrid_curve(const PRCurve& rectified, const PRCurve& baseline) {
    if (rectified.points.empty() || baseline.points.empty()) throw InputError("hybrid_curve: empty curve");
    std::vector<PRPoint> all = pareto_front(rectified.points);
    const auto base = pareto_front(baseline.points);
    all.insert(all.end(), base.begin(), base.end());
    PRCurve c;
    c.points = pareto_front(std::move(all));
    for (const auto& p : c.points) c.ods = std::max(c.ods, p.f);
    c.oss = c.ods;
    c.ap = trapezoid_ap(c.points);
    return c;
}

double ap_on_grid(const std::vector<PRPoint>& points, const std::vector<double>& recall_grid) {
    auto interpolated = [&](double r) {
        double best = 0.0;
        for (const auto& p : points)
            if (p.recall >= r) best = std::max(best, p.precision);
        return best;
    };
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < recall_grid.size(); ++k)
        area += interpolated(recall_grid[k]) * (recall_grid[k + 1] - recall_grid[k]);
    return area;
}

SegmentStats segment_stats(const FrameStack& pred) {
    std::unordered_map<std::int32_t, std::pair<int, int>> extent;  // first, last frame
    for (const auto& [f, g] : pred) {
        std::set<std::int32_t> present(g.values.begin(), g.values.end());
        for (auto l : present) {
            auto [it, fresh] = extent.try_emplace(l, f, f);
            if (!fresh) it->second.second = f;
        }
    }
    SegmentStats s;
    s.ncl = static_cast<int>(extent.size());
    if (extent.empty()) return s;
    double sum = 0.0, sq = 0.0;
    for (const auto& [_, e] : extent) {
        const double len = e.second - e.first + 1;
        sum += len;
        sq += len * len;
    }
    s.length_mean = sum / s.ncl;
    s.length_std = std::sqrt(std::max(0.0, sq / s.ncl - s.length_mean * s.length_mean));
    return s;
}

void write_eval_report(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "video,scale,metric,P,R,F\n";
    for (const auto& r : rows)
        out << r.video << ',' << format_real(r.scale) << ',' << r.metric << ',' << format_real(r.point.precision)
            << ',' << format_real(r.point.recall) << ',' << format_real(r.point.f) << '\n';
}

}  // namespace mspseg
