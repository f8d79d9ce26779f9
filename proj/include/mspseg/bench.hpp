#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mspseg/dataio.hpp"

namespace mspseg {

// Per-frame label grids of one video, keyed by frame index.
using FrameStack = std::map<int, LabelGrid>;

struct PRPoint {
    double scale = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;

    // Fills f = 2PR/(P+R), or 0 when P+R == 0.
    static PRPoint make(double scale, double precision, double recall);
};

struct PRCurve {
    std::vector<PRPoint> points;
    double ods = 0.0;
    double oss = 0.0;
    double ap = 0.0;
};

// Volume precision-recall. Segments are labels taken across all annotated
// frames; precision sums each predicted segment's best ground-truth overlap,
// recall each ground-truth segment's best predicted overlap, both over the
// annotated voxel count. Averaged over annotators.
PRPoint vpr(const FrameStack& pred, const std::vector<FrameStack>& gts, double scale = 0.0);

// max(1, round(0.0075 * frame diagonal)).
int boundary_tolerance(int width, int height);

// Pixels with a 4-neighbour of a different label.
std::vector<char> boundary_map(const LabelGrid& g);

// Boundary precision-recall with a distance tolerance. A predicted boundary
// pixel counts as matched if any annotator's boundary lies within tolerance;
// recall is computed per annotator and averaged. Counts are summed over frames.
PRPoint bpr(const FrameStack& pred, const std::vector<FrameStack>& gts, double scale = 0.0);

// Trapezoid area under precision over recall-sorted points, clipped to [0,1].
double trapezoid_ap(std::vector<PRPoint> points);

// ODS, OSS and AP over videos evaluated on the same scale grid.
PRCurve aggregate(const std::vector<std::vector<PRPoint>>& per_video);

// Points not dominated in both precision and recall, sorted by recall.
std::vector<PRPoint> pareto_front(std::vector<PRPoint> points);

// Pareto union of a rectified curve and its unrectified baseline.
PRCurve hybrid_curve(const PRCurve& rectified, const PRCurve& baseline);

// Area under the interpolated precision max{P : R >= r} evaluated on the
// left end of each interval of `recall_grid` (sorted ascending).
double ap_on_grid(const std::vector<PRPoint>& points, const std::vector<double>& recall_grid);

struct SegmentStats {
    double length_mean = 0.0;  // frames spanned by each label
    double length_std = 0.0;
    int ncl = 0;               // distinct labels
};

SegmentStats segment_stats(const FrameStack& pred);

struct ReportRow {
    std::string video;
    double scale = 0.0;
    std::string metric;
    PRPoint point;
};

// CSV: video,scale,metric,P,R,F
void write_eval_report(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace mspseg
