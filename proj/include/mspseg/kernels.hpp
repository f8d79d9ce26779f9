#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mspseg {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Histogram distances
// ---------------------------------------------------------------------------

// Symmetric n x n bin-to-bin cost with zero diagonal.
class GroundDistance {
public:
    GroundDistance() = default;
    GroundDistance(int n, std::vector<double> d);

    // |a - b| between bin indices.
    static GroundDistance linear(int n);

    int size() const { return n_; }
    double operator()(int a, int b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }

private:
    int n_ = 0;
    std::vector<double> d_;
};

// Earth Mover's Distance for the linear ground distance |a - b| with unit bin
// spacing: sum of absolute CDF differences. Both inputs must sum to 1.
double emd_1d(std::span<const double> h1, std::span<const double> h2);

// Exact optimal transportation cost between two normalized histograms.
// Solved as a min-cost flow by successive shortest paths.
double emd_general(std::span<const double> h1, std::span<const double> h2, const GroundDistance& g);

// Half-normalized chi-squared distance: 0.5 * sum (a-b)^2 / (a+b). In [0,1]
// for normalized inputs; bins with a+b == 0 contribute nothing.
double chi2(std::span<const double> h1, std::span<const double> h2);

// exp(-d / gamma).
double rbf(double d, double gamma);

// |A n B| / |A u B| over sorted, duplicate-free id lists; 0 when both empty.
double jaccard(std::span<const int> a, std::span<const int> b);

// ---------------------------------------------------------------------------
// Minimum max-edge path weight
// ---------------------------------------------------------------------------

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double weight = 0.0;
};

// Undirected graph over superpixels of one frame, weighted by shared
// boundary strength in [0,1].
struct BoundaryGraph {
    int vertex_count = 0;
    std::vector<WeightedEdge> edges;
};

// Dense row-major n x n matrix.
struct DistanceMatrix {
    int n = 0;
    std::vector<double> d;

    DistanceMatrix() = default;
    explicit DistanceMatrix(int size, double fill = kUnreachable)
        : n(size), d(static_cast<std::size_t>(size) * size, fill) {}

    double operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
    bool operator==(const DistanceMatrix&) const = default;
};

// Floyd-Warshall with (min, max) in place of (min, +). O(V^3).
DistanceMatrix mmpw_floyd(const BoundaryGraph& g);

// Same result via the minimum spanning forest: the minimax path between two
// vertices is their path in any MST. O(V^2 + E log E).
DistanceMatrix mmpw_mst(const BoundaryGraph& g);

// Dispatches to mmpw_floyd for small graphs and mmpw_mst otherwise.
DistanceMatrix mmpw_all_pairs(const BoundaryGraph& g, int floyd_limit = 128);

// ---------------------------------------------------------------------------
// k-means dictionaries
// ---------------------------------------------------------------------------

// K centroids of dimension `dim`, row-major.
struct Dictionary {
    int words = 0;
    int dim = 0;
    std::vector<double> centroids;

    std::span<const double> centroid(int k) const {
        return {centroids.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
    }
    // Nearest centroid; ties go to the lowest index.
    int assign(std::span<const double> x) const;
};

struct KMeansResult {
    Dictionary dictionary;
    std::vector<int> assignments;
    std::vector<double> distortion;  // after each assignment step
    int iterations = 0;
};

// Lloyd's algorithm from a farthest-point initialization whose first centre
// is drawn from `seed`. `points` is row-major N x dim.
KMeansResult kmeans(std::span<const double> points, int dim, int k, std::uint64_t seed,
                    int max_iterations = 100, double tolerance = 1e-6);

}  // namespace mspseg
