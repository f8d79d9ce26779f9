#include "mspseg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mspseg {

namespace {

constexpr double kMassTolerance = 1e-6;
constexpr double kFlowEpsilon = 1e-15;

void require_same_size(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": histogram sizes differ (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
}

void require_normalized(std::span<const double> h, const char* what) {
    double s = 0.0;
    for (double v : h) {
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative or NaN bin");
        s += v;
    }
    if (std::abs(s - 1.0) > kMassTolerance)
        throw std::invalid_argument(std::string(what) + ": histogram is not normalized (sum " + std::to_string(s) +
                                    ")");
}

double squared_distance(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

}  // namespace

GroundDistance::GroundDistance(int n, std::vector<double> d) : n_(n), d_(std::move(d)) {
    if (n < 0 || d_.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("GroundDistance: matrix must be n x n");
    for (int a = 0; a < n; ++a) {
        if ((*this)(a, a) != 0.0) throw std::invalid_argument("GroundDistance: diagonal must be zero");
        for (int b = 0; b < n; ++b) {
            if (!((*this)(a, b) >= 0.0)) throw std::invalid_argument("GroundDistance: entries must be non-negative");
            if ((*this)(a, b) != (*this)(b, a)) throw std::invalid_argument("GroundDistance: matrix must be symmetric");
        }
    }
}

GroundDistance GroundDistance::linear(int n) {
    std::vector<double> d(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) d[static_cast<std::size_t>(a) * n + b] = std::abs(a - b);
    return GroundDistance(n, std::move(d));
}

double emd_1d(std::span<const double> h1, std::span<const double> h2) {
    require_same_size(h1, h2, "emd_1d");
    require_normalized(h1, "emd_1d");
    require_normalized(h2, "emd_1d");
    double c1 = 0.0, c2 = 0.0, total = 0.0;
    for (std::size_t k = 0; k < h1.size(); ++k) {
        c1 += h1[k];
        c2 += h2[k];
        total += std::abs(c1 - c2);
    }
    return total;
}

double emd_general(std::span<const double> h1, std::span<const double> h2, const GroundDistance& g) {
    require_same_size(h1, h2, "emd_general");
    if (static_cast<int>(h1.size()) != g.size())
        throw std::invalid_argument("emd_general: ground distance size does not match histograms");
    require_normalized(h1, "emd_general");
    require_normalized(h2, "emd_general");

    // Min-cost flow on S -> supplier i -> consumer j -> T by successive
    // shortest paths. Dijkstra on reduced costs; potentials of nodes beyond the
    // sink are capped at the sink distance so reduced costs stay >= 0.
    const int n = g.size();
    const int S = 2 * n, T = 2 * n + 1, nodes = 2 * n + 2;
    struct Arc {
        int to;
        double cap, cost;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out(nodes);
    auto add = [&](int u, int v, double cap, double cost) {
        out[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, cap, cost});
        out[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, 0.0, -cost});
    };
    for (int i = 0; i < n; ++i)
        if (h1[i] > 0.0) add(S, i, h1[i], 0.0);
    for (int j = 0; j < n; ++j)
        if (h2[j] > 0.0) add(n + j, T, h2[j], 0.0);
    const double unlimited = 2.0;  // more than the total mass
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (h1[i] > 0.0 && h2[j] > 0.0) add(i, n + j, unlimited, g(i, j));

    std::vector<double> potential(nodes, 0.0), dist(nodes);
    std::vector<int> via(nodes);
    std::vector<char> done(nodes);
    double cost = 0.0;
    for (;;) {
        std::fill(dist.begin(), dist.end(), kUnreachable);
        std::fill(via.begin(), via.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        dist[S] = 0.0;
        for (;;) {
            int u = -1;
            for (int v = 0; v < nodes; ++v)
                if (!done[v] && dist[v] < kUnreachable && (u < 0 || dist[v] < dist[u])) u = v;
            if (u < 0) break;
            done[u] = 1;
            for (int a : out[u]) {
                const Arc& arc = arcs[a];
                if (arc.cap <= kFlowEpsilon || done[arc.to]) continue;
                const double rc = std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
                if (dist[u] + rc < dist[arc.to]) {
                    dist[arc.to] = dist[u] + rc;
                    via[arc.to] = a;
                }
            }
        }
        if (dist[T] == kUnreachable) break;
        for (int v = 0; v < nodes; ++v) potential[v] += std::min(dist[v], dist[T]);

        double delta = kUnreachable;
        for (int v = T; v != S; v = arcs[via[v] ^ 1].to) delta = std::min(delta, arcs[via[v]].cap);
        for (int v = T; v != S; v = arcs[via[v] ^ 1].to) {
            arcs[via[v]].cap -= delta;
            arcs[via[v] ^ 1].cap += delta;
            cost += delta * arcs[via[v]].cost;
        }
    }
    return std::max(0.0, cost);
}

double chi2(std::span<const double> h1, std::span<const double> h2) {
    require_same_size(h1, h2, "chi2");
    double s = 0.0;
    for (std::size_t k = 0; k < h1.size(); ++k) {
        const double den = h1[k] + h2[k];
        if (den > 0.0) {
            const double num = h1[k] - h2[k];
            s += num * num / den;
        }
    }
    return 0.5 * s;
}

double rbf(double d, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf: gamma must be positive");
    return std::exp(-d / gamma);
}

double jaccard(std::span<const int> a, std::span<const int> b) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

DistanceMatrix mmpw_floyd(const BoundaryGraph& g) {
    const int n = g.vertex_count;
    DistanceMatrix d(n);
    for (int v = 0; v < n; ++v) d(v, v) = 0.0;
    for (const auto& e : g.edges) {
        if (e.u == e.v) continue;
        d(e.u, e.v) = std::min(d(e.u, e.v), e.weight);
        d(e.v, e.u) = d(e.u, e.v);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            const double ik = d(i, k);
            if (ik == kUnreachable) continue;
            for (int j = 0; j < n; ++j) {
                const double via = std::max(ik, d(k, j));
                if (d(i, j) > via) d(i, j) = via;
            }
        }
    return d;
}

DistanceMatrix mmpw_mst(const BoundaryGraph& g) {
    const int n = g.vertex_count;
    std::vector<WeightedEdge> edges = g.edges;
    std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.weight < b.weight; });

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    std::vector<std::vector<std::pair<int, double>>> tree(n);
    for (const auto& e : edges) {
        const int a = find(e.u), b = find(e.v);
        if (a == b) continue;
        parent[a] = b;
        tree[e.u].emplace_back(e.v, e.weight);
        tree[e.v].emplace_back(e.u, e.weight);
    }

    DistanceMatrix d(n);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        d(s, s) = 0.0;
        stack.assign(1, s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (auto [v, w] : tree[u]) {
                if (d(s, v) != kUnreachable) continue;
                d(s, v) = std::max(d(s, u), w);
                stack.push_back(v);
            }
        }
    }
    return d;
}

DistanceMatrix mmpw_all_pairs(const BoundaryGraph& g, int floyd_limit) {
    return g.vertex_count <= floyd_limit ? mmpw_floyd(g) : mmpw_mst(g);
}

int Dictionary::assign(std::span<const double> x) const {
    int best = 0;
    double best_d = kUnreachable;
    for (int k = 0; k < words; ++k) {
        const double d = squared_distance(x.data(), centroids.data() + static_cast<std::size_t>(k) * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

KMeansResult kmeans(std::span<const double> points, int dim, int k, std::uint64_t seed, int max_iterations,
                    double tolerance) {
    if (dim < 1) throw std::invalid_argument("kmeans: dim must be >= 1");
    if (points.size() % dim != 0) throw std::invalid_argument("kmeans: point buffer is not a multiple of dim");
    const std::size_t n = points.size() / dim;
    if (k < 1) throw std::invalid_argument("kmeans: K must be >= 1");
    if (n < static_cast<std::size_t>(k))
        throw std::invalid_argument("kmeans: fewer points (" + std::to_string(n) + ") than K (" + std::to_string(k) +
                                    ")");

    auto point = [&](std::size_t i) { return points.data() + i * dim; };

    KMeansResult r;
    r.dictionary.words = k;
    r.dictionary.dim = dim;
    r.dictionary.centroids.resize(static_cast<std::size_t>(k) * dim);
    auto centre = [&](int c) { return r.dictionary.centroids.data() + static_cast<std::size_t>(c) * dim; };

    std::mt19937_64 rng(seed);
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::copy_n(point(first), dim, centre(0));
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(point(i), centre(0), dim);
    for (int c = 1; c < k; ++c) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (nearest[i] > nearest[far]) far = i;
        std::copy_n(point(far), dim, centre(c));
        for (std::size_t i = 0; i < n; ++i)
            nearest[i] = std::min(nearest[i], squared_distance(point(i), centre(c), dim));
    }

    r.assignments.assign(n, 0);
    auto assign_all = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = kUnreachable;
            for (int c = 0; c < k; ++c) {
                const double d = squared_distance(point(i), centre(c), dim);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.assignments[i] = best;
            total += best_d;
        }
        r.distortion.push_back(total);
    };

    assign_all();
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::size_t> counts(k);
    for (int it = 0; it < max_iterations; ++it) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = r.assignments[i];
            ++counts[c];
            for (int t = 0; t < dim; ++t) sums[static_cast<std::size_t>(c) * dim + t] += point(i)[t];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its centroid
            double moved = 0.0;
            for (int t = 0; t < dim; ++t) {
                const double m = sums[static_cast<std::size_t>(c) * dim + t] / static_cast<double>(counts[c]);
                moved += (m - centre(c)[t]) * (m - centre(c)[t]);
                centre(c)[t] = m;
            }
            movement = std::max(movement, std::sqrt(moved));
        }
        assign_all();
        ++r.iterations;
        if (movement < tolerance) break;
    }
    return r;
}

}  // namespace mspseg
