#include "mspseg/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mspseg {

namespace {
constexpr double kEps = 1e-12;
}

MaxFlow::MaxFlow(int nodes) : head_(nodes, -1) {}

int MaxFlow::add_node() {
    head_.push_back(-1);
    return node_count() - 1;
}

void MaxFlow::add_edge(int u, int v, double cap, double rev_cap) {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count())
        throw std::out_of_range("MaxFlow::add_edge: node out of range");
    if (cap < 0.0 || rev_cap < 0.0) throw std::invalid_argument("MaxFlow::add_edge: negative capacity");
    arcs_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, head_[v], rev_cap});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
}

bool MaxFlow::bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
            const Arc& arc = arcs_[a];
            if (arc.cap > kEps && level_[arc.to] < 0) {
                level_[arc.to] = level_[u] + 1;
                q.push(arc.to);
            }
        }
    }
    return level_[t] >= 0;
}

double MaxFlow::dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& a = cursor_[u]; a >= 0; a = arcs_[a].next) {
        Arc& arc = arcs_[a];
        if (arc.cap <= kEps || level_[arc.to] != level_[u] + 1) continue;
        const double got = dfs(arc.to, t, std::min(pushed, arc.cap));
        if (got > 0.0) {
            arc.cap -= got;
            arcs_[a ^ 1].cap += got;
            return got;
        }
    }
    return 0.0;
}

double MaxFlow::solve(int source, int sink) {
    if (source == sink) throw std::invalid_argument("MaxFlow::solve: source == sink");
    double total = 0.0;
    while (bfs(source, sink)) {
        cursor_ = head_;
        while (double f = dfs(source, sink, std::numeric_limits<double>::infinity())) total += f;
    }
    reach_.assign(head_.size(), 0);
    for (std::size_t v = 0; v < head_.size(); ++v) reach_[v] = level_[v] >= 0;
    return total;
}

}  // namespace mspseg
