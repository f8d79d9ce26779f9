#pragma once

#include <vector>

namespace mspseg {

// Dinic's blocking-flow max-flow on real capacities. Used for the binary
// min-cuts of expansion moves.
class MaxFlow {
public:
    explicit MaxFlow(int nodes = 0);

    int add_node();
    int node_count() const { return static_cast<int>(head_.size()); }

    // Arc u->v with capacity `cap`, plus the reverse arc v->u with `rev_cap`.
    void add_edge(int u, int v, double cap, double rev_cap = 0.0);

    double solve(int source, int sink);

    // After solve(): true if v is reachable from the source in the residual
    // graph, i.e. lies on the source side of a minimum cut.
    bool source_side(int v) const { return reach_[v] != 0; }

private:
    struct Arc {
        int to;
        int next;
        double cap;
    };

    bool bfs(int s, int t);
    double dfs(int u, int t, double pushed);

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::vector<int> cursor_;
    std::vector<char> reach_;
};

}  // namespace mspseg
