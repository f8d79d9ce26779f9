#include "mspseg/inference.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "mspseg/errors.hpp"
#include "mspseg/maxflow.hpp"

namespace mspseg {

namespace {

bool improves(double next, double current) { return next < current - 1e-12 * (1.0 + std::abs(current)); }

void check_labels(std::span<const int> labels, const NodeCosts& phi) {
    if (static_cast<int>(labels.size()) != phi.vertex_count)
        throw InputError("labeling covers " + std::to_string(labels.size()) + " vertices, expected " +
                         std::to_string(phi.vertex_count));
    for (int l : labels)
        if (l < 0 || l >= phi.label_count) throw InputError("label " + std::to_string(l) + " out of range");
}

}  // namespace

double energy(std::span<const int> labels, const NodeCosts& phi, std::span<const PottsEdge> edges) {
    check_labels(labels, phi);
    double e = 0.0;
    for (int v = 0; v < phi.vertex_count; ++v) e += phi(v, labels[v]);
    for (const auto& ed : edges)
        if (labels[ed.i] != labels[ed.j]) e += ed.weight;
    return e;
}

EnergyBreakdown energy_breakdown(std::span<const int> labels, const NodeCosts& phi,
                                 std::span<const PottsEdge> edges) {
    check_labels(labels, phi);
    EnergyBreakdown b;
    for (int v = 0; v < phi.vertex_count; ++v) b.unary_total += phi(v, labels[v]);
    b.violated.reserve(edges.size());
    for (const auto& ed : edges) {
        const bool cut = labels[ed.i] != labels[ed.j];
        b.violated.push_back(cut);
        if (cut) b.pairwise_total += ed.weight;
    }
    return b;
}

Labeling brute_force(const NodeCosts& phi, std::span<const PottsEdge> edges) {
    const int n = phi.vertex_count, L = phi.label_count;
    if (L < 1) throw InputError("brute_force: empty label set");
    double states = 1.0;
    for (int v = 0; v < n; ++v) states *= L;
    if (states > 1e7) throw InputError("brute_force: instance too large (L^|V| > 1e7)");

    std::vector<int> cur(n, 0);
    Labeling best{cur, energy(cur, phi, edges)};
    for (;;) {
        int v = n - 1;
        while (v >= 0 && ++cur[v] == L) cur[v--] = 0;
        if (v < 0) break;
        const double e = energy(cur, phi, edges);
        if (e < best.energy) best = {cur, e};
    }
    return best;
}

Labeling icm(const NodeCosts& phi, std::span<const PottsEdge> edges, const Labeling& init,
             std::vector<double>* trace) {
    const int n = phi.vertex_count, L = phi.label_count;
    Labeling cur = init;
    cur.energy = energy(cur.labels, phi, edges);
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : edges) {
        adj[e.i].emplace_back(e.j, e.weight);
        adj[e.j].emplace_back(e.i, e.weight);
    }
    std::vector<double> local(L);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            for (int l = 0; l < L; ++l) local[l] = phi(v, l);
            for (auto [u, w] : adj[v]) {
                local[cur.labels[u]] -= w;  // every label but y_u pays w
            }
            int best = 0;
            for (int l = 1; l < L; ++l)
                if (local[l] < local[best]) best = l;
            const int old = cur.labels[v];
            if (best != old && improves(local[best], local[old])) {
                cur.labels[v] = best;
                cur.energy += local[best] - local[old];
                changed = true;
                if (trace) trace->push_back(cur.energy);
            }
        }
    }
    cur.energy = energy(cur.labels, phi, edges);
    return cur;
}

Labeling alpha_expansion(const NodeCosts& phi, std::span<const PottsEdge> edges, const Labeling& init,
                         const ExpansionOptions& opts, std::vector<MoveRecord>* log) {
    const int n = phi.vertex_count, L = phi.label_count;
    for (const auto& e : edges)
        if (!(e.weight >= 0.0)) throw InputError("alpha_expansion: negative edge weight");
    Labeling cur = init;
    cur.energy = energy(cur.labels, phi, edges);

    std::vector<double> to_source(n), to_sink(n);
    std::vector<int> proposal(n);
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        bool improved = false;
        for (int alpha = 0; alpha < L; ++alpha) {
            // x_i = 1 (sink side) means vertex i switches to alpha.
            // to_source[i] is the s->i capacity, paid when x_i = 1;
            // to_sink[i] is the i->t capacity, paid when x_i = 0.
            double constant = 0.0;
            std::fill(to_source.begin(), to_source.end(), 0.0);
            std::fill(to_sink.begin(), to_sink.end(), 0.0);
            auto add_linear = [&](int i, double c) {  // c * x_i
                if (c >= 0.0) {
                    to_source[i] += c;
                } else {
                    constant += c;
                    to_sink[i] -= c;
                }
            };
            for (int i = 0; i < n; ++i) {
                const double keep = phi(i, cur.labels[i]);
                const double take = phi(i, alpha);
                const double shift = std::min(keep, take);
                constant += shift;
                to_sink[i] += keep - shift;
                to_source[i] += take - shift;
            }
            MaxFlow net(n + 2);
            const int s = n, t = n + 1;
            for (const auto& e : edges) {
                const int yi = cur.labels[e.i], yj = cur.labels[e.j];
                const double a = yi != yj ? e.weight : 0.0;
                const double b = yi != alpha ? e.weight : 0.0;
                const double c = alpha != yj ? e.weight : 0.0;
                // E = a + (c-a) x_i + (0-c) x_j + (b+c-a) (1-x_i) x_j
                constant += a;
                add_linear(e.i, c - a);
                add_linear(e.j, -c);
                const double pair = b + c - a;
                if (pair < -1e-12) throw InvariantError("alpha_expansion: non-submodular move term");
                if (pair > 0.0) net.add_edge(e.i, e.j, pair);
            }
            for (int i = 0; i < n; ++i) {
                // Cancel the common part so each vertex has at most one terminal arc.
                const double common = std::min(to_source[i], to_sink[i]);
                constant += common;
                if (to_source[i] - common > 0.0) net.add_edge(s, i, to_source[i] - common);
                if (to_sink[i] - common > 0.0) net.add_edge(i, t, to_sink[i] - common);
            }
            const double cut = net.solve(s, t);
            for (int i = 0; i < n; ++i) proposal[i] = net.source_side(i) ? cur.labels[i] : alpha;
            const double next = energy(proposal, phi, edges);

            MoveRecord rec{cycle, alpha, cur.energy, cur.energy, cut + constant, false};
            if (improves(next, cur.energy)) {
                cur.labels = proposal;
                cur.energy = next;
                rec.energy_after = next;
                rec.accepted = true;
                improved = true;
            }
            if (log) log->push_back(rec);
        }
        if (!improved) break;
    }
    return cur;
}

Labeling unary_argmin(const NodeCosts& phi) {
    Labeling out;
    out.labels.resize(phi.vertex_count);
    for (int v = 0; v < phi.vertex_count; ++v) {
        int best = 0;
        for (int l = 1; l < phi.label_count; ++l)
            if (phi(v, l) < phi(v, best)) best = l;
        out.labels[v] = best;
        out.energy += phi(v, best);
    }
    return out;
}

std::vector<int> dense_relabel(std::span<const int> labels) {
    std::unordered_map<int, int> remap;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        auto [it, _] = remap.try_emplace(l, static_cast<int>(remap.size()));
        out.push_back(it->second);
    }
    return out;
}

InferenceResult infer(const PotentialSet& pot, double tau, const ExpansionOptions& opts, const Labeling* init) {
    InferenceResult r;
    r.tau = tau;
    const auto edges = threshold_edges(pot, tau);
    r.edge_count = edges.size();
    Labeling start = init ? *init : unary_argmin(pot.node);
    start.energy = energy(start.labels, pot.node, edges);
    r.initial_energy = start.energy;
    r.labeling = alpha_expansion(pot.node, edges, start, opts, &r.moves);
    if (r.labeling.energy > r.initial_energy) throw InvariantError("infer: energy increased");
    r.dense = dense_relabel(r.labeling.labels);
    int k = 0;
    for (int l : r.dense) k = std::max(k, l + 1);
    r.num_labels = k;
    return r;
}

void write_move_log(std::ostream& out, std::span<const MoveRecord> moves) {
    out << "cycle,alpha,energy_before,energy_after\n";
    for (const auto& m : moves)
        out << m.cycle << ',' << m.alpha << ',' << format_real(m.energy_before) << ','
            << format_real(m.energy_after) << '\n';
}

}  // namespace mspseg
