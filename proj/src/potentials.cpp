#include "mspseg/potentials.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
constexpr double kGammaFloor = 1e-9;

double mean_emd(const std::vector<double>* a, const std::vector<double>* b, std::size_t channels) {
    double s = 0.0;
    for (std::size_t c = 0; c < channels; ++c) s += emd_1d(a[c], b[c]);
    return s / static_cast<double>(channels);
}

double color_distance(const VertexFeatures& a, const VertexFeatures& b) {
    return mean_emd(a.color_hist.data(), b.color_hist.data(), 3);
}

double flow_distance(const VertexFeatures& a, const VertexFeatures& b) {
    if (a.flow_empty || b.flow_empty) return kMissing;
    return mean_emd(a.flow_hist.data(), b.flow_hist.data(), a.flow_hist.size());
}

double texture_distance(const VertexFeatures& a, const VertexFeatures& b) {
    double s = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < a.tex_hists.size(); ++k) {
        if (a.tex_empty[k] || b.tex_empty[k]) continue;
        s += chi2(a.tex_hists[k], b.tex_hists[k]);
        ++used;
    }
    return used == 0 ? kMissing : s / used;
}

struct RunningMean {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) {
        if (std::isfinite(v)) {
            sum += v;
            ++n;
        }
    }
};

double finish_gamma(const RunningMean& m, const char* cue, std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& s) {
        if (warnings) warnings->push_back(s);
    };
    if (m.n == 0) {
        warn(std::string("gamma_") + cue + ": no pairs with a defined distance; using 1");
        return 1.0;
    }
    const double g = m.sum / static_cast<double>(m.n);
    if (g < kGammaFloor) {
        warn(std::string("gamma_") + cue + ": degenerate mean distance; floored at 1e-9");
        return kGammaFloor;
    }
    return g;
}

// Missing distances take the cue's gamma, i.e. the neutral value e^-1.
double cue_affinity(double d, double gamma) {
    if (std::isnan(d)) return rbf(gamma, gamma);
    if (d == kUnreachable) return 0.0;
    return rbf(d, gamma);
}

}  // namespace

NodeCosts node_costs(const VideoGraph& g, std::vector<std::string>* warnings) {
    NodeCosts nc;
    nc.vertex_count = static_cast<int>(g.vertices.size());
    nc.label_count = g.label_count();
    nc.cost.assign(static_cast<std::size_t>(nc.vertex_count) * nc.label_count, 0.0);
    for (int v = 0; v < nc.vertex_count; ++v) {
        const auto& ft = g.features[v];
        if (ft.ts_empty) {
            if (warnings) warnings->push_back("vertex " + std::to_string(v) + ": empty label histogram, uniform cost");
            for (int l = 0; l < nc.label_count; ++l) nc(v, l) = -1.0 / nc.label_count;
            continue;
        }
        for (int l = 0; l < nc.label_count; ++l) nc(v, l) = -ft.ts_hist[l];
    }
    return nc;
}

std::vector<double> boundary_distances(const VideoGraph& g) {
    std::vector<double> out(g.spatial_pairs.size(), kUnreachable);
    std::size_t begin = 0;
    while (begin < g.spatial_pairs.size()) {
        const int frame = g.vertices[g.spatial_pairs[begin].i].frame;
        std::size_t end = begin;
        BoundaryGraph bg;
        const int base = g.frame_offset[frame];
        bg.vertex_count = g.frame_offset[frame + 1] - base;
        while (end < g.spatial_pairs.size() && g.vertices[g.spatial_pairs[end].i].frame == frame) {
            const auto& p = g.spatial_pairs[end];
            if (p.adjacent) bg.edges.push_back({p.i - base, p.j - base, p.boundary_strength});
            ++end;
        }
        const DistanceMatrix d = mmpw_all_pairs(bg);
        for (std::size_t k = begin; k < end; ++k) {
            const auto& p = g.spatial_pairs[k];
            out[k] = d(p.i - base, p.j - base);
        }
        begin = end;
    }
    return out;
}

std::vector<PairDistances> spatial_distances(const VideoGraph& g) {
    const std::vector<double> bd = boundary_distances(g);
    std::vector<PairDistances> out(g.spatial_pairs.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& p = g.spatial_pairs[k];
        const auto& a = g.features[p.i];
        const auto& b = g.features[p.j];
        out[k].boundary = bd[k];
        out[k].color = color_distance(a, b);
        out[k].flow = flow_distance(a, b);
        out[k].texture = texture_distance(a, b);
    }
    return out;
}

std::vector<PairDistances> temporal_distances(const VideoGraph& g) {
    std::vector<PairDistances> out(g.temporal_pairs.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& p = g.temporal_pairs[k];
        const auto& a = g.features[p.i];
        const auto& b = g.features[p.j];
        out[k].boundary = kMissing;
        out[k].flow = kMissing;
        out[k].texture = kMissing;
        out[k].color = color_distance(a, b);
        out[k].overlap = jaccard(a.traj_ids, b.traj_ids);
    }
    return out;
}

CueGammas compute_gammas(const std::vector<PairDistances>& spatial, const std::vector<PairDistances>& temporal,
                         std::vector<std::string>* warnings) {
    RunningMean b, c, o, x;
    for (const auto& d : spatial) {
        b.add(d.boundary);
        c.add(d.color);
        o.add(d.flow);
        x.add(d.texture);
    }
    for (const auto& d : temporal) c.add(d.color);
    CueGammas g;
    g.boundary = finish_gamma(b, "b", warnings);
    g.color = finish_gamma(c, "c", warnings);
    g.flow = finish_gamma(o, "o", warnings);
    g.texture = finish_gamma(x, "x", warnings);
    return g;
}

CueGammas compute_gammas(const VideoGraph& g, std::vector<std::string>* warnings) {
    return compute_gammas(spatial_distances(g), temporal_distances(g), warnings);
}

std::vector<PairWeight> spatial_weights(const VideoGraph& g, const std::vector<PairDistances>& d,
                                        const CueGammas& gammas) {
    if (d.size() != g.spatial_pairs.size()) throw InvariantError("spatial_weights: distance count mismatch");
    std::vector<PairWeight> out(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        PairWeight& w = out[k];
        w.i = g.spatial_pairs[k].i;
        w.j = g.spatial_pairs[k].j;
        w.kind = PairKind::spatial;
        w.psi_b = cue_affinity(d[k].boundary, gammas.boundary);
        w.psi_c = cue_affinity(d[k].color, gammas.color);
        w.psi_o = cue_affinity(d[k].flow, gammas.flow);
        w.psi_x = cue_affinity(d[k].texture, gammas.texture);
        w.weight = (w.psi_b + w.psi_c + w.psi_o + w.psi_x) / 4.0;
    }
    return out;
}

std::vector<PairWeight> temporal_weights(const VideoGraph& g, const std::vector<PairDistances>& d,
                                         const CueGammas& gammas) {
    if (d.size() != g.temporal_pairs.size()) throw InvariantError("temporal_weights: distance count mismatch");
    std::vector<PairWeight> out(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        PairWeight& w = out[k];
        w.i = g.temporal_pairs[k].i;
        w.j = g.temporal_pairs[k].j;
        w.kind = PairKind::temporal;
        w.psi_r = d[k].overlap;
        w.psi_c = cue_affinity(d[k].color, gammas.color);
        w.weight = (w.psi_r + w.psi_c) / 2.0;
    }
    return out;
}

PotentialSet compute_potentials(const VideoGraph& g) {
    PotentialSet pot;
    pot.warnings = g.warnings;
    pot.node = node_costs(g, &pot.warnings);
    const auto sd = spatial_distances(g);
    const auto td = temporal_distances(g);
    pot.gammas = compute_gammas(sd, td, &pot.warnings);
    pot.spatial = spatial_weights(g, sd, pot.gammas);
    pot.temporal = temporal_weights(g, td, pot.gammas);
    return pot;
}

std::vector<PottsEdge> threshold_edges(const PotentialSet& pot, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw InputError("tau must be a finite value >= 0");
    std::vector<PottsEdge> out;
    for (const auto* set : {&pot.spatial, &pot.temporal})
        for (const auto& w : *set)
            if (w.weight >= tau) out.push_back({w.i, w.j, w.weight, w.kind});
    return out;
}

void write_pair_csv(std::ostream& out, const PotentialSet& pot) {
    out << "i,j,kind,psi_b,psi_c,psi_o,psi_x,psi_r,weight\n";
    for (const auto* set : {&pot.spatial, &pot.temporal})
        for (const auto& w : *set)
            out << w.i << ',' << w.j << ',' << (w.kind == PairKind::spatial ? "spatial" : "temporal") << ','
                << format_real(w.psi_b) << ',' << format_real(w.psi_c) << ',' << format_real(w.psi_o) << ','
                << format_real(w.psi_x) << ',' << format_real(w.psi_r) << ',' << format_real(w.weight) << '\n';
}

}  // namespace mspseg
