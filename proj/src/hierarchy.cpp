#include "mspseg/hierarchy.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mspseg/errors.hpp"
#include "mspseg/parallel.hpp"

namespace mspseg {

namespace {
double round9(double v) { return std::round(v * 1e9) / 1e9; }
}  // namespace

std::vector<double> default_taus() {
    std::vector<double> t;
    for (int k = 30; k <= 95; k += 5) t.push_back(k / 100.0);
    t.push_back(1.01);
    return t;
}

std::vector<double> parse_tau_range(const std::string& spec) {
    double a = 0, step = 0, b = 0;
    char c1 = 0, c2 = 0;
    int consumed = 0;
    if (std::sscanf(spec.c_str(), "%lf%c%lf%c%lf%n", &a, &c1, &step, &c2, &b, &consumed) != 5 || c1 != ':' ||
        c2 != ':' || consumed != static_cast<int>(spec.size()))
        throw InputError("malformed tau range '" + spec + "', expected a:step:b");
    if (!(step > 0.0)) throw InputError("tau range step must be positive");
    if (b < a) throw InputError("tau range end must be >= start");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (long k = 0; k < count; ++k) out.push_back(round9(a + k * step));
    return out;
}

HierarchyResult sweep_tau(const PotentialSet& pot, const std::vector<double>& taus, const SweepOptions& opts) {
    if (taus.empty()) throw InputError("sweep_tau: empty tau list");
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (!(taus[k] >= 0.0) || taus[k] > 1.01 + 1e-12) throw InputError("sweep_tau: tau outside [0, 1.01]");
        if (k > 0 && !(taus[k] > taus[k - 1])) throw InputError("sweep_tau: taus must be strictly increasing");
    }
    HierarchyResult h;
    h.levels.resize(taus.size());
    if (opts.warm_start) {
        for (std::size_t k = 0; k < taus.size(); ++k)
            h.levels[k] = infer(pot, taus[k], opts.expansion, k ? &h.levels[k - 1].labeling : nullptr);
    } else {
        parallel_for(taus.size(), opts.threads,
                     [&](std::size_t k) { h.levels[k] = infer(pot, taus[k], opts.expansion); });
    }
    for (std::size_t k = 1; k < h.levels.size(); ++k)
        if (h.levels[k].edge_count > h.levels[k - 1].edge_count)
            throw InvariantError("sweep_tau: edge count increased with tau");
    return h;
}

std::string tau_dir_name(double tau) {
    char buf[48];
    if (std::abs(tau * 100.0 - std::round(tau * 100.0)) < 1e-7)
        std::snprintf(buf, sizeof buf, "tau_%.2f", tau);
    else
        std::snprintf(buf, sizeof buf, "tau_%.9g", tau);
    return buf;
}

void write_hierarchy_csv(std::ostream& out, const HierarchyResult& h) {
    out << "tau,num_labels,energy,edge_count\n";
    for (const auto& l : h.levels)
        out << format_real(l.tau) << ',' << l.num_labels << ',' << format_real(l.labeling.energy) << ','
            << l.edge_count << '\n';
}

}  // namespace mspseg
