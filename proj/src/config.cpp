#include "mspseg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "mspseg/errors.hpp"

namespace mspseg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw InputError("config key '" + key + "': cannot parse '" + text + "'");
    return v;
}

int parse_count(const std::string& key, const std::string& text) {
    const int v = parse_value<int>(key, text);
    if (v < 1) throw InputError("config key '" + key + "' must be >= 1, got " + text);
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(trim(text.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw InputError("config key '" + key + "': expected true/false, got '" + text + "'");
}

}  // namespace

GraphOptions RunConfig::graph_options() const {
    GraphOptions g;
    g.bins_color = bins_color;
    g.bins_flow = bins_flow;
    g.dictionary_sizes = dictionaries;
    g.flow_mode = flow_histogram_mode;
    g.seed = seed;
    return g;
}

SweepOptions RunConfig::sweep_options(int threads) const {
    SweepOptions s;
    s.expansion.max_cycles = max_cycles;
    s.warm_start = warm_start;
    s.threads = threads;
    return s;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "bins_color") {
        cfg.bins_color = parse_count(key, value);
    } else if (key == "bins_flow") {
        cfg.bins_flow = parse_count(key, value);
    } else if (key == "dictionaries") {
        cfg.dictionaries.clear();
        for (const auto& item : split_list(value)) cfg.dictionaries.push_back(parse_count(key, item));
    } else if (key == "taus") {
        if (value.find(':') != std::string::npos) {
            cfg.taus = parse_tau_range(value);
        } else {
            cfg.taus.clear();
            for (const auto& item : split_list(value)) cfg.taus.push_back(parse_value<double>(key, item));
        }
    } else if (key == "max_cycles") {
        cfg.max_cycles = parse_count(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "flow_histogram_mode") {
        if (value == "component")
            cfg.flow_histogram_mode = FlowHistogramMode::component;
        else if (value == "direction")
            cfg.flow_histogram_mode = FlowHistogramMode::direction;
        else
            throw InputError("config key 'flow_histogram_mode' must be component or direction, got '" + value + "'");
    } else if (key == "warm_start") {
        cfg.warm_start = parse_bool(key, value);
    } else {
        throw InputError("unknown config key '" + key + "'");
    }
}

RunConfig parse_config(std::istream& in, const std::string& name, RunConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(name, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw FormatError(name, lineno, "empty key");
        try {
            apply_config_value(base, key, value);
        } catch (const FormatError&) {
            throw;
        } catch (const InputError& e) {
            throw FormatError(name, lineno, e.what());
        }
    }
    validate_config(base);
    return base;
}

RunConfig load_config(const std::filesystem::path& file, RunConfig base) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open config file " + file.string());
    return parse_config(in, file.string(), std::move(base));
}

void validate_config(const RunConfig& cfg) {
    if (cfg.bins_color < 1 || cfg.bins_flow < 1 || cfg.max_cycles < 1)
        throw InputError("config counts must be >= 1");
    if (cfg.dictionaries.empty()) throw InputError("config needs at least one dictionary size");
    for (int k : cfg.dictionaries)
        if (k < 1) throw InputError("dictionary sizes must be >= 1");
    if (cfg.taus.empty()) throw InputError("config needs at least one tau");
    for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
        const double t = cfg.taus[k];
        if (!std::isfinite(t) || t < 0.0 || t > 1.01 + 1e-12)
            throw InputError("tau " + format_real(t) + " outside [0, 1.01]");
        if (k > 0 && !(t > cfg.taus[k - 1])) throw InputError("taus must be strictly increasing");
    }
}

}  // namespace mspseg
