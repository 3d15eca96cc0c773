#include "gethlab/config.hpp"

#include "gethlab/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace gethlab::io {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    }
    return out;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Field {
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

template <class T>
Field number(T RunConfig::*m) {
    return {[m](const RunConfig& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return fmt_double(c.*m);
                } else {
                    return std::to_string(c.*m);
                }
            },
            [m](RunConfig& c, const std::string& k, const std::string& v) {
                if constexpr (std::is_floating_point_v<T>) {
                    c.*m = parse_double(k, v);
                } else {
                    c.*m = parse_int<T>(k, v);
                }
            }};
}

Field text(std::string RunConfig::*m) {
    return {[m](const RunConfig& c) { return c.*m; }, [m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
}

Field int_list(std::vector<int> RunConfig::*m) {
    return {[m](const RunConfig& c) { return fmt::format("{}", fmt::join(c.*m, ",")); },
            [m](RunConfig& c, const std::string& k, const std::string& v) {
                (c.*m).clear();
                for (const auto& s : split_list(v)) (c.*m).push_back(parse_int<int>(k, s));
            }};
}

Field double_list(std::vector<double> RunConfig::*m) {
    return {[m](const RunConfig& c) {
                std::vector<std::string> parts;
                for (double d : c.*m) parts.push_back(fmt_double(d));
                return fmt::format("{}", fmt::join(parts, ","));
            },
            [m](RunConfig& c, const std::string& k, const std::string& v) {
                (c.*m).clear();
                for (const auto& s : split_list(v)) (c.*m).push_back(parse_double(k, s));
            }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f{
        {"J", number(&RunConfig::J)},
        {"U", number(&RunConfig::U)},
        {"sizes", int_list(&RunConfig::sizes)},
        {"region_N", number(&RunConfig::region_N)},
        {"stats_N", number(&RunConfig::stats_N)},
        {"shell_lo", number(&RunConfig::shell_lo)},
        {"shell_hi", number(&RunConfig::shell_hi)},
        {"window", number(&RunConfig::window)},
        {"fig2_energies", double_list(&RunConfig::fig2_energies)},
        {"fig2_halfwidth", number(&RunConfig::fig2_halfwidth)},
        {"exceedance_bounds", double_list(&RunConfig::exceedance_bounds)},
        {"imbalance_bound", number(&RunConfig::imbalance_bound)},
        {"current_bound", number(&RunConfig::current_bound)},
        {"all_fraction", number(&RunConfig::all_fraction)},
        {"none_fraction", number(&RunConfig::none_fraction)},
        {"min_subspaces", number(&RunConfig::min_subspaces)},
        {"min_levels", number(&RunConfig::min_levels)},
        {"s1_chaos_max", number(&RunConfig::s1_chaos_max)},
        {"mode", text(&RunConfig::mode)},
        {"classical_lo", number(&RunConfig::classical_lo)},
        {"classical_hi", number(&RunConfig::classical_hi)},
        {"classical_step", number(&RunConfig::classical_step)},
        {"ensemble_count", number(&RunConfig::ensemble_count)},
        {"ensemble_dE", number(&RunConfig::ensemble_dE)},
        {"t_max", number(&RunConfig::t_max)},
        {"t_transient", number(&RunConfig::t_transient)},
        {"sample_interval", number(&RunConfig::sample_interval)},
        {"rtol", number(&RunConfig::rtol)},
        {"atol", number(&RunConfig::atol)},
        {"fixed_step", number(&RunConfig::fixed_step)},
        {"fast_threshold", number(&RunConfig::fast_threshold)},
        {"paper_threshold", number(&RunConfig::paper_threshold)},
        {"mc_samples", number(&RunConfig::mc_samples)},
        {"mc_dE", number(&RunConfig::mc_dE)},
        {"mc_lo", number(&RunConfig::mc_lo)},
        {"mc_hi", number(&RunConfig::mc_hi)},
        {"mc_step", number(&RunConfig::mc_step)},
        {"mc_domain", text(&RunConfig::mc_domain)},
        {"seed", number(&RunConfig::seed)},
        {"workers", number(&RunConfig::workers)},
        {"out", text(&RunConfig::out)},
        {"cache", text(&RunConfig::cache)},
    };
    return f;
}

}  // namespace

std::map<std::string, std::string> RunConfig::to_map() const {
    std::map<std::string, std::string> m;
    for (const auto& [k, f] : fields()) m[k] = f.get(*this);
    return m;
}

std::string RunConfig::to_text() const {
    std::string s = "# geth-lab run configuration\n";
    for (const auto& [k, v] : to_map()) s += k + " = " + v + "\n";
    return s;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.set(*this, key, value);
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid config: " + what);
    };
    require(!sizes.empty(), "sizes must not be empty");
    for (int n : sizes) require(n > 0, "sizes must be positive");
    require(region_N > 0 && stats_N > 0, "region_N and stats_N must be positive");
    require(shell_lo < shell_hi, "shell_lo < shell_hi");
    require(window > 0.0, "window > 0");
    require(fig2_halfwidth > 0.0, "fig2_halfwidth > 0");
    require(imbalance_bound > 0.0 && current_bound > 0.0, "symmetry-breaking bounds > 0");
    require(all_fraction > 0.0 && all_fraction <= 1.0 && none_fraction >= 0.0 && none_fraction < all_fraction,
            "0 <= none_fraction < all_fraction <= 1");
    require(min_subspaces > 0 && min_levels >= 3, "min_subspaces > 0, min_levels >= 3");
    require(mode == "fast" || mode == "paper", "mode must be fast or paper");
    require(classical_step > 0.0 && classical_lo <= classical_hi, "classical grid");
    require(ensemble_count > 0 && ensemble_dE > 0.0, "ensemble_count > 0, ensemble_dE > 0");
    require(t_max > 0.0 && t_transient >= 0.0 && t_transient < t_max && sample_interval > 0.0, "time grid");
    require(rtol > 0.0 && atol > 0.0 && fixed_step > 0.0, "integrator tolerances and step > 0");
    require(mc_samples > 0 && mc_dE > 0.0 && mc_step > 0.0 && mc_lo < mc_hi, "Monte Carlo grid");
    require(mc_domain == "ball" || mc_domain == "sphere", "mc_domain must be ball or sphere");
    require(workers >= 0, "workers >= 0");
}

}  // namespace gethlab::io
