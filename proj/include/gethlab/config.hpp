#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gethlab::io {

/// Flat key = value run configuration. Unknown keys and malformed values raise ConfigError.
struct RunConfig {
    double J = 1.0;
    double U = -5.0;
    std::vector<int> sizes{40, 60, 80, 120, 160};  // scaling sweep
    int region_N = 120;                             // size whose windows are labelled
    int stats_N = 240;                              // size for level statistics (s-resolved r = 1 sectors)
    double shell_lo = -3.1;
    double shell_hi = -2.3;
    double window = 0.1;
    std::vector<double> fig2_energies{-4.2, -1.4};
    double fig2_halfwidth = 0.05;
    std::vector<double> exceedance_bounds{0.01, 0.02, 0.05, 0.1};

    double imbalance_bound = 0.1;
    double current_bound = 0.17320508075688773;
    double all_fraction = 0.99;
    double none_fraction = 0.01;
    int min_subspaces = 5;
    int min_levels = 50;
    double s1_chaos_max = 0.5;

    std::string mode = "fast";
    double classical_lo = -4.7;
    double classical_hi = -0.8;
    double classical_step = 0.3;
    int ensemble_count = 200;
    double ensemble_dE = 0.05;
    double t_max = 1000.0;
    double t_transient = 100.0;
    double sample_interval = 0.1;
    double rtol = 5e-14;
    double atol = 1e-15;
    double fixed_step = 5e-4;
    double fast_threshold = 0.22;
    double paper_threshold = 0.3;

    std::uint64_t mc_samples = 100'000'000;
    double mc_dE = 0.01;
    double mc_lo = -4.95;
    double mc_hi = -0.7;
    double mc_step = 0.05;
    std::string mc_domain = "sphere";

    std::uint64_t seed = 1;
    int workers = 0;  // 0 = OpenMP default
    std::string out = "out";
    std::string cache = "cache";

    /// Ordered key/value view; `to_text` and `from_text` are inverse to each other.
    std::map<std::string, std::string> to_map() const;
    std::string to_text() const;
    static RunConfig from_text(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);

    /// Range and consistency checks; throws ConfigError.
    void validate() const;
};

}  // namespace gethlab::io
