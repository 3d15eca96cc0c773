#pragma once

#include "gethlab/classical.hpp"
#include "gethlab/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

// Monte Carlo microcanonical averages of classical observables on thin energy shells.
namespace gethlab::microcan {

enum class Observable { hopping12, current, imbalance_re, imbalance_im, imbalance_abs, constant_one };

double evaluate(Observable o, const classical::ClassicalState& s);
Observable observable_from_name(const std::string& name);

enum class Domain {
    ball,    // sum(q^2 + p^2) <= 2
    sphere,  // sum(q^2 + p^2) == 2
};

struct McConfig {
    double deltaE = 0.01;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    Domain domain = Domain::ball;
    std::uint64_t batch_size = 1u << 16;
    std::uint64_t min_accepted = 1000;
};

struct McEstimate {
    double energy = 0.0;  // E/N
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t accepted = 0;
    std::uint64_t total = 0;
    double deltaE = 0.0;
    bool low_confidence = true;
};

/// One uniform draw from the domain.
classical::ClassicalState draw_state(rng::Engine& gen, Domain domain);

/// Per-shell counts and sums for one batch.
struct ShellSums {
    std::vector<std::uint64_t> count;
    std::vector<double> sum;
    std::vector<double> sum2;
    std::uint64_t drawn = 0;

    explicit ShellSums(std::size_t shells = 0) : count(shells, 0), sum(shells, 0.0), sum2(shells, 0.0) {}
};

/// Batch b draws from stream (seed, b). The last batch may be short so the total is exactly n_samples.
std::uint64_t batch_count(const McConfig& cfg);
void accumulate_batch(const classical::Coupling& c, Observable o, std::span<const double> grid, const McConfig& cfg,
                      std::uint64_t batch, ShellSums& out);
/// Folds batch sums in the given order (compensated) into estimates.
std::vector<McEstimate> finalize(std::span<const ShellSums> batches, std::span<const double> grid, const McConfig& cfg);

/// Single-shell estimate.
McEstimate mc_average(const classical::Coupling& c, Observable o, double E, const McConfig& cfg);

/// One pass over the phase space feeding every grid shell |H/N - E_g| <= deltaE.
class McGrid {
public:
    McGrid(std::vector<double> energies, std::vector<McEstimate> estimates);

    const std::vector<double>& energies() const { return energies_; }
    const std::vector<McEstimate>& estimates() const { return estimates_; }

    /// Linear interpolation; throws std::out_of_range outside [front, back].
    double operator()(double E) const;
    double standard_error_at(double E) const;

private:
    std::vector<double> energies_;
    std::vector<McEstimate> estimates_;
};

/// OpenMP-parallel over batches; batches reduced in batch order so results do not depend on threads.
McGrid mc_grid(const classical::Coupling& c, Observable o, std::span<const double> grid, const McConfig& cfg);

/// Ascending grid lo, lo+step, ..., covering hi.
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace gethlab::microcan
