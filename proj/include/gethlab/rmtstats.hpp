#pragma once

#include "gethlab/rng.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Nearest-neighbour spacing statistics: unfolding and Berry-Robnik fits.
namespace gethlab::rmtstats {

struct SpacingWindow {
    double center = 0.0;  // E/N
    double width = 0.1;
    std::string sector;
    int degree = 4;  // polynomial degree actually used for the staircase
    std::vector<double> spacings;
};

class TooFewLevels : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sorted-or-not levels of one sector inside one window. Fits the staircase with a degree-4
/// polynomial (degree 3, then 1, if the fit is not increasing over the window), maps
/// e_k = poly(E_k) and returns s_k = e_{k+1} - e_k normalized to unit mean.
SpacingWindow unfold(std::span<const double> levels, double center = 0.0, double width = 0.1,
                     std::string sector = {}, std::size_t min_levels = 50);

/// Berry-Robnik density with regular fraction rho.
double berry_robnik_pdf(double s, double rho);

struct BerryRobnikFit {
    double rho = 0.0;
    double log_likelihood = 0.0;
    std::size_t count = 0;
    double chaotic_fraction() const { return 1.0 - rho; }
};

/// Maximum-likelihood rho on [0, 1] by golden-section search.
BerryRobnikFit fit_rho(std::span<const double> spacings, double tolerance = 1e-4);

struct SectorLevels {
    std::string label;
    std::vector<double> energies;  // total energies (not per particle)
};

struct ChaosPoint {
    double center = 0.0;  // E/N
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;  // pooled spacings
    std::vector<std::string> sectors;
    BerryRobnikFit fit;
};

struct ChaosProfile {
    std::vector<ChaosPoint> points;
    std::vector<std::string> skipped;  // one diagnostic per dropped window
};

/// Windows of `width` in E/N aligned to multiples of the width. Each sector is unfolded on its
/// own; spacings are pooled per window and fitted once.
ChaosProfile chaos_profile(std::span<const SectorLevels> sectors, int N, double width = 0.1,
                           std::size_t min_levels = 50);

// Synthetic spacing generators (unit mean) used as oracles.
std::vector<double> poisson_spacings(std::size_t n, rng::Engine& gen);
std::vector<double> wigner_spacings(std::size_t n, rng::Engine& gen);
/// Spacings of the superposition of a Poisson sequence with density rho and an independent
/// Wigner-surmise renewal sequence with density 1 - rho.
std::vector<double> superposed_spacings(std::size_t n, double rho, rng::Engine& gen);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};
/// One-sample Kolmogorov-Smirnov test against `cdf` (asymptotic p-value).
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Pearson correlation of two spacing sequences over their common length.
double spacing_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace gethlab::rmtstats
