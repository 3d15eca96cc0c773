#pragma once

#include "gethlab/observables.hpp"

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

// Generalized-ETH deviation statistics, scaling, long-time averages and region labels.
namespace gethlab::geth {

using cplx = std::complex<double>;

struct EthRecord {
    int n = 0;
    double energy_per_particle = 0.0;
    double deltaT = 0.0;       // |T_n/d_n - O_ME(E)| / eta
    double deltaLambda = 0.0;  // max_a |lambda_a - T_n/d_n| / eta
};

/// One record per projection. `microcanonical` maps E_n/N to O_ME.
std::vector<EthRecord> deviation_records(const std::vector<observables::ProjectedObservable>& projections, int N,
                                         double eta, const std::function<double(double)>& microcanonical);

/// sqrt( sum |x - mean|^2 / (n - 1) ) over a complex population (plain sample std for real input).
double sample_sigma(std::span<const cplx> deviations);

struct SigmaPoint {
    int N = 0;
    double sigma = 0.0;
    std::size_t count = 0;
};

struct ScalingResult {
    std::string observable;
    std::vector<int> sizes;
    std::vector<double> sigmas;
    double exponent = 0.0;   // slope of log sigma vs log N
    double amplitude = 0.0;  // sigma ~ amplitude * N^exponent
    double residual = 0.0;   // RMS of the log-space fit residuals
};

/// Least-squares line through (log N, log sigma). Needs >= 3 sizes with sigma > 0.
ScalingResult scaling_fit(std::span<const SigmaPoint> points, std::string observable);

struct ExceedanceTable {
    std::vector<int> sizes;
    std::vector<double> bounds;
    std::vector<std::vector<std::size_t>> counts;  // [size][bound]: deviations strictly above the bound
};

ExceedanceTable exceedance_counts(const std::map<int, std::vector<double>>& deviations_by_size,
                                  std::span<const double> bounds);

/// Coefficients over the block-diagonalized eigenbasis, keyed by subspace index.
struct InitialCondition {
    std::map<int, std::array<cplx, 3>> coefficients;

    double norm() const;
    /// Throws std::invalid_argument unless the norm is 1 within 1e-12.
    void validate() const;

    static InitialCondition uniform_witness(int subspace);
    static InitialCondition eigenvector_witness(int subspace, int alpha);
};

/// sum_{n,a} |c_{n,a}|^2 lambda_{n,a}. Support outside `projections` throws std::out_of_range.
cplx long_time_average(const InitialCondition& ic, const std::vector<observables::ProjectedObservable>& projections);

enum class RegionLabel {
    rotation_breaking,
    reflection_breaking,
    mixed,
    thermal_candidate,
    symmetric_nonthermal,
    insufficient_data,
};
std::string to_string(RegionLabel label);

/// Per-subspace summary consumed by the classifier.
struct SubspaceSummary {
    double energy_per_particle = 0.0;
    double max_abs_imbalance = 0.0;  // max_a |lambda^(I)|
    double max_abs_current = 0.0;    // max_a |lambda^(C)|
    double h12_deviation = 0.0;      // T^(h12)/3 - <h12/N>_ME; NaN when no microcanonical value
};

struct SizeTable {
    int N = 0;
    std::vector<SubspaceSummary> rows;
};

struct ClassifierConfig {
    double window = 0.1;
    double imbalance_bound = 0.1;
    double current_bound = 0.17320508075688773;  // sqrt(3)/10
    double all_fraction = 0.99;   // "every subspace" tolerance
    double none_fraction = 0.01;  // "no subspace" tolerance
    std::size_t min_subspaces = 5;
};

struct WindowClassification {
    double lo = 0.0;
    double hi = 0.0;
    RegionLabel label = RegionLabel::insufficient_data;
    std::size_t count = 0;
    double fraction_imbalance = 0.0;  // share of subspaces above the imbalance bound
    double fraction_current = 0.0;
    double max_imbalance = 0.0;
    double max_current = 0.0;
    std::vector<std::pair<int, double>> h12_spread;  // (N, RMS h12 deviation) for sizes with data
    double h12_slope = 0.0;                          // log-log slope of the spread, NaN if < 2 sizes
    bool shrinking = false;

    double center() const { return 0.5 * (lo + hi); }
};

/// Labels E/N windows of the largest size in `tables`; the other sizes feed the h12 shrink test.
std::vector<WindowClassification> classify_regions(const std::vector<SizeTable>& tables,
                                                   const ClassifierConfig& config = {});

}  // namespace gethlab::geth
