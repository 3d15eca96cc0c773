#pragma once

#include "gethlab/cache.hpp"
#include "gethlab/classical.hpp"
#include "gethlab/config.hpp"
#include "gethlab/geth.hpp"
#include "gethlab/microcan.hpp"
#include "gethlab/observables.hpp"
#include "gethlab/rmtstats.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Analysis steps shared by the command-line tool and the acceptance suite.
namespace gethlab::pipeline {

using Log = std::function<void(const std::string&)>;

struct Context {
    io::RunConfig config;
    io::SpectrumCache cache;
    std::size_t diagonalizations = 0;
    Log log;

    Context(io::RunConfig cfg, std::filesystem::path cache_dir, Log log = {});
    spectra::ModelParams params(int N) const;
    void note(const std::string& msg) const;
};

/// r = 1 and omega sectors with eigenvectors, from the cache when possible. Fresh solves are
/// stored together with the omega^2 marker entry.
spectra::SectorSet sector_set(Context& ctx, int N);

/// Energies of the reflection-resolved r = 1 sectors (s = +1, s = -1), cached.
std::vector<rmtstats::SectorLevels> reflection_levels(Context& ctx, int N);

struct SizeAnalysis {
    int N = 0;
    std::vector<spectra::DegenerateSubspace> subspaces;
    std::size_t unpaired_r1 = 0;
    double max_pairing_residual = 0.0;
    observables::ProjectionTable h12;
    observables::ProjectionTable current;
    observables::ProjectionTable imbalance;

    const observables::ProjectionTable& table(observables::Kind k) const;
};

SizeAnalysis analyze_size(Context& ctx, int N);

microcan::McConfig mc_config(const io::RunConfig& cfg);
/// <h12/N>_ME on the configured grid.
microcan::McGrid microcanonical_h12(const io::RunConfig& cfg);
/// Grid value, or NaN outside the grid.
double microcanonical_at(const microcan::McGrid& grid, double e);

/// Per-subspace classifier input for one size.
geth::SizeTable size_table(const SizeAnalysis& a, const microcan::McGrid& me);

struct ObservableScaling {
    observables::Kind kind = observables::Kind::hopping12;
    std::vector<geth::SigmaPoint> points;
    std::optional<geth::ScalingResult> fit;
    std::string note;  // why the fit is missing
    geth::ExceedanceTable exceedance;
};

/// sigma(N) in the configured shell for h12 (T/3 - ME), C and I (eigenvalues), plus exceedance
/// counts of |deviation| (h12) and max|lambda| (C, I).
std::vector<ObservableScaling> scaling_analysis(const std::vector<SizeAnalysis>& sizes,
                                                const microcan::McGrid& me, const io::RunConfig& cfg);

classical::IntegrationConfig integration_config(const io::RunConfig& cfg);

struct EnsemblePoint {
    double energy = 0.0;
    std::vector<classical::TrajectoryResult> trajectories;
    classical::EnsembleSummary summary;
    classical::ImbalanceClusters clusters;
    std::string error;  // non-empty when the energy could not be sampled
};

/// Ensemble seed derived from the run seed and the energy value, so a point is reproducible
/// no matter which other energies are requested alongside it.
std::uint64_t ensemble_seed(std::uint64_t seed, double energy);
EnsemblePoint classical_point(const io::RunConfig& cfg, double energy);
std::vector<EnsemblePoint> classical_sweep(const io::RunConfig& cfg, std::span<const double> energies);
std::vector<double> classical_grid(const io::RunConfig& cfg);

struct WindowReport {
    geth::WindowClassification window;
    std::optional<double> quantum_chaos;    // 1 - rho from the level statistics
    std::optional<double> classical_chaos;  // chaotic share of trajectories
    double max_deltaT_h12 = 0.0;
    bool s1 = false;  // dynamics not (fully) chaotic: thermalization not guaranteed
    bool s2 = false;  // some order-parameter eigenvalue above its bound
};

struct Region {
    geth::RegionLabel label = geth::RegionLabel::insufficient_data;
    double lo = 0.0;
    double hi = 0.0;
};

struct Report {
    int N = 0;
    std::vector<WindowReport> windows;
    std::vector<Region> regions;
    std::vector<ObservableScaling> scaling;
};

Report build_report(const io::RunConfig& cfg, const std::vector<geth::SizeTable>& tables,
                    const rmtstats::ChaosProfile& quantum, const std::vector<EnsemblePoint>& classical_points,
                    std::vector<ObservableScaling> scaling);
/// Runs of consecutive windows that share a label.
std::vector<Region> merge_regions(const std::vector<WindowReport>& windows);
geth::ClassifierConfig classifier_config(const io::RunConfig& cfg);
std::vector<geth::SizeTable> region_tables(const std::vector<SizeAnalysis>& sizes, const microcan::McGrid& me,
                                           int region_N);

std::string report_json(const Report& r);
std::string report_text(const Report& r);

}  // namespace gethlab::pipeline
