#pragma once

#include "gethlab/classical.hpp"
#include "gethlab/microcan.hpp"
#include "gethlab/observables.hpp"

#include <span>
#include <vector>

// Serial counterparts of the OpenMP kernels. Same inputs, same outputs; used as test oracles
// and as the baseline in the benchmarks.
namespace gethlab::reference {

std::vector<observables::ProjectionTable> project_subspaces(const spectra::SectorSet& set,
                                                            const std::vector<spectra::DegenerateSubspace>& subspaces,
                                                            std::span<const observables::Kind> kinds);

/// Linear scan over grid points per sample instead of a binary search.
microcan::McGrid mc_grid(const classical::Coupling& c, microcan::Observable o, std::span<const double> grid,
                         const microcan::McConfig& cfg);

std::vector<classical::TrajectoryResult> run_ensemble(const classical::Coupling& c,
                                                      const classical::EnsembleConfig& ens,
                                                      const classical::IntegrationConfig& cfg);

}  // namespace gethlab::reference
