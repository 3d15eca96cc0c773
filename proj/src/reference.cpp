#include "gethlab/reference.hpp"

#include "gethlab/rng.hpp"

namespace gethlab::reference {

std::vector<observables::ProjectionTable> project_subspaces(const spectra::SectorSet& set,
                                                            const std::vector<spectra::DegenerateSubspace>& subspaces,
                                                            std::span<const observables::Kind> kinds) {
    std::vector<observables::ProjectionTable> tables;
    std::vector<Eigen::SparseMatrix<observables::cplx>> ops;
    for (auto k : kinds) {
        tables.push_back({k, set.params.N, {}});
        ops.push_back(observables::build_observable(k, set.params.N));
    }
    for (const auto& s : subspaces) {
        const auto members = set.members(s);
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            tables[i].rows.push_back(observables::project_observable(ops[i], kinds[i], members, s));
        }
    }
    return tables;
}

microcan::McGrid mc_grid(const classical::Coupling& c, microcan::Observable o, std::span<const double> grid,
                         const microcan::McConfig& cfg) {
    const auto nb = microcan::batch_count(cfg);
    std::vector<microcan::ShellSums> batches;
    for (std::uint64_t b = 0; b < nb; ++b) {
        microcan::ShellSums sums(grid.size());
        auto gen = rng::stream(cfg.seed, b, 3);
        const std::uint64_t begin = b * cfg.batch_size;
        const std::uint64_t n = std::min(cfg.batch_size, cfg.n_samples - begin);
        for (std::uint64_t k = 0; k < n; ++k) {
            const auto s = microcan::draw_state(gen, cfg.domain);
            const double h = classical::hamiltonian(s, c);
            bool evaluated = false;
            double v = 0.0;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                if (h < grid[g] - cfg.deltaE || h > grid[g] + cfg.deltaE) continue;
                if (!evaluated) {
                    v = microcan::evaluate(o, s);
                    evaluated = true;
                }
                ++sums.count[g];
                sums.sum[g] += v;
                sums.sum2[g] += v * v;
            }
        }
        sums.drawn = n;
        batches.push_back(std::move(sums));
    }
    return microcan::McGrid(std::vector<double>(grid.begin(), grid.end()), microcan::finalize(batches, grid, cfg));
}

std::vector<classical::TrajectoryResult> run_ensemble(const classical::Coupling& c,
                                                      const classical::EnsembleConfig& ens,
                                                      const classical::IntegrationConfig& cfg) {
    const auto states = classical::sample_initial_conditions(c, ens.energy, ens.deltaE, ens.count, ens.seed);
    std::vector<classical::TrajectoryResult> out;
    for (std::size_t k = 0; k < states.size(); ++k) {
        auto r = classical::integrate(states[k], c, cfg, rng::splitmix64(ens.seed) ^ k);
        r.index = k;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace gethlab::reference
