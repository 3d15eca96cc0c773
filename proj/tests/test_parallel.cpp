#include "doctest.h"

#include "gethlab/reference.hpp"

#include <omp.h>

using namespace gethlab;
using observables::Kind;

TEST_CASE("parallel projections equal the serial reference for any thread count") {
    const auto set = spectra::solve_sectors({36, 1.0, -5.0});
    const auto subs = spectra::assemble_subspaces(set.r1.energies, set.omega.energies).subspaces;
    const std::array kinds{Kind::hopping12, Kind::current, Kind::imbalance};
    const auto ref = reference::project_subspaces(set, subs, kinds);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        const auto par = observables::project_subspaces(set, subs, kinds);
        REQUIRE(par.size() == ref.size());
        for (std::size_t k = 0; k < par.size(); ++k) {
            REQUIRE(par[k].rows.size() == ref[k].rows.size());
            for (std::size_t i = 0; i < par[k].rows.size(); ++i) {
                CHECK(par[k].rows[i].matrix == ref[k].rows[i].matrix);
                CHECK(par[k].rows[i].eigenvalues == ref[k].rows[i].eigenvalues);
            }
        }
    }
    omp_set_num_threads(saved);
}

TEST_CASE("Monte Carlo grid is independent of the thread count") {
    const classical::Coupling c{1.0, -5.0};
    microcan::McConfig cfg;
    cfg.n_samples = 200000;
    cfg.batch_size = 8192;
    const auto grid = microcan::make_grid(-3.1, -2.3, 0.1);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = microcan::mc_grid(c, microcan::Observable::hopping12, grid, cfg);
    omp_set_num_threads(3);
    const auto three = microcan::mc_grid(c, microcan::Observable::hopping12, grid, cfg);
    omp_set_num_threads(saved);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(one.estimates()[k].value == three.estimates()[k].value);
        CHECK(one.estimates()[k].standard_error == three.estimates()[k].standard_error);
    }
}
