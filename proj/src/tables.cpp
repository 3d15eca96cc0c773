#include "gethlab/tables.hpp"

#include <fmt/format.h>

#include <cmath>

namespace gethlab::tables {

using io::Cell;
using I64 = std::int64_t;

std::string trajectory_file(double energy) { return fmt::format("classical/trajectories_E{:+.3f}.csv", energy); }
std::string spectrum_file(int N) { return fmt::format("spectrum_N{}.csv", N); }
std::string subspace_file(int N) { return fmt::format("subspaces_N{}.csv", N); }

io::CsvTable spectrum_table(const spectra::SectorSet& set) {
    io::CsvTable t("spectrum", {"N", "sector", "level", "E", "E_per_N"});
    const int N = set.params.N;
    auto add = [&](const std::string& sector, const Eigen::VectorXd& e) {
        for (Eigen::Index i = 0; i < e.size(); ++i) t.add({I64{N}, sector, I64{i}, e(i), e(i) / N});
    };
    add(set.r1.label.name(), set.r1.energies);
    add(set.omega.label.name(), set.omega.energies);
    add(fock::SectorLabel::make(fock::Rotation::omega2).name(), set.omega.energies);
    return t;
}

io::CsvTable subspace_table(const pipeline::SizeAnalysis& a, const microcan::McGrid* me) {
    io::CsvTable t("subspaces", {"N",         "n",        "E",        "E_per_N",  "r1_level", "pair_level",
                                 "pairing",   "T_h12",    "ME_h12",   "dT_h12",   "dL_h12",   "T_C_abs",
                                 "T_I_abs",   "lC_0",     "lC_1",     "lC_2",     "lI_0_re",  "lI_0_im",
                                 "lI_1_re",   "lI_1_im",  "lI_2_re",  "lI_2_im",  "max_abs_C", "max_abs_I",
                                 "dL_C",      "dL_I"});
    for (std::size_t i = 0; i < a.subspaces.size(); ++i) {
        const auto& s = a.subspaces[i];
        const auto& h = a.h12.rows[i];
        const auto& c = a.current.rows[i];
        const auto& im = a.imbalance.rows[i];
        const double e = s.energy / a.N;
        const double me_v = me ? pipeline::microcanonical_at(*me, e) : std::nan("");
        const double mean_h = h.trace.real() / 3.0;
        double dl_h = 0.0;
        for (const auto& l : h.eigenvalues) dl_h = std::max(dl_h, std::abs(l - h.trace / 3.0));
        t.add({I64{a.N}, I64{s.index}, s.energy, e, I64{s.r1_level}, I64{s.pair_level}, s.pairing_residual,
               h.trace.real(), me_v, std::abs(mean_h - me_v) / observables::spectral_width(observables::Kind::hopping12),
               dl_h / observables::spectral_width(observables::Kind::hopping12), std::abs(c.trace), std::abs(im.trace),
               c.eigenvalues[0].real(), c.eigenvalues[1].real(), c.eigenvalues[2].real(), im.eigenvalues[0].real(),
               im.eigenvalues[0].imag(), im.eigenvalues[1].real(), im.eigenvalues[1].imag(), im.eigenvalues[2].real(),
               im.eigenvalues[2].imag(), c.max_abs_eigenvalue(), im.max_abs_eigenvalue(),
               c.max_abs_eigenvalue() / observables::spectral_width(observables::Kind::current),
               im.max_abs_eigenvalue() / observables::spectral_width(observables::Kind::imbalance)});
    }
    return t;
}

io::CsvTable microcanonical_table(const microcan::McGrid& grid) {
    io::CsvTable t("microcanonical", {"E_per_N", "value", "stderr", "accepted", "total", "deltaE", "low_confidence"});
    for (const auto& e : grid.estimates()) {
        t.add({e.energy, e.value, e.standard_error, static_cast<I64>(e.accepted), static_cast<I64>(e.total), e.deltaE,
               I64{e.low_confidence ? 1 : 0}});
    }
    return t;
}

microcan::McGrid read_microcanonical(const std::filesystem::path& path, const std::string& producer) {
    const auto d = io::read_csv(path, "microcanonical", producer);
    std::vector<double> energies;
    std::vector<microcan::McEstimate> est;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        microcan::McEstimate e;
        e.energy = d.number(r, "E_per_N");
        e.value = d.number(r, "value");
        e.standard_error = d.number(r, "stderr");
        e.accepted = static_cast<std::uint64_t>(d.number(r, "accepted"));
        e.total = static_cast<std::uint64_t>(d.number(r, "total"));
        e.deltaE = d.number(r, "deltaE");
        e.low_confidence = d.number(r, "low_confidence") != 0.0;
        energies.push_back(e.energy);
        est.push_back(e);
    }
    return microcan::McGrid(std::move(energies), std::move(est));
}

io::CsvTable trajectory_table(const pipeline::EnsemblePoint& p) {
    io::CsvTable t("trajectories", {"index", "E_target", "E", "q1", "q2", "q3", "p1", "p2", "p3", "avg_I_re",
                                    "avg_I_im", "avg_I_abs", "avg_C", "avg_h12", "chaos_metric", "chaotic",
                                    "breaks_rotation", "breaks_reflection", "valid", "energy_drift", "norm_drift"});
    for (const auto& r : p.trajectories) {
        t.add({static_cast<I64>(r.index), p.energy, r.energy, r.initial.q[0], r.initial.q[1], r.initial.q[2],
               r.initial.p[0], r.initial.p[1], r.initial.p[2], r.avg_imbalance.real(), r.avg_imbalance.imag(),
               std::abs(r.avg_imbalance), r.avg_current, r.avg_hopping12, r.chaos_metric, I64{r.chaotic},
               I64{r.breaks_rotation}, I64{r.breaks_reflection}, I64{r.valid}, r.energy_drift, r.norm_drift});
    }
    return t;
}

std::vector<classical::TrajectoryResult> read_trajectories(const std::filesystem::path& path,
                                                           const std::string& producer) {
    const auto d = io::read_csv(path, "trajectories", producer);
    std::vector<classical::TrajectoryResult> out;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        classical::TrajectoryResult t;
        t.index = static_cast<std::uint64_t>(d.number(r, "index"));
        t.energy = d.number(r, "E");
        t.initial = {{d.number(r, "q1"), d.number(r, "q2"), d.number(r, "q3")},
                     {d.number(r, "p1"), d.number(r, "p2"), d.number(r, "p3")}};
        t.avg_imbalance = {d.number(r, "avg_I_re"), d.number(r, "avg_I_im")};
        t.avg_current = d.number(r, "avg_C");
        t.avg_hopping12 = d.number(r, "avg_h12");
        t.chaos_metric = d.number(r, "chaos_metric");
        t.chaotic = d.number(r, "chaotic") != 0.0;
        t.breaks_rotation = d.number(r, "breaks_rotation") != 0.0;
        t.breaks_reflection = d.number(r, "breaks_reflection") != 0.0;
        t.valid = d.number(r, "valid") != 0.0;
        t.energy_drift = d.number(r, "energy_drift");
        t.norm_drift = d.number(r, "norm_drift");
        out.push_back(t);
    }
    return out;
}

io::CsvTable classical_summary_table(const std::vector<pipeline::EnsemblePoint>& points) {
    io::CsvTable t("classical_summary",
                   {"E", "total", "valid", "chaos_fraction", "fraction_I", "fraction_C", "c0_re", "c0_im", "c1_re",
                    "c1_im", "c2_re", "c2_im", "n0", "n1", "n2", "rotation_mismatch", "error"});
    for (const auto& p : points) {
        const auto& c = p.clusters;
        t.add({p.energy, static_cast<I64>(p.summary.total), static_cast<I64>(p.summary.valid), p.summary.chaos_fraction,
               p.summary.fraction_imbalance, p.summary.fraction_current, c.centroids[0].real(), c.centroids[0].imag(),
               c.centroids[1].real(), c.centroids[1].imag(), c.centroids[2].real(), c.centroids[2].imag(),
               static_cast<I64>(c.counts[0]), static_cast<I64>(c.counts[1]), static_cast<I64>(c.counts[2]),
               p.error.empty() ? c.rotation_mismatch() : std::nan(""), p.error});
    }
    return t;
}

std::vector<pipeline::EnsemblePoint> read_classical_summary(const std::filesystem::path& path,
                                                            const std::string& producer) {
    const auto d = io::read_csv(path, "classical_summary", producer);
    std::vector<pipeline::EnsemblePoint> out;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        pipeline::EnsemblePoint p;
        p.energy = d.number(r, "E");
        p.summary.total = static_cast<std::size_t>(d.number(r, "total"));
        p.summary.valid = static_cast<std::size_t>(d.number(r, "valid"));
        p.summary.chaos_fraction = d.number(r, "chaos_fraction");
        p.summary.fraction_imbalance = d.number(r, "fraction_I");
        p.summary.fraction_current = d.number(r, "fraction_C");
        for (int k = 0; k < 3; ++k) {
            const auto ks = std::to_string(k);
            p.clusters.centroids[static_cast<std::size_t>(k)] = {d.number(r, "c" + ks + "_re"), d.number(r, "c" + ks + "_im")};
            p.clusters.counts[static_cast<std::size_t>(k)] = static_cast<std::size_t>(d.number(r, "n" + ks));
        }
        p.error = d.text(r, "error");
        out.push_back(std::move(p));
    }
    return out;
}

io::CsvTable chaos_profile_table(const rmtstats::ChaosProfile& profile) {
    io::CsvTable t("chaos_profile", {"E_per_N", "lo", "hi", "rho", "chaotic_fraction", "count", "log_likelihood", "sectors"});
    for (const auto& p : profile.points) {
        std::string sectors;
        for (const auto& s : p.sectors) sectors += (sectors.empty() ? "" : ";") + s;
        t.add({p.center, p.lo, p.hi, p.fit.rho, p.fit.chaotic_fraction(), static_cast<I64>(p.count), p.fit.log_likelihood,
               sectors});
    }
    return t;
}

rmtstats::ChaosProfile read_chaos_profile(const std::filesystem::path& path, const std::string& producer) {
    const auto d = io::read_csv(path, "chaos_profile", producer);
    rmtstats::ChaosProfile out;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        rmtstats::ChaosPoint p;
        p.center = d.number(r, "E_per_N");
        p.lo = d.number(r, "lo");
        p.hi = d.number(r, "hi");
        p.fit.rho = d.number(r, "rho");
        p.fit.log_likelihood = d.number(r, "log_likelihood");
        p.count = static_cast<std::size_t>(d.number(r, "count"));
        p.fit.count = p.count;
        out.points.push_back(std::move(p));
    }
    return out;
}

}  // namespace gethlab::tables
