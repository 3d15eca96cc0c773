// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status when any fails.

#include "oracles.hpp"

#include "gethlab/classical.hpp"
#include "gethlab/fock.hpp"
#include "gethlab/geth.hpp"
#include "gethlab/microcan.hpp"
#include "gethlab/observables.hpp"
#include "gethlab/pipeline.hpp"
#include "gethlab/rmtstats.hpp"
#include "gethlab/rng.hpp"
#include "gethlab/spectra.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#ifndef GETHLAB_CLI
#define GETHLAB_CLI "gethlab"
#endif

namespace fs = std::filesystem;
using namespace gethlab;
using cplx = std::complex<double>;
using observables::Kind;

namespace {

// Tolerances of the criteria.
constexpr double kSymmetryTol = 1e-9;
constexpr double kIdentityTol = 1e-10;
constexpr double kBoundaryTol = 0.2;
constexpr double kRotationEdge = -3.9;
constexpr double kReflectionEdge = -0.9;
constexpr double kThermalLo = -3.1;
constexpr double kThermalHi = -2.3;
constexpr double kExponentLo = -0.65;
constexpr double kExponentHi = -0.20;
constexpr double kClusterTol = 0.05;
constexpr double kBreakingMax = 0.05;
constexpr double kChaosMin = 0.90;
constexpr double kRhoTol = 0.05;
constexpr double kQuadratureTol = 1e-6;
constexpr double kMedianTol = 0.05;
constexpr double kStderrMax = 0.005;
constexpr std::uint64_t kMinSamples = 100'000'000;
constexpr double kMcShell = 0.01;
constexpr double kWitnessTol = 1e-12;
constexpr double kDriftTol = 1e-8;
constexpr double kFiniteDifferenceTol = 1e-7;
constexpr std::uint64_t kRhoSeed = 2026;

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void require(bool ok, std::string what) {
        pass = pass && ok;
        lines.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", std::move(what)));
    }
    void info(std::string what) { lines.push_back("     " + std::move(what)); }
};

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Shared {
    io::RunConfig cfg;
    pipeline::Context ctx;
    fs::path work;
    std::map<int, pipeline::SizeAnalysis> sizes;
    std::optional<microcan::McGrid> me;
    std::map<double, pipeline::EnsemblePoint> ensembles;

    Shared(io::RunConfig c, const fs::path& cache, fs::path w)
        : cfg(c), ctx(c, cache, [](const std::string& m) { std::cerr << "  " << m << '\n'; }), work(std::move(w)) {}

    const pipeline::SizeAnalysis& size(int N) {
        auto it = sizes.find(N);
        if (it == sizes.end()) it = sizes.emplace(N, pipeline::analyze_size(ctx, N)).first;
        return it->second;
    }

    const microcan::McGrid& microcanonical() {
        if (!me) {
            std::cerr << fmt::format("  microcanonical h12 grid, {} samples\n", cfg.mc_samples);
            me = pipeline::microcanonical_h12(cfg);
        }
        return *me;
    }

    const pipeline::EnsemblePoint& ensemble(double e) {
        for (auto& [k, v] : ensembles) {
            if (std::abs(k - e) < 1e-9) return v;
        }
        std::cerr << fmt::format("  classical ensemble at E/N={:+.3f}\n", e);
        return ensembles.emplace(e, pipeline::classical_point(cfg, e)).first->second;
    }
};

// ---------------------------------------------------------------------------------------------

Outcome symmetry_algebra() {
    Outcome o;
    double d3 = 0, commutator = 0, spectrum = 0;
    for (int N = 1; N <= 10; ++N) {
        const Eigen::MatrixXd R = fock::rotation_matrix(N);
        const Eigen::MatrixXd S = fock::reflection_matrix(N);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(R.rows(), R.cols());
        d3 = std::max({d3, (R * R * R - I).cwiseAbs().maxCoeff(), (S * S - I).cwiseAbs().maxCoeff(),
                       (S * R * S - R * R).cwiseAbs().maxCoeff()});

        const spectra::ModelParams p{N, 1.0, -5.0};
        const Eigen::MatrixXd H = spectra::fock_hamiltonian(p);
        const double scale = std::max(1.0, H.norm());
        commutator = std::max({commutator, (H * R - R * H).cwiseAbs().maxCoeff() / scale,
                               (H * S - S * H).cwiseAbs().maxCoeff() / scale});

        std::vector<double> sectors;
        for (auto r : {fock::Rotation::one, fock::Rotation::omega, fock::Rotation::omega2}) {
            const auto s = spectra::solve_sector(p, fock::build_sector_basis(N, fock::SectorLabel::make(r)), false);
            sectors.insert(sectors.end(), s.energies.begin(), s.energies.end());
        }
        std::sort(sectors.begin(), sectors.end());
        const auto full = oracle::sorted_eigenvalues(oracle::hamiltonian(N, 1.0, -5.0));
        if (full.size() != sectors.size()) {
            spectrum = INFINITY;
            continue;
        }
        for (std::size_t k = 0; k < full.size(); ++k) spectrum = std::max(spectrum, std::abs(full[k] - sectors[k]));
    }
    o.require(d3 <= kSymmetryTol, fmt::format("R^3 = 1, S^2 = 1, SRS = R^2 for N <= 10: max residual {:.2e}", d3));
    o.require(commutator <= kSymmetryTol, fmt::format("[H,R], [H,S] relative to |H|: max {:.2e}", commutator));
    o.require(spectrum <= kSymmetryTol, fmt::format("sector union vs full-basis oracle spectrum: max {:.2e}", spectrum));
    return o;
}

Outcome exact_identities(Shared& sh) {
    Outcome o;
    for (int N : {30, 60}) {
        const auto& a = sh.size(N);
        double trace_ic = 0, sum_rule = 0;
        for (auto k : {Kind::hopping12, Kind::current, Kind::imbalance}) {
            for (const auto& p : a.table(k).rows) {
                const cplx sum = p.eigenvalues[0] + p.eigenvalues[1] + p.eigenvalues[2];
                sum_rule = std::max(sum_rule, std::abs(sum - p.trace));
                if (k != Kind::hopping12) trace_ic = std::max(trace_ic, std::abs(p.trace));
            }
        }
        const auto set = pipeline::sector_set(sh.ctx, N);
        const auto conj = spectra::conjugate_spectrum(set.omega);
        const bool doublet = conj.energies == set.omega.energies &&
                             max_abs(conj.eigenvectors - set.omega.eigenvectors.conjugate()) == 0.0;
        o.require(trace_ic <= kIdentityTol,
                  fmt::format("N={}: |T(I)|, |T(C)| over {} subspaces: max {:.2e}", N, a.subspaces.size(), trace_ic));
        o.require(sum_rule <= kIdentityTol, fmt::format("N={}: |sum lambda - T| for h12, C, I: max {:.2e}", N, sum_rule));
        o.require(doublet, fmt::format("N={}: omega^2 sector is the exact conjugate of the omega sector", N));
    }
    return o;
}

std::vector<int> region_sizes(const io::RunConfig& cfg) {
    std::set<int> n;
    for (int x : cfg.sizes) {
        if (x <= cfg.region_N) n.insert(x);
    }
    n.insert(cfg.region_N);
    return {n.begin(), n.end()};
}

std::vector<double> sweep_energies(const io::RunConfig& cfg) {
    auto e = pipeline::classical_grid(cfg);
    e.insert(e.end(), cfg.fig2_energies.begin(), cfg.fig2_energies.end());
    e.push_back(-2.7);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), e.end());
    return e;
}

bool near(double x, double edge) { return std::abs(x - edge) <= kBoundaryTol; }

Outcome region_reproduction(Shared& sh) {
    Outcome o;
    const auto& cfg = sh.cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const auto& me = sh.microcanonical();
    std::vector<pipeline::SizeAnalysis> region;
    for (int N : region_sizes(cfg)) region.push_back(sh.size(N));
    const auto tables = pipeline::region_tables(region, me, cfg.region_N);

    std::cerr << fmt::format("  level statistics at N={}\n", cfg.stats_N);
    const auto levels = pipeline::reflection_levels(sh.ctx, cfg.stats_N);
    const auto quantum = rmtstats::chaos_profile(levels, cfg.stats_N, cfg.window, static_cast<std::size_t>(cfg.min_levels));
    std::vector<pipeline::EnsemblePoint> classical;
    for (double e : sweep_energies(cfg)) classical.push_back(sh.ensemble(e));
    const auto report = pipeline::build_report(cfg, tables, quantum, classical, {});
    std::ofstream(sh.work / "report.txt") << pipeline::report_text(report);
    std::ofstream(sh.work / "report.json") << pipeline::report_json(report);

    std::vector<pipeline::Region> regions;
    for (const auto& r : report.regions) {
        if (r.label != geth::RegionLabel::insufficient_data) regions.push_back(r);
    }
    std::string summary;
    for (const auto& r : report.regions) summary += fmt::format(" [{:+.2f},{:+.2f}] {};", r.lo, r.hi, geth::to_string(r.label));
    o.info("regions:" + summary);

    if (regions.empty()) {
        o.require(false, "no labelled windows");
        return o;
    }
    const auto& first = regions.front();
    const auto& last = regions.back();
    o.require(first.label == geth::RegionLabel::rotation_breaking && near(first.hi, kRotationEdge),
              fmt::format("lowest region {} ends at {:+.2f} (rotation-breaking edge {:+.1f} +- {})",
                          geth::to_string(first.label), first.hi, kRotationEdge, kBoundaryTol));
    o.require(last.label == geth::RegionLabel::reflection_breaking && near(last.lo, kReflectionEdge),
              fmt::format("highest region {} starts at {:+.2f} (reflection-breaking edge {:+.1f} +- {})",
                          geth::to_string(last.label), last.lo, kReflectionEdge, kBoundaryTol));

    std::vector<const pipeline::WindowReport*> thermal;
    for (const auto& w : report.windows) {
        if (w.window.label == geth::RegionLabel::thermal_candidate) thermal.push_back(&w);
    }
    const bool inside = std::any_of(thermal.begin(), thermal.end(), [](const auto* w) {
        return w->window.lo >= kThermalLo - 1e-9 && w->window.hi <= kThermalHi + 1e-9;
    });
    const bool contained = std::all_of(thermal.begin(), thermal.end(), [](const auto* w) {
        return w->window.lo >= kThermalLo - kBoundaryTol - 1e-9 && w->window.hi <= kThermalHi + kBoundaryTol + 1e-9;
    });
    o.require(inside && contained,
              fmt::format("{} thermal-candidate window(s), at least one inside [{}, {}], none beyond +- {}",
                          thermal.size(), kThermalLo, kThermalHi, kBoundaryTol));

    if (!thermal.empty()) {
        const double t_lo = thermal.front()->window.lo;
        const double t_hi = thermal.back()->window.hi;
        std::size_t below = 0, above = 0, bad = 0;
        std::string offenders;
        for (const auto& w : report.windows) {
            const double c = w.window.center();
            const bool lower_gap = c > first.hi && c < t_lo;
            const bool upper_gap = c > t_hi && c < last.lo;
            if (!lower_gap && !upper_gap) continue;
            if (near(c, kRotationEdge) || near(c, kThermalLo) || near(c, kThermalHi) || near(c, kReflectionEdge)) continue;
            (lower_gap ? below : above) += 1;
            if (w.window.label != geth::RegionLabel::mixed) {
                ++bad;
                offenders += fmt::format(" {:+.2f}:{}", c, geth::to_string(w.window.label));
            }
        }
        o.require(bad == 0 && below > 0 && above > 0,
                  fmt::format("windows between the regions are MIXED ({} below, {} above the thermal window, {} "
                              "others{})",
                              below, above, bad, offenders.empty() ? "" : ":" + offenders));
    }

    std::size_t s1 = 0, flagged = 0;
    for (const auto& w : report.windows) {
        if (w.window.label != geth::RegionLabel::thermal_candidate) continue;
        ++flagged;
        s1 += w.s1;
        o.info(fmt::format("thermal window [{:+.2f},{:+.2f}]: quantum chaos {}, classical chaos {}, S1={}", w.window.lo,
                           w.window.hi, w.quantum_chaos ? fmt::format("{:.2f}", *w.quantum_chaos) : "n/a",
                           w.classical_chaos ? fmt::format("{:.2f}", *w.classical_chaos) : "n/a", w.s1));
    }
    o.info(fmt::format("region stage {:.0f} s (N={}, stats N={}, {} classical energies, {} mode)", elapsed(t0),
                       cfg.region_N, cfg.stats_N, classical.size(), cfg.mode));
    return o;
}

Outcome scaling_trend(Shared& sh) {
    Outcome o;
    std::vector<pipeline::SizeAnalysis> all;
    for (int N : sh.cfg.sizes) all.push_back(sh.size(N));
    const auto scaling = pipeline::scaling_analysis(all, sh.microcanonical(), sh.cfg);
    for (const auto& s : scaling) {
        if (!s.fit) {
            o.require(false, fmt::format("{}: no scaling fit ({})", observables::name(s.kind), s.note));
            continue;
        }
        std::string pts;
        for (const auto& p : s.points) pts += fmt::format(" N={}:{:.4g}", p.N, p.sigma);
        o.require(s.fit->exponent >= kExponentLo && s.fit->exponent <= kExponentHi,
                  fmt::format("{}: exponent {:+.3f} in [{}, {}], log-fit residual {:.3e};{}", observables::name(s.kind),
                              s.fit->exponent, kExponentLo, kExponentHi, s.fit->residual, pts));
    }
    return o;
}

Outcome classical_targets(Shared& sh) {
    Outcome o;
    const auto& low = sh.ensemble(-4.2);
    const auto& mid = sh.ensemble(-2.7);
    for (const auto* p : {&low, &mid}) {
        if (!p->error.empty()) o.require(false, fmt::format("E/N={:+.1f}: {}", p->energy, p->error));
        o.info(fmt::format("E/N={:+.1f}: {} of {} trajectories valid", p->energy, p->summary.valid, p->summary.total));
    }
    const auto mismatch = low.clusters.rotation_mismatch();
    o.require(low.summary.valid > 0 && low.summary.fraction_imbalance == 1.0,
              fmt::format("E/N=-4.2: rotation breaking in {:.1f}% of valid trajectories", 100 * low.summary.fraction_imbalance));
    o.require(mismatch <= kClusterTol,
              fmt::format("E/N=-4.2: I clusters ({}, {}, {}) related by exp(2 pi i/3), centroid mismatch {:.4f}",
                          low.clusters.counts[0], low.clusters.counts[1], low.clusters.counts[2], mismatch));
    o.require(mid.summary.valid > 0 && mid.summary.fraction_imbalance <= kBreakingMax &&
                  mid.summary.fraction_current <= kBreakingMax,
              fmt::format("E/N=-2.7: symmetry breaking I {:.1f}%, C {:.1f}%", 100 * mid.summary.fraction_imbalance,
                          100 * mid.summary.fraction_current));
    o.require(mid.summary.chaos_fraction >= kChaosMin,
              fmt::format("E/N=-2.7: chaotic share {:.1f}%", 100 * mid.summary.chaos_fraction));
    return o;
}

Outcome estimator_calibration() {
    Outcome o;
    constexpr std::size_t n = 5000;
    for (int k = 0; k <= 4; ++k) {
        const double rho = 0.25 * k;
        auto gen = rng::stream(kRhoSeed, static_cast<std::uint64_t>(k));
        const auto fit = rmtstats::fit_rho(rmtstats::superposed_spacings(n, rho, gen));
        double bias = 0, spread = 0;
        int within = 0;
        constexpr int replicates = 40;
        for (int r = 0; r < replicates; ++r) {
            auto g = rng::stream(kRhoSeed + 1 + static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(k));
            const double e = rmtstats::fit_rho(rmtstats::superposed_spacings(n, rho, g)).rho - rho;
            bias += e;
            spread += e * e;
            within += std::abs(e) <= kRhoTol;
        }
        bias /= replicates;
        spread = std::sqrt(spread / replicates - bias * bias);
        o.require(std::abs(fit.rho - rho) <= kRhoTol,
                  fmt::format("rho={:.2f}: estimate {:.4f} (seed {}); replicates: bias {:+.4f}, sd {:.4f}, {}/{} within {}",
                              rho, fit.rho, kRhoSeed, bias, spread, within, replicates, kRhoTol));
    }
    for (double rho : {0.0, 1.0}) {
        const auto f = [rho](double s) { return rmtstats::berry_robnik_pdf(s, rho); };
        const auto g = [rho](double s) { return s * rmtstats::berry_robnik_pdf(s, rho); };
        const double norm = oracle::simpson(f, 0.0, 60.0, 200000);
        const double mean = oracle::simpson(g, 0.0, 60.0, 200000);
        o.require(std::abs(norm - 1) <= kQuadratureTol && std::abs(mean - 1) <= kQuadratureTol,
                  fmt::format("rho={:.0f} density: norm {:.9f}, mean {:.9f}", rho, norm, mean));
    }
    return o;
}

Outcome microcanonical_consistency(Shared& sh) {
    Outcome o;
    const auto& cfg = sh.cfg;
    o.require(cfg.mc_samples >= kMinSamples && std::abs(cfg.mc_dE - kMcShell) < 1e-15,
              fmt::format("{} samples per run, shell half-width {}", cfg.mc_samples, cfg.mc_dE));
    const auto& me = sh.microcanonical();
    const auto& a = sh.size(cfg.region_N);
    std::vector<double> dev;
    double worst_se = 0;
    for (const auto& p : a.h12.rows) {
        const double e = p.energy / cfg.region_N;
        if (e < cfg.shell_lo || e > cfg.shell_hi) continue;
        dev.push_back(std::abs(p.trace.real() / 3.0 - me(e)));
        worst_se = std::max(worst_se, me.standard_error_at(e));
    }
    if (dev.empty()) {
        o.require(false, "no subspaces in the thermal window");
        return o;
    }
    std::sort(dev.begin(), dev.end());
    const double median = dev.size() % 2 ? dev[dev.size() / 2] : 0.5 * (dev[dev.size() / 2 - 1] + dev[dev.size() / 2]);
    o.require(median <= kMedianTol, fmt::format("N={}, [{}, {}]: median |T/3 - ME| = {:.4f} over {} subspaces", cfg.region_N,
                                                cfg.shell_lo, cfg.shell_hi, median, dev.size()));
    o.require(worst_se <= kStderrMax, fmt::format("largest MC standard error in the window {:.2e}", worst_se));
    return o;
}

Outcome witnesses(Shared& sh) {
    Outcome o;
    const auto& a = sh.size(60);
    auto gen = rng::stream(kRhoSeed, 0, 8);
    std::vector<std::size_t> pick(a.subspaces.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), gen);
    pick.resize(std::min<std::size_t>(100, pick.size()));
    double uniform = 0, eigen = 0;
    for (auto k : {Kind::hopping12, Kind::current, Kind::imbalance}) {
        const auto& rows = a.table(k).rows;
        for (auto i : pick) {
            const auto& p = rows[i];
            uniform = std::max(uniform, std::abs(geth::long_time_average(geth::InitialCondition::uniform_witness(p.n), rows) -
                                                 p.trace / 3.0));
            for (int alpha = 0; alpha < 3; ++alpha) {
                const auto ic = geth::InitialCondition::eigenvector_witness(p.n, alpha);
                eigen = std::max(eigen, std::abs(geth::long_time_average(ic, rows) - p.eigenvalues[std::size_t(alpha)]));
            }
        }
    }
    o.require(pick.size() == 100, fmt::format("{} random subspaces at N=60", pick.size()));
    o.require(uniform <= kWitnessTol, fmt::format("uniform witness vs T/d: max {:.2e} (h12, C, I)", uniform));
    o.require(eigen <= kWitnessTol, fmt::format("eigenvector witnesses vs lambda: max {:.2e}", eigen));
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> csv_files(const fs::path& root) {
    std::map<std::string, std::string> out;
    if (!fs::exists(root)) return out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
    return out;
}

Outcome numerical_hygiene(Shared& sh) {
    Outcome o;
    const classical::Coupling c{sh.cfg.J, sh.cfg.U};

    classical::IntegrationConfig ic = pipeline::integration_config(sh.cfg);
    ic.mode = classical::Mode::fast;
    ic.track_chaos = false;
    double energy_drift = 0, norm_drift = 0;
    std::size_t failed = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto gen = rng::stream(sh.cfg.seed, k, 9);
        const auto r = classical::integrate(microcan::draw_state(gen, microcan::Domain::sphere), c, ic);
        failed += !r.failure.empty();
        energy_drift = std::max(energy_drift, r.energy_drift);
        norm_drift = std::max(norm_drift, r.norm_drift);
    }
    o.require(failed == 0 && energy_drift <= kDriftTol && norm_drift <= kDriftTol,
              fmt::format("100 trajectories to t={}: max energy drift {:.2e}, norm drift {:.2e} ({:.0f} s)", ic.t_max,
                          energy_drift, norm_drift, elapsed(t0)));

    double fd = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        auto gen = rng::stream(sh.cfg.seed, k, 10);
        const auto s = microcan::draw_state(gen, microcan::Domain::sphere);
        const auto d = classical::equations_of_motion(s, c);
        constexpr double h = 1e-5;
        double worst = 0, scale = 0;
        for (int i = 0; i < 3; ++i) {
            auto plus = s, minus = s;
            plus.p[std::size_t(i)] += h;
            minus.p[std::size_t(i)] -= h;
            const double dq = (classical::hamiltonian(plus, c) - classical::hamiltonian(minus, c)) / (2 * h);
            plus = minus = s;
            plus.q[std::size_t(i)] += h;
            minus.q[std::size_t(i)] -= h;
            const double dp = -(classical::hamiltonian(plus, c) - classical::hamiltonian(minus, c)) / (2 * h);
            worst = std::max({worst, std::abs(dq - d.q[std::size_t(i)]), std::abs(dp - d.p[std::size_t(i)])});
            scale = std::max({scale, std::abs(d.q[std::size_t(i)]), std::abs(d.p[std::size_t(i)])});
        }
        fd = std::max(fd, worst / scale);
    }
    o.require(fd <= kFiniteDifferenceTol, fmt::format("equations of motion vs central differences: max relative {:.2e}", fd));

    // End to end through the command-line tool: same config and seed, different thread counts,
    // cold cache for the first run and warm cache for the second.
    const fs::path root = sh.work / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    std::ofstream(root / "run.cfg") << "sizes = 12, 18, 24\nregion_N = 24\nstats_N = 90\nmc_samples = 400000\n"
                                       "ensemble_count = 6\nt_max = 150\nt_transient = 20\nclassical_lo = -4.4\n"
                                       "classical_hi = -2.0\nclassical_step = 1.2\nfig2_energies = -4.2\nmin_subspaces = 2\n"
                                       "seed = 77\n";
    const std::vector<std::string> commands{"mc", "classical", "spectrum", "subspaces", "stats", "figure fig3", "report"};
    bool ran = true;
    for (const char* run : {"a", "b"}) {
        for (const auto& cmd : commands) {
            const std::string line = fmt::format("\"{}\" {} --config \"{}\" --cache \"{}\" --out \"{}\" --workers {} > \"{}\" 2>&1",
                                                 GETHLAB_CLI, cmd, (root / "run.cfg").string(), (root / "cache").string(),
                                                 (root / run).string(), std::string(run) == "a" ? 1 : 2,
                                                 (root / fmt::format("{}.log", run)).string());
            if (std::system(line.c_str()) != 0) {
                ran = false;
                o.info("command failed: " + line);
            }
        }
    }
    const auto a = csv_files(root / "a");
    const auto b = csv_files(root / "b");
    std::size_t differ = 0;
    for (const auto& [name, text] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != text) {
            ++differ;
            o.info("differs: " + name);
        }
    }
    o.require(ran && !a.empty() && a.size() == b.size() && differ == 0,
              fmt::format("repeated runs of {} commands: {} CSV files, {} differ", commands.size(), a.size(), differ));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string cache = "acceptance_cache";
    std::string work = "acceptance_work";
    std::string config_path;
    std::vector<int> only;
    app.add_option("--cache", cache, "spectrum cache directory");
    app.add_option("--work", work, "scratch directory for reports and end-to-end runs");
    app.add_option("--config", config_path, "configuration file (defaults otherwise)");
    app.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(app, argc, argv);

    io::RunConfig cfg = config_path.empty() ? io::RunConfig{} : io::RunConfig::load(config_path);
    cfg.validate();
    fs::create_directories(work);
    Shared sh(cfg, cache, work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"symmetry algebra and oracle equivalence", [] { return symmetry_algebra(); }},
        {"exact identities", [&] { return exact_identities(sh); }},
        {"region reproduction", [&] { return region_reproduction(sh); }},
        {"scaling trend", [&] { return scaling_trend(sh); }},
        {"classical ensemble targets", [&] { return classical_targets(sh); }},
        {"Berry-Robnik estimator calibration", [] { return estimator_calibration(); }},
        {"microcanonical consistency", [&] { return microcanonical_consistency(sh); }},
        {"long-time average witnesses", [&] { return witnesses(sh); }},
        {"numerical hygiene", [&] { return numerical_hygiene(sh); }},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        for (const auto& l : out.lines) std::cout << "    " << l << '\n';
        std::cout << fmt::format("{} criterion {}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", id, criteria[k].first,
                                 elapsed(t0))
                  << std::flush;
        failures += !out.pass;
    }
    std::cout << fmt::format("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
