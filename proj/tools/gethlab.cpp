#include "gethlab/errors.hpp"
#include "gethlab/manifest.hpp"
#include "gethlab/pipeline.hpp"
#include "gethlab/svg.hpp"
#include "gethlab/tables.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;
using namespace gethlab;

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string cache;
    std::string out;
    std::string mode;
    bool compute_missing = false;
};

struct Session {
    pipeline::Context ctx;
    fs::path out;
    io::RunManifest manifest;
    std::string config_text;

    const io::RunConfig& cfg() const { return ctx.config; }

    void write(const io::CsvTable& t, const std::string& rel) {
        const auto path = out / rel;
        t.write(path);
        manifest.add_output(out, path);
    }
    void write(const std::vector<io::Plot>& panels, const std::string& rel) {
        const auto path = out / rel;
        io::write_panels(panels, path);
        manifest.add_output(out, path);
    }
    void write_text(const std::string& text, const std::string& rel) {
        const auto path = out / rel;
        fs::create_directories(path.parent_path());
        std::ofstream(path, std::ios::binary) << text;
        manifest.add_output(out, path);
    }
    std::string producer(const std::string& sub) const {
        return "gethlab " + sub + (config_text.empty() ? "" : " --config " + config_text) + " --out " + out.string();
    }
    void finish() {
        for (const auto& k : ctx.cache.keys_used()) manifest.cache_keys.push_back(k);
        manifest.append_to(out / "manifest.jsonl");
    }
};

Session open_session(const Options& o, const std::string& command) {
    io::RunConfig cfg = o.config_path.empty() ? io::RunConfig{} : io::RunConfig::load(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.workers) cfg.workers = *o.workers;
    if (!o.out.empty()) cfg.out = o.out;
    if (!o.mode.empty()) cfg.mode = o.mode;
    std::string cache_dir = cfg.cache;
    if (const char* env = std::getenv("GETHLAB_CACHE"); env && *env) cache_dir = env;
    if (!o.cache.empty()) cache_dir = o.cache;
    cfg.cache = cache_dir;
    cfg.validate();
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
    Session s{pipeline::Context(cfg, cache_dir, [](const std::string& m) { std::cerr << m << '\n'; }), cfg.out, {}, o.config_path};
    s.manifest.command = command;
    s.manifest.config = cfg.to_map();
    fs::create_directories(s.out);
    return s;
}

// --- data stages -------------------------------------------------------------------------

microcan::McGrid run_mc(Session& s) {
    io::StageTimer t(s.manifest, "mc");
    auto grid = pipeline::microcanonical_h12(s.cfg());
    s.write(tables::microcanonical_table(grid), tables::kMicrocanonical);
    return grid;
}

microcan::McGrid need_mc(Session& s, bool compute) {
    const auto path = s.out / tables::kMicrocanonical;
    if (compute && !fs::exists(path)) return run_mc(s);
    return tables::read_microcanonical(path, s.producer("mc"));
}

std::vector<double> sweep_energies(const io::RunConfig& cfg) {
    auto e = pipeline::classical_grid(cfg);
    for (double x : cfg.fig2_energies) e.push_back(x);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), e.end());
    return e;
}

std::vector<pipeline::EnsemblePoint> run_classical(Session& s, const std::vector<double>& energies) {
    io::StageTimer t(s.manifest, "classical");
    std::vector<pipeline::EnsemblePoint> pts;
    for (double e : energies) {
        std::cerr << fmt::format("classical ensemble at E/N={:+.3f} ({} trajectories, {} mode)\n", e, s.cfg().ensemble_count,
                                 s.cfg().mode);
        auto p = pipeline::classical_point(s.cfg(), e);
        if (!p.error.empty()) std::cerr << "  skipped: " << p.error << '\n';
        s.write(tables::trajectory_table(p), tables::trajectory_file(e));
        pts.push_back(std::move(p));
    }
    s.write(tables::classical_summary_table(pts), tables::kClassicalSummary);
    return pts;
}

std::vector<pipeline::EnsemblePoint> need_classical(Session& s, bool compute) {
    const auto path = s.out / tables::kClassicalSummary;
    if (compute && !fs::exists(path)) run_classical(s, sweep_energies(s.cfg()));
    return tables::read_classical_summary(path, s.producer("classical"));
}

rmtstats::ChaosProfile run_stats(Session& s, int N, double width, int min_levels) {
    io::StageTimer t(s.manifest, "stats");
    const auto levels = pipeline::reflection_levels(s.ctx, N);
    auto profile = rmtstats::chaos_profile(levels, N, width, static_cast<std::size_t>(min_levels));
    for (const auto& m : profile.skipped) std::cerr << "skipped " << m << '\n';
    s.write(tables::chaos_profile_table(profile), tables::kChaosProfile);
    return profile;
}

rmtstats::ChaosProfile need_stats(Session& s, bool compute) {
    const auto path = s.out / tables::kChaosProfile;
    if (compute && !fs::exists(path)) run_stats(s, s.cfg().stats_N, s.cfg().window, s.cfg().min_levels);
    return tables::read_chaos_profile(path, s.producer("stats"));
}

std::vector<pipeline::SizeAnalysis> analyze(Session& s, const std::vector<int>& sizes) {
    io::StageTimer t(s.manifest, "subspaces");
    std::vector<pipeline::SizeAnalysis> out;
    for (int N : sizes) out.push_back(pipeline::analyze_size(s.ctx, N));
    return out;
}

std::vector<int> region_sizes(const io::RunConfig& cfg) {
    std::vector<int> n;
    for (int x : cfg.sizes) {
        if (x <= cfg.region_N) n.push_back(x);
    }
    if (std::find(n.begin(), n.end(), cfg.region_N) == n.end()) n.push_back(cfg.region_N);
    std::sort(n.begin(), n.end());
    return n;
}

std::vector<int> all_sizes(const io::RunConfig& cfg) {
    auto n = cfg.sizes;
    n.push_back(cfg.region_N);
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    return n;
}

// --- figures -----------------------------------------------------------------------------

io::Series scatter(std::string name, std::vector<std::pair<double, double>> pts, std::string color = {}) {
    return {std::move(name), std::move(pts), io::Series::Style::scatter, std::move(color)};
}
io::Series line(std::string name, std::vector<std::pair<double, double>> pts, std::string color = {}) {
    return {std::move(name), std::move(pts), io::Series::Style::line, std::move(color)};
}

void figure1(Session& s, bool compute) {
    const auto& cfg = s.cfg();
    const auto me = need_mc(s, compute);
    const auto classical = need_classical(s, compute);
    const auto quantum = need_stats(s, compute);
    const auto sizes = analyze(s, region_sizes(cfg));
    io::StageTimer t(s.manifest, "fig1");
    const auto tabs = pipeline::region_tables(sizes, me, cfg.region_N);
    const auto report = pipeline::build_report(cfg, tabs, quantum, classical, {});
    const auto& target = *std::find_if(sizes.begin(), sizes.end(), [&](auto& a) { return a.N == cfg.region_N; });
    s.write(tables::subspace_table(target, &me), "fig1_subspaces.csv");

    io::CsvTable w("fig1_windows", {"lo", "hi", "label", "count", "fraction_I", "fraction_C", "quantum_chaos",
                                    "classical_chaos", "S1", "S2"});
    for (const auto& r : report.windows) {
        w.add({r.window.lo, r.window.hi, geth::to_string(r.window.label), static_cast<std::int64_t>(r.window.count),
               r.window.fraction_imbalance, r.window.fraction_current, r.quantum_chaos.value_or(std::nan("")),
               r.classical_chaos.value_or(std::nan("")), std::int64_t{r.s1}, std::int64_t{r.s2}});
    }
    s.write(w, "fig1_windows.csv");

    std::vector<std::pair<double, double>> trace, me_line, dI, dC, qchaos, cchaos, qI, qC, cI, cC;
    for (std::size_t i = 0; i < target.subspaces.size(); ++i) {
        const double e = target.subspaces[i].energy / target.N;
        trace.emplace_back(e, target.h12.rows[i].trace.real() / 3.0);
        dI.emplace_back(e, target.imbalance.rows[i].max_abs_eigenvalue());
        dC.emplace_back(e, target.current.rows[i].max_abs_eigenvalue());
    }
    for (const auto& est : me.estimates()) me_line.emplace_back(est.energy, est.value);
    for (const auto& q : quantum.points) qchaos.emplace_back(q.center, q.fit.chaotic_fraction());
    for (const auto& p : classical) {
        if (!p.error.empty()) continue;
        cchaos.emplace_back(p.energy, p.summary.chaos_fraction);
        cI.emplace_back(p.energy, p.summary.fraction_imbalance);
        cC.emplace_back(p.energy, p.summary.fraction_current);
    }
    for (const auto& r : report.windows) {
        if (r.window.count == 0) continue;
        qI.emplace_back(r.window.center(), r.window.fraction_imbalance);
        qC.emplace_back(r.window.center(), r.window.fraction_current);
    }
    std::vector<std::pair<double, std::string>> markers;
    for (std::size_t i = 1; i < report.regions.size(); ++i) markers.emplace_back(report.regions[i].lo, "");

    io::Plot a{fmt::format("h12 trace per subspace vs microcanonical (N={})", cfg.region_N), "E/N", "T/3, <h12/N>_ME",
               false, false, {scatter("T/3", trace), line("microcanonical", me_line, "#000000")}, markers};
    io::Plot b{"chaotic fraction", "E/N", "fraction", false, false,
               {line("quantum 1-rho", qchaos), scatter("classical", cchaos)}, markers};
    io::Plot c{"rotation breaking (I)", "E/N", "max|lambda| / share", false, false,
               {scatter("max|lambda_I|", dI, "#bbbbbb"), line("quantum share > bound", qI), scatter("classical share", cI)},
               markers};
    io::Plot d{"reflection breaking (C)", "E/N", "max|lambda| / share", false, false,
               {scatter("max|lambda_C|", dC, "#bbbbbb"), line("quantum share > bound", qC), scatter("classical share", cC)},
               markers};
    s.write(std::vector<io::Plot>{a, b, c, d}, "fig1.svg");
}

void figure2(Session& s, bool compute) {
    const auto& cfg = s.cfg();
    std::vector<std::pair<double, std::vector<classical::TrajectoryResult>>> classical;
    for (double e : cfg.fig2_energies) {
        const auto path = s.out / tables::trajectory_file(e);
        if (compute && !fs::exists(path)) run_classical(s, {e});
        classical.emplace_back(e, tables::read_trajectories(path, s.producer("classical") + fmt::format(" --energy {}", e)));
    }
    auto sizes = analyze(s, {cfg.region_N});
    io::StageTimer t(s.manifest, "fig2");
    const auto& a = sizes.front();
    io::CsvTable q("fig2_quantum", {"E_shell", "n", "E_per_N", "alpha", "lambda_re", "lambda_im", "lambda_abs"});
    io::CsvTable c("fig2_classical", {"E_shell", "index", "E", "avg_I_re", "avg_I_im", "avg_I_abs", "avg_C", "valid"});
    std::vector<io::Plot> panels;
    for (const auto& [e, traj] : classical) {
        const auto cloud = observables::lambda_cloud(a.imbalance, {e, cfg.fig2_halfwidth});
        std::vector<std::pair<double, double>> qp, cp;
        for (const auto& pt : cloud) {
            for (std::size_t k = 0; k < 3; ++k) {
                const auto l = pt.eigenvalues[k];
                q.add({e, std::int64_t{pt.n}, pt.energy_per_particle, static_cast<std::int64_t>(k), l.real(), l.imag(), std::abs(l)});
                qp.emplace_back(l.real(), l.imag());
            }
        }
        for (const auto& r : traj) {
            c.add({e, static_cast<std::int64_t>(r.index), r.energy, r.avg_imbalance.real(), r.avg_imbalance.imag(),
                   std::abs(r.avg_imbalance), r.avg_current, std::int64_t{r.valid}});
            if (r.valid) cp.emplace_back(r.avg_imbalance.real(), r.avg_imbalance.imag());
        }
        panels.push_back({fmt::format("I/N eigenvalues and classical averages, E/N = {:.2f} +- {:.2f} (N={})", e,
                                      cfg.fig2_halfwidth, cfg.region_N),
                          "Re", "Im", false, false,
                          {scatter("quantum lambda", qp), scatter("classical <I/N>", cp)}, {}});
    }
    s.write(q, "fig2_quantum.csv");
    s.write(c, "fig2_classical.csv");
    s.write(panels, "fig2.svg");
}

void figure3(Session& s, bool compute) {
    const auto& cfg = s.cfg();
    const auto me = need_mc(s, compute);
    const auto sizes = analyze(s, cfg.sizes);
    io::StageTimer t(s.manifest, "fig3");
    const auto sc = pipeline::scaling_analysis(sizes, me, cfg);
    io::CsvTable sig("fig3_sigma", {"observable", "N", "sigma", "count"});
    io::CsvTable fit("fig3_fits", {"observable", "exponent", "amplitude", "residual"});
    io::CsvTable ex("fig3_exceedance", {"observable", "N", "bound", "count"});
    io::Plot pa{"sigma(N) in the thermal shell", "N", "sigma", true, true, {}, {}};
    std::vector<io::Plot> panels;
    for (const auto& o : sc) {
        const auto name = observables::name(o.kind);
        std::vector<std::pair<double, double>> pts, fl;
        for (const auto& p : o.points) {
            sig.add({name, std::int64_t{p.N}, p.sigma, static_cast<std::int64_t>(p.count)});
            pts.emplace_back(p.N, p.sigma);
        }
        if (o.fit) {
            fit.add({name, o.fit->exponent, o.fit->amplitude, o.fit->residual});
            for (const auto& p : o.points) fl.emplace_back(p.N, o.fit->amplitude * std::pow(p.N, o.fit->exponent));
        } else {
            fit.add({name, std::nan(""), std::nan(""), std::nan("")});
        }
        pa.series.push_back(scatter(name, pts));
        if (!fl.empty()) pa.series.push_back(line(fmt::format("{} fit {:+.3f}", name, o.fit->exponent), fl));
        io::Plot pe{fmt::format("subspaces above bound: {}", name), "N", "count", false, false, {}, {}};
        for (std::size_t b = 0; b < o.exceedance.bounds.size(); ++b) {
            std::vector<std::pair<double, double>> cnt;
            for (std::size_t i = 0; i < o.exceedance.sizes.size(); ++i) {
                ex.add({name, std::int64_t{o.exceedance.sizes[i]}, o.exceedance.bounds[b],
                        static_cast<std::int64_t>(o.exceedance.counts[i][b])});
                cnt.emplace_back(o.exceedance.sizes[i], static_cast<double>(o.exceedance.counts[i][b]));
            }
            pe.series.push_back(line(fmt::format("> {:g}", o.exceedance.bounds[b]), cnt));
        }
        panels.push_back(std::move(pe));
    }
    panels.insert(panels.begin(), pa);
    s.write(sig, "fig3_sigma.csv");
    s.write(fit, "fig3_fits.csv");
    s.write(ex, "fig3_exceedance.csv");
    s.write(panels, "fig3.svg");
}

void report(Session& s, bool compute) {
    const auto& cfg = s.cfg();
    const auto me = need_mc(s, compute);
    const auto classical = need_classical(s, compute);
    const auto quantum = need_stats(s, compute);
    const auto sizes = analyze(s, all_sizes(cfg));
    io::StageTimer t(s.manifest, "report");
    std::vector<pipeline::SizeAnalysis> region;
    for (const auto& a : sizes) {
        if (a.N <= cfg.region_N) region.push_back(a);
    }
    const auto tabs = pipeline::region_tables(region, me, cfg.region_N);
    const auto r = pipeline::build_report(cfg, tabs, quantum, classical, pipeline::scaling_analysis(sizes, me, cfg));
    s.write_text(pipeline::report_json(r), "report.json");
    const auto text = pipeline::report_text(r);
    s.write_text(text, "report.txt");
    std::cout << text;
}

void calibrate(Session& s, double energy, int count) {
    io::StageTimer t(s.manifest, "calibrate");
    auto fast_cfg = pipeline::integration_config(s.cfg());
    fast_cfg.mode = classical::Mode::fast;
    auto paper_cfg = fast_cfg;
    paper_cfg.mode = classical::Mode::paper;
    const classical::Coupling c{s.cfg().J, s.cfg().U};
    const auto seed = pipeline::ensemble_seed(s.cfg().seed, energy);
    const auto states = classical::sample_initial_conditions(c, energy, s.cfg().ensemble_dE, count, seed);
    std::vector<classical::TrajectoryResult> fast(states.size()), paper(states.size());
    const long n = static_cast<long>(states.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        fast[i] = classical::integrate(states[i], c, fast_cfg, rng::splitmix64(seed) ^ i);
        paper[i] = classical::integrate(states[i], c, paper_cfg);
    }
    io::CsvTable tab("calibration", {"index", "E", "fast_rate", "paper_distance", "paper_chaotic", "fast_valid", "paper_valid",
                                     "paper_energy_drift"});
    for (std::size_t i = 0; i < states.size(); ++i) {
        tab.add({static_cast<std::int64_t>(i), fast[i].energy, fast[i].chaos_metric, paper[i].chaos_metric,
                 std::int64_t{paper[i].chaotic}, std::int64_t{fast[i].valid}, std::int64_t{paper[i].valid},
                 paper[i].energy_drift});
    }
    s.write(tab, fmt::format("classical/calibration_E{:+.3f}.csv", energy));
    const double th = classical::calibrate_fast_threshold(fast, paper);
    std::cout << fmt::format("calibrated fast_threshold = {:.6g} (from {} trajectories at E/N={:+.3f})\n", th, count, energy);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geth-lab: generalized eigenstate thermalization on the Bose-Hubbard trimer"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "override the run seed");
        sub->add_option("--workers", o.workers, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
        sub->add_option("--cache", o.cache, "spectrum cache directory (default: GETHLAB_CACHE, then config)");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--mode", o.mode, "classical chaos mode")->check(CLI::IsMember({"fast", "paper"}));
    };

    std::vector<int> sizes;
    auto* spectrum = app.add_subcommand("spectrum", "diagonalize and cache the rotation sectors");
    add_common(spectrum);
    spectrum->add_option("--N", sizes, "particle numbers (default: config sizes)");

    auto* subspaces = app.add_subcommand("subspaces", "assemble degenerate triplets and project h12, C, I");
    add_common(subspaces);
    subspaces->add_option("--N", sizes, "particle numbers (default: config sizes)");

    std::vector<double> energies;
    bool do_calibrate = false;
    double calib_energy = -3.6;
    int calib_count = 20;
    std::optional<int> count;
    auto* cls = app.add_subcommand("classical", "classical trajectory ensembles");
    add_common(cls);
    cls->add_option("--energy", energies, "E/N values (default: configured sweep plus figure energies)");
    cls->add_option("--count", count, "trajectories per energy");
    cls->add_flag("--calibrate", do_calibrate, "compare fast and paper chaos modes and fit the fast threshold");
    cls->add_option("--calibrate-energy", calib_energy, "E/N used for calibration");
    cls->add_option("--calibrate-count", calib_count, "trajectories used for calibration");

    std::optional<std::uint64_t> samples;
    std::string domain;
    auto* mc = app.add_subcommand("mc", "microcanonical h12 averages on the configured grid");
    add_common(mc);
    mc->add_option("--samples", samples, "phase-space samples");
    mc->add_option("--domain", domain, "sampling domain")->check(CLI::IsMember({"ball", "sphere"}));

    std::optional<int> stats_n;
    auto* stats = app.add_subcommand("stats", "level-spacing statistics and Berry-Robnik fits");
    add_common(stats);
    stats->add_option("--N", stats_n, "particle number (default: config stats_N)");

    std::string which;
    auto* figure = app.add_subcommand("figure", "figure data tables and SVG plots");
    add_common(figure);
    figure->add_option("which", which, "fig1, fig2 or fig3")->required()->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    figure->add_flag("--compute-missing", o.compute_missing, "run missing prerequisite stages instead of failing");

    auto* rep = app.add_subcommand("report", "region classification report (JSON and text)");
    add_common(rep);
    rep->add_flag("--compute-missing", o.compute_missing, "run missing prerequisite stages instead of failing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        auto s = open_session(o, command);
        if (command == "spectrum" || command == "subspaces") {
            const auto list = sizes.empty() ? all_sizes(s.cfg()) : sizes;
            std::optional<microcan::McGrid> me;
            if (command == "subspaces" && fs::exists(s.out / tables::kMicrocanonical)) {
                me = tables::read_microcanonical(s.out / tables::kMicrocanonical, s.producer("mc"));
            }
            for (int N : list) {
                if (command == "spectrum") {
                    io::StageTimer t(s.manifest, fmt::format("spectrum N={}", N));
                    const auto set = pipeline::sector_set(s.ctx, N);
                    s.write(tables::spectrum_table(set), tables::spectrum_file(N));
                } else {
                    io::StageTimer t(s.manifest, fmt::format("subspaces N={}", N));
                    const auto a = pipeline::analyze_size(s.ctx, N);
                    s.write(tables::subspace_table(a, me ? &*me : nullptr), tables::subspace_file(N));
                }
            }
            std::cout << fmt::format("{} diagonalizations, {} cache hits\n", s.ctx.diagonalizations, s.ctx.cache.hits());
        } else if (command == "classical") {
            if (count) s.ctx.config.ensemble_count = *count;
            if (do_calibrate) {
                calibrate(s, calib_energy, calib_count);
            } else {
                const auto list = energies.empty() ? sweep_energies(s.cfg()) : energies;
                const auto pts = run_classical(s, list);
                for (const auto& p : pts) {
                    std::cout << fmt::format("E/N={:+.3f} valid={}/{} chaos={:.3f} f_I={:.3f} f_C={:.3f}{}\n", p.energy,
                                             p.summary.valid, p.summary.total, p.summary.chaos_fraction,
                                             p.summary.fraction_imbalance, p.summary.fraction_current,
                                             p.error.empty() ? "" : "  (" + p.error + ")");
                }
            }
        } else if (command == "mc") {
            if (samples) s.ctx.config.mc_samples = *samples;
            if (!domain.empty()) s.ctx.config.mc_domain = domain;
            const auto grid = run_mc(s);
            std::size_t low = 0;
            for (const auto& e : grid.estimates()) low += e.low_confidence;
            std::cout << fmt::format("{} grid points, {} low-confidence\n", grid.estimates().size(), low);
        } else if (command == "stats") {
            const auto p = run_stats(s, stats_n.value_or(s.cfg().stats_N), s.cfg().window, s.cfg().min_levels);
            std::cout << fmt::format("{} windows fitted, {} sector-windows skipped\n", p.points.size(), p.skipped.size());
        } else if (command == "figure") {
            if (which == "fig1") figure1(s, o.compute_missing);
            if (which == "fig2") figure2(s, o.compute_missing);
            if (which == "fig3") figure3(s, o.compute_missing);
        } else if (command == "report") {
            report(s, o.compute_missing);
        }
        s.finish();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const MissingPrerequisite& e) {
        std::cerr << "missing prerequisite: " << e.what() << "\n  produce it with: " << e.command() << '\n';
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
