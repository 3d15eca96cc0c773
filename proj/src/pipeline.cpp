#include "gethlab/pipeline.hpp"

#include "gethlab/errors.hpp"
#include "gethlab/rng.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace gethlab::pipeline {

using observables::Kind;
using cplx = std::complex<double>;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

Context::Context(io::RunConfig cfg, std::filesystem::path cache_dir, Log l)
    : config(std::move(cfg)), cache(std::move(cache_dir)), log(std::move(l)) {}

spectra::ModelParams Context::params(int N) const { return {N, config.J, config.U}; }

void Context::note(const std::string& msg) const {
    if (log) log(msg);
}

spectra::SectorSet sector_set(Context& ctx, int N) {
    const auto p = ctx.params(N);
    p.validate();
    const auto r1_label = fock::SectorLabel::make(fock::Rotation::one);
    const auto om_label = fock::SectorLabel::make(fock::Rotation::omega);
    spectra::SectorSet set{p, fock::build_sector_basis(N, r1_label), fock::build_sector_basis(N, om_label), {}, {}};
    bool fresh_omega = false;
    if (auto s = ctx.cache.load(p, r1_label, true)) {
        set.r1 = std::move(*s);
    } else {
        ctx.note(fmt::format("diagonalizing N={} sector {} (dim {})", N, r1_label.name(), set.r1_basis.size()));
        set.r1 = spectra::solve_sector(p, set.r1_basis, true);
        ++ctx.diagonalizations;
        ctx.cache.store(p, set.r1);
    }
    if (auto s = ctx.cache.load(p, om_label, true)) {
        set.omega = std::move(*s);
    } else {
        ctx.note(fmt::format("diagonalizing N={} sector {} (dim {})", N, om_label.name(), set.omega_basis.size()));
        set.omega = spectra::solve_sector(p, set.omega_basis, true);
        ++ctx.diagonalizations;
        ctx.cache.store(p, set.omega);
        fresh_omega = true;
    }
    const auto r2_label = fock::SectorLabel::make(fock::Rotation::omega2);
    if (fresh_omega || !ctx.cache.load(p, r2_label, false)) ctx.cache.store_conjugate_marker(p, set.omega);
    return set;
}

std::vector<rmtstats::SectorLevels> reflection_levels(Context& ctx, int N) {
    const auto p = ctx.params(N);
    p.validate();
    std::vector<rmtstats::SectorLevels> out;
    for (int s : {+1, -1}) {
        const auto label = fock::SectorLabel::make(fock::Rotation::one, s);
        rmtstats::SectorLevels lv;
        lv.label = label.name();
        if (auto c = ctx.cache.load(p, label, false)) {
            lv.energies.assign(c->energies.begin(), c->energies.end());
        } else {
            const auto basis = fock::build_sector_basis(N, label);
            ctx.note(fmt::format("diagonalizing N={} sector {} (dim {}, eigenvalues only)", N, label.name(), basis.size()));
            auto spec = spectra::solve_sector(p, basis, false);
            ++ctx.diagonalizations;
            ctx.cache.store(p, spec);
            lv.energies.assign(spec.energies.begin(), spec.energies.end());
        }
        out.push_back(std::move(lv));
    }
    return out;
}

const observables::ProjectionTable& SizeAnalysis::table(Kind k) const {
    switch (k) {
        case Kind::hopping12: return h12;
        case Kind::current: return current;
        case Kind::imbalance: return imbalance;
    }
    return h12;
}

SizeAnalysis analyze_size(Context& ctx, int N) {
    SizeAnalysis a;
    a.N = N;
    const auto set = sector_set(ctx, N);
    auto assembly = spectra::assemble_subspaces(set.r1.energies, set.omega.energies);
    a.subspaces = std::move(assembly.subspaces);
    a.unpaired_r1 = assembly.unpaired_r1.size();
    for (const auto& s : a.subspaces) a.max_pairing_residual = std::max(a.max_pairing_residual, s.pairing_residual);
    const Kind kinds[] = {Kind::hopping12, Kind::current, Kind::imbalance};
    auto tables = observables::project_subspaces(set, a.subspaces, kinds);
    a.h12 = std::move(tables[0]);
    a.current = std::move(tables[1]);
    a.imbalance = std::move(tables[2]);
    ctx.note(fmt::format("N={}: {} subspaces, {} unpaired r=1 levels, max pairing residual {:.3g}", N,
                         a.subspaces.size(), a.unpaired_r1, a.max_pairing_residual));
    return a;
}

microcan::McConfig mc_config(const io::RunConfig& cfg) {
    microcan::McConfig m;
    m.deltaE = cfg.mc_dE;
    m.n_samples = cfg.mc_samples;
    m.seed = rng::splitmix64(cfg.seed ^ 0x6d63ULL);
    m.domain = cfg.mc_domain == "sphere" ? microcan::Domain::sphere : microcan::Domain::ball;
    return m;
}

microcan::McGrid microcanonical_h12(const io::RunConfig& cfg) {
    const auto grid = microcan::make_grid(cfg.mc_lo, cfg.mc_hi, cfg.mc_step);
    return microcan::mc_grid({cfg.J, cfg.U}, microcan::Observable::hopping12, grid, mc_config(cfg));
}

double microcanonical_at(const microcan::McGrid& grid, double e) {
    if (e < grid.energies().front() || e > grid.energies().back()) return kNaN;
    return grid(e);
}

geth::SizeTable size_table(const SizeAnalysis& a, const microcan::McGrid& me) {
    geth::SizeTable t;
    t.N = a.N;
    t.rows.reserve(a.subspaces.size());
    for (std::size_t i = 0; i < a.subspaces.size(); ++i) {
        geth::SubspaceSummary s;
        s.energy_per_particle = a.subspaces[i].energy / a.N;
        s.max_abs_imbalance = a.imbalance.rows[i].max_abs_eigenvalue();
        s.max_abs_current = a.current.rows[i].max_abs_eigenvalue();
        s.h12_deviation = a.h12.rows[i].trace.real() / 3.0 - microcanonical_at(me, s.energy_per_particle);
        t.rows.push_back(s);
    }
    return t;
}

std::vector<ObservableScaling> scaling_analysis(const std::vector<SizeAnalysis>& sizes, const microcan::McGrid& me,
                                                const io::RunConfig& cfg) {
    std::vector<ObservableScaling> out;
    for (Kind k : {Kind::hopping12, Kind::current, Kind::imbalance}) {
        ObservableScaling sc;
        sc.kind = k;
        std::map<int, std::vector<double>> magnitudes;
        for (const auto& a : sizes) {
            std::vector<cplx> devs;
            auto& mags = magnitudes[a.N];
            for (const auto& p : a.table(k).rows) {
                const double e = p.energy / a.N;
                if (e < cfg.shell_lo || e > cfg.shell_hi) continue;
                if (k == Kind::hopping12) {
                    const double d = p.trace.real() / 3.0 - microcanonical_at(me, e);
                    if (!std::isfinite(d)) continue;
                    devs.emplace_back(d);
                    mags.push_back(std::abs(d));
                } else {
                    for (const auto& l : p.eigenvalues) devs.push_back(l);
                    mags.push_back(p.max_abs_eigenvalue());
                }
            }
            sc.points.push_back({a.N, geth::sample_sigma(devs), devs.size()});
        }
        std::sort(sc.points.begin(), sc.points.end(), [](auto& x, auto& y) { return x.N < y.N; });
        std::vector<geth::SigmaPoint> usable;
        for (const auto& pt : sc.points) {
            if (pt.sigma > 0.0 && pt.count >= 2) usable.push_back(pt);
        }
        if (usable.size() >= 3) {
            sc.fit = geth::scaling_fit(usable, observables::name(k));
        } else {
            sc.note = "fewer than 3 sizes with a populated shell";
        }
        sc.exceedance = geth::exceedance_counts(magnitudes, cfg.exceedance_bounds);
        out.push_back(std::move(sc));
    }
    return out;
}

classical::IntegrationConfig integration_config(const io::RunConfig& cfg) {
    classical::IntegrationConfig ic;
    ic.mode = cfg.mode == "paper" ? classical::Mode::paper : classical::Mode::fast;
    ic.t_max = cfg.t_max;
    ic.t_transient = cfg.t_transient;
    ic.sample_interval = cfg.sample_interval;
    ic.rtol = cfg.rtol;
    ic.atol = cfg.atol;
    ic.fixed_step = cfg.fixed_step;
    ic.fast_threshold = cfg.fast_threshold;
    ic.paper_threshold = cfg.paper_threshold;
    ic.imbalance_bound = cfg.imbalance_bound;
    ic.current_bound = cfg.current_bound;
    return ic;
}

std::uint64_t ensemble_seed(std::uint64_t seed, double energy) {
    const double rounded = std::round(energy * 1e9) / 1e9;
    return rng::splitmix64(seed ^ rng::splitmix64(std::bit_cast<std::uint64_t>(rounded + 0.0)));
}

EnsemblePoint classical_point(const io::RunConfig& cfg, double energy) {
    EnsemblePoint pt;
    pt.energy = energy;
    classical::EnsembleConfig ens{energy, cfg.ensemble_dE, cfg.ensemble_count, ensemble_seed(cfg.seed, energy)};
    try {
        pt.trajectories = classical::run_ensemble({cfg.J, cfg.U}, ens, integration_config(cfg));
    } catch (const NumericalError& e) {
        pt.error = e.what();
        return pt;
    }
    pt.summary = classical::summarize(pt.trajectories);
    pt.clusters = classical::imbalance_clusters(pt.trajectories);
    return pt;
}

std::vector<EnsemblePoint> classical_sweep(const io::RunConfig& cfg, std::span<const double> energies) {
    std::vector<EnsemblePoint> out;
    for (double e : energies) out.push_back(classical_point(cfg, e));
    return out;
}

std::vector<double> classical_grid(const io::RunConfig& cfg) {
    return microcan::make_grid(cfg.classical_lo, cfg.classical_hi, cfg.classical_step);
}

geth::ClassifierConfig classifier_config(const io::RunConfig& cfg) {
    geth::ClassifierConfig c;
    c.window = cfg.window;
    c.imbalance_bound = cfg.imbalance_bound;
    c.current_bound = cfg.current_bound;
    c.all_fraction = cfg.all_fraction;
    c.none_fraction = cfg.none_fraction;
    c.min_subspaces = static_cast<std::size_t>(cfg.min_subspaces);
    return c;
}

std::vector<geth::SizeTable> region_tables(const std::vector<SizeAnalysis>& sizes, const microcan::McGrid& me,
                                           int region_N) {
    std::vector<geth::SizeTable> out;
    for (const auto& a : sizes) {
        if (a.N <= region_N) out.push_back(size_table(a, me));
    }
    if (std::none_of(out.begin(), out.end(), [&](auto& t) { return t.N == region_N; })) {
        throw MissingPrerequisite("no analysis for region_N=" + std::to_string(region_N),
                                  "gethlab subspaces --config <file> (with region_N listed in sizes)");
    }
    return out;
}

std::vector<Region> merge_regions(const std::vector<WindowReport>& windows) {
    std::vector<Region> out;
    for (const auto& w : windows) {
        if (!out.empty() && out.back().label == w.window.label && std::abs(out.back().hi - w.window.lo) < 1e-9) {
            out.back().hi = w.window.hi;
        } else {
            out.push_back({w.window.label, w.window.lo, w.window.hi});
        }
    }
    return out;
}

Report build_report(const io::RunConfig& cfg, const std::vector<geth::SizeTable>& tables,
                    const rmtstats::ChaosProfile& quantum, const std::vector<EnsemblePoint>& classical_points,
                    std::vector<ObservableScaling> scaling) {
    Report r;
    r.N = cfg.region_N;
    r.scaling = std::move(scaling);
    const auto windows = geth::classify_regions(tables, classifier_config(cfg));
    const auto target = std::find_if(tables.begin(), tables.end(), [&](auto& t) { return t.N == cfg.region_N; });

    std::vector<std::pair<double, double>> classical;  // (E, chaos fraction) for sampled energies
    for (const auto& p : classical_points) {
        if (p.error.empty() && p.summary.valid > 0) classical.emplace_back(p.energy, p.summary.chaos_fraction);
    }
    std::sort(classical.begin(), classical.end());

    for (const auto& w : windows) {
        WindowReport wr;
        wr.window = w;
        for (const auto& q : quantum.points) {
            if (std::abs(q.center - w.center()) < 1e-9) wr.quantum_chaos = q.fit.chaotic_fraction();
        }
        const double c = w.center();
        for (const auto& [e, f] : classical) {
            if (e >= w.lo && e < w.hi) wr.classical_chaos = f;
        }
        if (!wr.classical_chaos && classical.size() >= 2 && c >= classical.front().first && c <= classical.back().first) {
            auto hi = std::lower_bound(classical.begin(), classical.end(), std::make_pair(c, -1.0));
            if (hi == classical.begin()) ++hi;
            const auto lo = hi - 1;
            const double t = (c - lo->first) / (hi->first - lo->first);
            wr.classical_chaos = (1 - t) * lo->second + t * hi->second;
        }
        if (target != tables.end()) {
            for (const auto& row : target->rows) {
                if (row.energy_per_particle >= w.lo && row.energy_per_particle < w.hi && std::isfinite(row.h12_deviation)) {
                    wr.max_deltaT_h12 = std::max(wr.max_deltaT_h12,
                                                 std::abs(row.h12_deviation) / observables::spectral_width(Kind::hopping12));
                }
            }
        }
        const auto chaos = wr.quantum_chaos ? wr.quantum_chaos : wr.classical_chaos;
        wr.s1 = chaos.has_value() && *chaos <= cfg.s1_chaos_max;
        wr.s2 = w.count > 0 && (w.fraction_imbalance > cfg.none_fraction || w.fraction_current > cfg.none_fraction);
        r.windows.push_back(std::move(wr));
    }
    r.regions = merge_regions(r.windows);
    return r;
}

std::string report_json(const Report& r) {
    nlohmann::ordered_json j;
    j["N"] = r.N;
    auto& windows = j["windows"] = nlohmann::ordered_json::array();
    for (const auto& w : r.windows) {
        nlohmann::ordered_json o;
        o["E"] = w.window.center();
        o["lo"] = w.window.lo;
        o["hi"] = w.window.hi;
        o["label"] = geth::to_string(w.window.label);
        o["count"] = w.window.count;
        o["fractions"] = {{"I", w.window.fraction_imbalance}, {"C", w.window.fraction_current}};
        o["maxima"] = {{"I", w.window.max_imbalance}, {"C", w.window.max_current}};
        auto& spread = o["h12_spread"] = nlohmann::ordered_json::array();
        for (auto [N, s] : w.window.h12_spread) spread.push_back({{"N", N}, {"rms", number_or_null(s)}});
        o["h12_slope"] = number_or_null(w.window.h12_slope);
        o["max_deltaT_h12"] = w.max_deltaT_h12;
        o["chaos"] = {{"quantum", w.quantum_chaos ? nlohmann::ordered_json(*w.quantum_chaos) : nullptr},
                      {"classical", w.classical_chaos ? nlohmann::ordered_json(*w.classical_chaos) : nullptr}};
        o["S1"] = w.s1;
        o["S2"] = w.s2;
        windows.push_back(std::move(o));
    }
    auto& regions = j["regions"] = nlohmann::ordered_json::array();
    for (const auto& g : r.regions) regions.push_back({{"label", geth::to_string(g.label)}, {"lo", g.lo}, {"hi", g.hi}});
    auto& scaling = j["scaling"] = nlohmann::ordered_json::object();
    for (const auto& s : r.scaling) {
        nlohmann::ordered_json o;
        auto& pts = o["points"] = nlohmann::ordered_json::array();
        for (const auto& p : s.points) pts.push_back({{"N", p.N}, {"sigma", p.sigma}, {"count", p.count}});
        if (s.fit) {
            o["exponent"] = s.fit->exponent;
            o["amplitude"] = s.fit->amplitude;
            o["residual"] = s.fit->residual;
        } else {
            o["exponent"] = nullptr;
            o["note"] = s.note;
        }
        auto& ex = o["exceedance"];
        ex["bounds"] = s.exceedance.bounds;
        ex["sizes"] = s.exceedance.sizes;
        ex["counts"] = s.exceedance.counts;
        scaling[observables::name(s.kind)] = std::move(o);
    }
    return j.dump(2) + "\n";
}

std::string report_text(const Report& r) {
    std::string s = fmt::format("Region classification at N={}\n", r.N);
    s += fmt::format("{:>7} {:>7}  {:<22} {:>5} {:>6} {:>6} {:>8} {:>8} {:>3} {:>3}\n", "lo", "hi", "label", "n", "f_I",
                     "f_C", "chaos_q", "chaos_c", "S1", "S2");
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string("-"); };
    for (const auto& w : r.windows) {
        s += fmt::format("{:>7.2f} {:>7.2f}  {:<22} {:>5} {:>6.2f} {:>6.2f} {:>8} {:>8} {:>3} {:>3}\n", w.window.lo,
                         w.window.hi, geth::to_string(w.window.label), w.window.count, w.window.fraction_imbalance,
                         w.window.fraction_current, opt(w.quantum_chaos), opt(w.classical_chaos), w.s1 ? "x" : "",
                         w.s2 ? "x" : "");
    }
    s += "\nRegions\n";
    for (const auto& g : r.regions) s += fmt::format("  [{:6.2f}, {:6.2f})  {}\n", g.lo, g.hi, geth::to_string(g.label));
    s += "\nScaling in the thermal shell\n";
    for (const auto& sc : r.scaling) {
        if (sc.fit) {
            s += fmt::format("  {:<4} exponent {:+.3f}  amplitude {:.3g}  log-residual {:.3f}\n", observables::name(sc.kind),
                             sc.fit->exponent, sc.fit->amplitude, sc.fit->residual);
        } else {
            s += fmt::format("  {:<4} no fit ({})\n", observables::name(sc.kind), sc.note);
        }
        for (std::size_t i = 0; i < sc.exceedance.sizes.size(); ++i) {
            s += fmt::format("       N={:<4}", sc.exceedance.sizes[i]);
            for (std::size_t b = 0; b < sc.exceedance.bounds.size(); ++b) {
                s += fmt::format("  >{:g}: {}", sc.exceedance.bounds[b], sc.exceedance.counts[i][b]);
            }
            s += "\n";
        }
    }
    return s;
}

}  // namespace gethlab::pipeline
