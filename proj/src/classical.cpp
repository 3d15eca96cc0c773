#include "gethlab/classical.hpp"

#include "gethlab/errors.hpp"
#include "gethlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gethlab::classical {

namespace {

const cplx kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

template <std::size_t D>
using Vec = std::array<double, D>;

std::array<double, 6> pack(const ClassicalState& s) { return {s.q[0], s.q[1], s.q[2], s.p[0], s.p[1], s.p[2]}; }

ClassicalState unpack(const double* y) { return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}}; }

// Right-hand side for D/6 independent copies of the system.
template <std::size_t D>
struct Rhs {
    double J;
    double U;
    void operator()(const Vec<D>& y, Vec<D>& dy) const {
        for (std::size_t k = 0; k < D; k += 6) hamilton_rhs(y.data() + k, dy.data() + k, J, U);
    }
};

// Dormand-Prince 5(4) with FSAL.
template <std::size_t D>
class DormandPrince {
public:
    DormandPrince(Rhs<D> f, double rtol, double atol) : f_(f), rtol_(rtol), atol_(atol) {}

    void start(const Vec<D>& y) {
        y_ = y;
        f_(y_, k1_);
    }
    const Vec<D>& state() const { return y_; }
    Vec<D>& mutable_state() { return y_; }
    void refresh() { f_(y_, k1_); }

    // Attempts a step of size h. Returns the scaled error norm; on acceptance (<= 1) the
    // state advances.
    double attempt(double h) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                                b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;
        Vec<D> tmp, k2, k3, k4, k5, k6, k7, yn;
        for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
        f_(tmp, k2);
        for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
        f_(tmp, k3);
        for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
        f_(tmp, k4);
        for (std::size_t i = 0; i < D; ++i)
            tmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f_(tmp, k5);
        for (std::size_t i = 0; i < D; ++i)
            tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f_(tmp, k6);
        for (std::size_t i = 0; i < D; ++i)
            yn[i] = y_[i] + h * (b1 * k1_[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f_(yn, k7);
        double err = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            const double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(yn[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(D));
        if (err <= 1.0) {
            y_ = yn;
            k1_ = k7;
        }
        return err;
    }

private:
    Rhs<D> f_;
    double rtol_;
    double atol_;
    Vec<D> y_{};
    Vec<D> k1_{};
};

double step_factor(double err) {
    if (err == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
}

// Advances `stepper` from t to target exactly. Returns false on step-size underflow.
template <std::size_t D>
bool advance_to(DormandPrince<D>& stepper, double& t, double target, double& h, std::size_t& steps) {
    while (t < target) {
        const double remaining = target - t;
        const bool clamped = h >= remaining;
        const double h_try = clamped ? remaining : h;
        const double err = stepper.attempt(h_try);
        const double h_next = h_try * step_factor(err);
        if (err <= 1.0) {
            ++steps;
            t = clamped ? target : t + h_try;
            h = clamped ? std::max(h, h_next) : h_next;
        } else {
            h = h_next;
            if (h < 1e-14 * std::max(1.0, t)) return false;
        }
    }
    return true;
}

}  // namespace

double ClassicalState::norm2() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += q[i] * q[i] + p[i] * p[i];
    return s;
}

double hamiltonian(const ClassicalState& s, const Coupling& c) {
    double h = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int next = (i + 1) % 3;
        const double occ = s.q[i] * s.q[i] + s.p[i] * s.p[i];
        h += -c.J * (s.q[next] * s.q[i] + s.p[next] * s.p[i]) + 0.25 * c.U * occ * occ;
    }
    return h;
}

ObservableValues observables(const ClassicalState& s) {
    ObservableValues v;
    cplx phase = 1.0;
    for (int i = 0; i < 3; ++i) {
        const int next = (i + 1) % 3;
        v.imbalance += 0.5 * phase * (s.q[i] * s.q[i] + s.p[i] * s.p[i]);
        v.current += s.p[i] * s.q[next] - s.p[next] * s.q[i];
        phase *= kOmega;
    }
    v.hopping12 = s.q[0] * s.q[1] + s.p[0] * s.p[1];
    return v;
}

ClassicalState equations_of_motion(const ClassicalState& s, const Coupling& c) {
    const auto y = pack(s);
    std::array<double, 6> dy{};
    hamilton_rhs(y.data(), dy.data(), c.J, c.U);
    return unpack(dy.data());
}

TrajectoryResult integrate(const ClassicalState& initial, const Coupling& c, const IntegrationConfig& cfg,
                           std::uint64_t twin_key) {
    if (cfg.mode == Mode::paper) return integrate_extended(initial, c, cfg);
    if (!(cfg.sample_interval > 0.0) || !(cfg.t_max > 0.0) || cfg.t_transient > cfg.t_max) {
        throw std::invalid_argument("integrate: inconsistent time grid");
    }

    TrajectoryResult r;
    r.initial = initial;
    r.energy = hamiltonian(initial, c);
    const double norm0 = initial.norm2();

    Vec<12> y{};
    const auto y0 = pack(initial);
    std::copy(y0.begin(), y0.end(), y.begin());
    std::copy(y0.begin(), y0.end(), y.begin() + 6);
    double d0 = cfg.twin_perturbation;
    if (cfg.track_chaos) {
        // random direction tangent to the norm sphere
        auto gen = rng::stream(twin_key, 0, 7);
        std::normal_distribution<double> gauss;
        std::array<double, 6> dir{};
        double radial = 0.0, n2 = 0.0;
        for (auto& d : dir) d = gauss(gen);
        for (int i = 0; i < 6; ++i) radial += dir[i] * y0[i];
        for (int i = 0; i < 6; ++i) dir[i] -= radial * y0[i] / norm0;
        for (auto d : dir) n2 += d * d;
        const double scale = d0 / std::sqrt(n2);
        for (int i = 0; i < 6; ++i) y[6 + i] += scale * dir[i];
    }

    const std::size_t samples = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.sample_interval));
    const std::size_t first_avg = static_cast<std::size_t>(std::llround(cfg.t_transient / cfg.sample_interval));
    const std::size_t renorm_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.renormalize_every / cfg.sample_interval)));

    double log_growth = 0.0;
    cplx sum_i = 0.0;
    double sum_c = 0.0, sum_h = 0.0;
    std::size_t n_avg = 0;
    auto accumulate = [&](const double* s) {
        const auto st = unpack(s);
        const auto ob = observables(st);
        sum_i += ob.imbalance;
        sum_c += ob.current;
        sum_h += ob.hopping12;
        ++n_avg;
        r.energy_drift = std::max(r.energy_drift, std::abs(hamiltonian(st, c) - r.energy));
        r.norm_drift = std::max(r.norm_drift, std::abs(st.norm2() - norm0));
    };

    double t = 0.0;
    double h = 1e-3;
    bool ok = true;
    auto run = [&](auto& stepper, auto& state_of) {
        if (first_avg == 0) accumulate(stepper.state().data());
        for (std::size_t k = 1; k <= samples && ok; ++k) {
            const double target = static_cast<double>(k) * cfg.sample_interval;
            if (!advance_to(stepper, t, target, h, r.steps)) {
                ok = false;
                r.failure = "step size underflow at t=" + std::to_string(t);
                break;
            }
            const auto& s = state_of(stepper);
            if (k >= first_avg) {
                accumulate(s.data());
            } else {
                const auto st = unpack(s.data());
                r.energy_drift = std::max(r.energy_drift, std::abs(hamiltonian(st, c) - r.energy));
                r.norm_drift = std::max(r.norm_drift, std::abs(st.norm2() - norm0));
            }
            if constexpr (std::is_same_v<std::decay_t<decltype(stepper)>, DormandPrince<12>>) {
                if (k % renorm_every == 0) {
                    auto& z = stepper.mutable_state();
                    double d2 = 0.0;
                    for (int i = 0; i < 6; ++i) d2 += (z[6 + i] - z[i]) * (z[6 + i] - z[i]);
                    const double d = std::sqrt(d2);
                    if (d > 0.0) {
                        log_growth += std::log(d / d0);
                        for (int i = 0; i < 6; ++i) z[6 + i] = z[i] + (z[6 + i] - z[i]) * (d0 / d);
                        stepper.refresh();
                    }
                }
            }
        }
    };

    if (cfg.track_chaos) {
        DormandPrince<12> stepper(Rhs<12>{c.J, c.U}, cfg.rtol, cfg.atol);
        stepper.start(y);
        auto view = [](const DormandPrince<12>& s) -> const Vec<12>& { return s.state(); };
        run(stepper, view);
        r.chaos_metric = log_growth / cfg.t_max;
    } else {
        DormandPrince<6> stepper(Rhs<6>{c.J, c.U}, cfg.rtol, cfg.atol);
        stepper.start(y0);
        auto view = [](const DormandPrince<6>& s) -> const Vec<6>& { return s.state(); };
        run(stepper, view);
    }

    if (n_avg > 0) {
        r.avg_imbalance = sum_i / static_cast<double>(n_avg);
        r.avg_current = sum_c / static_cast<double>(n_avg);
        r.avg_hopping12 = sum_h / static_cast<double>(n_avg);
    }
    if (ok && (r.energy_drift > cfg.max_drift || r.norm_drift > cfg.max_drift)) {
        ok = false;
        r.failure = "drift above tolerance";
    }
    r.valid = ok;
    r.chaotic = cfg.track_chaos && r.chaos_metric > cfg.fast_threshold;
    r.breaks_rotation = std::abs(r.avg_imbalance) > cfg.imbalance_bound;
    r.breaks_reflection = std::abs(r.avg_current) > cfg.current_bound;
    return r;
}

ClassicalState propagate(const ClassicalState& initial, const Coupling& c, double t_end, double rtol, double atol) {
    DormandPrince<6> stepper(Rhs<6>{c.J, c.U}, rtol, atol);
    stepper.start(pack(initial));
    double t = 0.0, h = 1e-3;
    std::size_t steps = 0;
    if (!advance_to(stepper, t, t_end, h, steps)) throw NumericalError("propagate: step size underflow");
    return unpack(stepper.state().data());
}

std::vector<ClassicalState> sample_initial_conditions(const Coupling& c, double E, double deltaE, int count,
                                                      std::uint64_t seed) {
    if (count < 0 || !(deltaE > 0.0)) throw std::invalid_argument("sample_initial_conditions: bad count or width");
    constexpr std::uint64_t max_attempts = 10'000'000;
    std::vector<ClassicalState> out(static_cast<std::size_t>(count));
    std::vector<std::uint64_t> failed(static_cast<std::size_t>(count), 0);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        auto gen = rng::stream(seed, static_cast<std::uint64_t>(k), 1);
        std::normal_distribution<double> gauss;
        for (std::uint64_t attempt = 1;; ++attempt) {
            std::array<double, 6> g{};
            double n2 = 0.0;
            for (auto& x : g) {
                x = gauss(gen);
                n2 += x * x;
            }
            const double scale = std::sqrt(2.0 / n2);
            ClassicalState s{{g[0] * scale, g[1] * scale, g[2] * scale}, {g[3] * scale, g[4] * scale, g[5] * scale}};
            if (std::abs(hamiltonian(s, c) - E) <= deltaE) {
                out[static_cast<std::size_t>(k)] = s;
                break;
            }
            if (attempt >= max_attempts) {
                failed[static_cast<std::size_t>(k)] = attempt;
                break;
            }
        }
    }
    for (auto f : failed) {
        if (f) {
            throw NumericalError("sample_initial_conditions: acceptance rate below 1e-6 for E/N=" + std::to_string(E) +
                                 " +- " + std::to_string(deltaE) + " (no hit in " + std::to_string(f) + " draws)");
        }
    }
    return out;
}

std::vector<TrajectoryResult> run_ensemble(const Coupling& c, const EnsembleConfig& ens, const IntegrationConfig& cfg) {
    const auto states = sample_initial_conditions(c, ens.energy, ens.deltaE, ens.count, ens.seed);
    std::vector<TrajectoryResult> out(states.size());
    const long n = static_cast<long>(states.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        const auto idx = static_cast<std::uint64_t>(k);
        out[static_cast<std::size_t>(k)] = integrate(states[static_cast<std::size_t>(k)], c, cfg, rng::splitmix64(ens.seed) ^ idx);
        out[static_cast<std::size_t>(k)].index = idx;
    }
    return out;
}

EnsembleSummary summarize(const std::vector<TrajectoryResult>& results) {
    EnsembleSummary s;
    s.total = results.size();
    std::size_t chaotic = 0, bi = 0, bc = 0;
    for (const auto& r : results) {
        if (!r.valid) continue;
        ++s.valid;
        chaotic += r.chaotic;
        bi += r.breaks_rotation;
        bc += r.breaks_reflection;
    }
    if (s.valid > 0) {
        const double v = static_cast<double>(s.valid);
        s.chaos_fraction = static_cast<double>(chaotic) / v;
        s.fraction_imbalance = static_cast<double>(bi) / v;
        s.fraction_current = static_cast<double>(bc) / v;
    }
    return s;
}

double chaos_fraction(const std::vector<TrajectoryResult>& results) { return summarize(results).chaos_fraction; }

std::pair<double, double> symmetry_breaking_fraction(const std::vector<TrajectoryResult>& results) {
    const auto s = summarize(results);
    return {s.fraction_imbalance, s.fraction_current};
}

double ImbalanceClusters::rotation_mismatch() const {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        const cplx a = centroids[static_cast<std::size_t>(k)];
        const cplx b = centroids[static_cast<std::size_t>((k + 1) % 3)];
        const double d = std::abs(kOmega * a - b);
        if (std::isnan(d)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, d);
    }
    return worst;
}

ImbalanceClusters imbalance_clusters(const std::vector<TrajectoryResult>& results) {
    ImbalanceClusters cl;
    std::array<cplx, 3> sums{};
    for (const auto& r : results) {
        if (!r.valid) continue;
        double a = std::arg(r.avg_imbalance) + std::numbers::pi / 3.0;
        if (a < 0) a += 2.0 * std::numbers::pi;
        const auto k = static_cast<std::size_t>(std::min(2.0, std::floor(a / (2.0 * std::numbers::pi / 3.0))));
        sums[k] += r.avg_imbalance;
        ++cl.counts[k];
    }
    for (std::size_t k = 0; k < 3; ++k) {
        cl.centroids[k] = cl.counts[k] ? sums[k] / static_cast<double>(cl.counts[k])
                                       : cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    }
    return cl;
}

double calibrate_fast_threshold(const std::vector<TrajectoryResult>& fast, const std::vector<TrajectoryResult>& paper) {
    if (fast.size() != paper.size() || fast.empty()) {
        throw std::invalid_argument("calibrate_fast_threshold: need matching non-empty runs");
    }
    std::vector<std::pair<double, bool>> pts;
    for (std::size_t k = 0; k < fast.size(); ++k) {
        if (fast[k].valid && paper[k].valid) pts.emplace_back(fast[k].chaos_metric, paper[k].chaotic);
    }
    if (pts.empty()) throw std::invalid_argument("calibrate_fast_threshold: no valid pairs");
    std::sort(pts.begin(), pts.end());
    // candidate cuts between consecutive metrics; minimize disagreements, prefer the widest gap
    std::size_t best_err = pts.size() + 1;
    double best_cut = pts.front().first * 0.5, best_gap = -1.0;
    for (std::size_t i = 0; i <= pts.size(); ++i) {
        const double lo = i == 0 ? 0.0 : pts[i - 1].first;
        const double hi = i == pts.size() ? pts.back().first * 2.0 + 1e-3 : pts[i].first;
        std::size_t err = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) err += (j >= i) != pts[j].second;
        const double gap = hi - lo;
        if (err < best_err || (err == best_err && gap > best_gap)) {
            best_err = err;
            best_gap = gap;
            best_cut = 0.5 * (lo + hi);
        }
    }
    return best_cut;
}

}  // namespace gethlab::classical
