#include "gethlab/classical.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gethlab::classical {

namespace {

namespace mp = boost::multiprecision;
using Float20 = mp::number<mp::cpp_bin_float<20>, mp::et_off>;
using Float25 = mp::number<mp::cpp_bin_float<25>, mp::et_off>;

template <class T>
struct Rk4 {
    std::array<T, 6> y;
    T J, U, h, half_h, sixth_h;

    Rk4(const ClassicalState& s, const Coupling& c, double step)
        : J(c.J), U(c.U), h(step), half_h(h / 2), sixth_h(h / 6) {
        for (int i = 0; i < 3; ++i) {
            y[static_cast<std::size_t>(i)] = s.q[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(3 + i)] = s.p[static_cast<std::size_t>(i)];
        }
    }

    void step() {
        std::array<T, 6> k1, k2, k3, k4, tmp;
        hamilton_rhs(y.data(), k1.data(), J, U);
        for (std::size_t i = 0; i < 6; ++i) tmp[i] = y[i] + half_h * k1[i];
        hamilton_rhs(tmp.data(), k2.data(), J, U);
        for (std::size_t i = 0; i < 6; ++i) tmp[i] = y[i] + half_h * k2[i];
        hamilton_rhs(tmp.data(), k3.data(), J, U);
        for (std::size_t i = 0; i < 6; ++i) tmp[i] = y[i] + h * k3[i];
        hamilton_rhs(tmp.data(), k4.data(), J, U);
        for (std::size_t i = 0; i < 6; ++i) y[i] += sixth_h * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }

    ClassicalState as_double() const {
        ClassicalState s;
        for (std::size_t i = 0; i < 3; ++i) {
            s.q[i] = static_cast<double>(y[i]);
            s.p[i] = static_cast<double>(y[3 + i]);
        }
        return s;
    }
};

}  // namespace

TrajectoryResult integrate_extended(const ClassicalState& initial, const Coupling& c, const IntegrationConfig& cfg) {
    if (!(cfg.fixed_step > 0.0) || !(cfg.sample_interval > 0.0) || cfg.t_transient > cfg.t_max) {
        throw std::invalid_argument("integrate_extended: inconsistent time grid");
    }
    const auto per_sample = static_cast<std::size_t>(std::llround(cfg.sample_interval / cfg.fixed_step));
    if (per_sample == 0) throw std::invalid_argument("integrate_extended: sample interval shorter than the step");
    const auto samples = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.sample_interval));
    const auto first_avg = static_cast<std::size_t>(std::llround(cfg.t_transient / cfg.sample_interval));

    TrajectoryResult r;
    r.initial = initial;
    r.energy = hamiltonian(initial, c);
    const double norm0 = initial.norm2();

    Rk4<Float25> fine(initial, c, cfg.fixed_step);
    Rk4<Float20> coarse(initial, c, cfg.fixed_step);

    cplx sum_i = 0.0;
    double sum_c = 0.0, sum_h = 0.0, sum_d = 0.0;
    std::size_t n_avg = 0, n_dist = 0;
    for (std::size_t k = 0; k <= samples; ++k) {
        if (k > 0) {
            for (std::size_t s = 0; s < per_sample; ++s) {
                fine.step();
                if (cfg.track_chaos) coarse.step();
            }
            r.steps += per_sample;
        }
        const auto st = fine.as_double();
        r.energy_drift = std::max(r.energy_drift, std::abs(hamiltonian(st, c) - r.energy));
        r.norm_drift = std::max(r.norm_drift, std::abs(st.norm2() - norm0));
        if (k < first_avg) continue;
        const auto ob = observables(st);
        sum_i += ob.imbalance;
        sum_c += ob.current;
        sum_h += ob.hopping12;
        ++n_avg;
        if (cfg.track_chaos) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                const double d = static_cast<double>(fine.y[i] - Float25(coarse.y[i]));
                d2 += d * d;
            }
            sum_d += std::sqrt(d2);
            ++n_dist;
        }
    }
    if (n_avg > 0) {
        r.avg_imbalance = sum_i / static_cast<double>(n_avg);
        r.avg_current = sum_c / static_cast<double>(n_avg);
        r.avg_hopping12 = sum_h / static_cast<double>(n_avg);
    }
    if (n_dist > 0) r.chaos_metric = sum_d / static_cast<double>(n_dist);
    r.valid = r.energy_drift <= cfg.max_drift && r.norm_drift <= cfg.max_drift;
    if (!r.valid) r.failure = "drift above tolerance";
    r.chaotic = cfg.track_chaos && r.chaos_metric > cfg.paper_threshold;
    r.breaks_rotation = std::abs(r.avg_imbalance) > cfg.imbalance_bound;
    r.breaks_reflection = std::abs(r.avg_current) > cfg.current_bound;
    return r;
}

}  // namespace gethlab::classical
