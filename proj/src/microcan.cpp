#include "gethlab/microcan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gethlab::microcan {

namespace {

// Neumaier summation
struct Compensated {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

}  // namespace

double evaluate(Observable o, const classical::ClassicalState& s) {
    switch (o) {
        case Observable::hopping12: return s.q[0] * s.q[1] + s.p[0] * s.p[1];
        case Observable::constant_one: return 1.0;
        default: break;
    }
    const auto v = classical::observables(s);
    switch (o) {
        case Observable::current: return v.current;
        case Observable::imbalance_re: return v.imbalance.real();
        case Observable::imbalance_im: return v.imbalance.imag();
        case Observable::imbalance_abs: return std::abs(v.imbalance);
        default: return 0.0;
    }
}

Observable observable_from_name(const std::string& name) {
    if (name == "h12") return Observable::hopping12;
    if (name == "C") return Observable::current;
    if (name == "ReI") return Observable::imbalance_re;
    if (name == "ImI") return Observable::imbalance_im;
    if (name == "absI") return Observable::imbalance_abs;
    if (name == "one") return Observable::constant_one;
    throw std::invalid_argument("unknown microcanonical observable '" + name + "' (h12, C, ReI, ImI, absI, one)");
}

classical::ClassicalState draw_state(rng::Engine& gen, Domain domain) {
    std::normal_distribution<double> gauss;
    std::array<double, 6> g{};
    double n2 = 0.0;
    for (auto& x : g) {
        x = gauss(gen);
        n2 += x * x;
    }
    double radius = std::numbers::sqrt2;
    if (domain == Domain::ball) {
        std::uniform_real_distribution<double> u01;
        radius *= std::pow(u01(gen), 1.0 / 6.0);
    }
    const double scale = radius / std::sqrt(n2);
    return {{g[0] * scale, g[1] * scale, g[2] * scale}, {g[3] * scale, g[4] * scale, g[5] * scale}};
}

std::uint64_t batch_count(const McConfig& cfg) {
    if (cfg.batch_size == 0) throw std::invalid_argument("mc: batch_size must be positive");
    return (cfg.n_samples + cfg.batch_size - 1) / cfg.batch_size;
}

void accumulate_batch(const classical::Coupling& c, Observable o, std::span<const double> grid, const McConfig& cfg,
                      std::uint64_t batch, ShellSums& out) {
    auto gen = rng::stream(cfg.seed, batch, 3);
    const std::uint64_t begin = batch * cfg.batch_size;
    const std::uint64_t n = std::min(cfg.batch_size, cfg.n_samples - std::min(begin, cfg.n_samples));
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto s = draw_state(gen, cfg.domain);
        const double h = classical::hamiltonian(s, c);
        auto it = std::lower_bound(grid.begin(), grid.end(), h - cfg.deltaE);
        if (it == grid.end() || *it > h + cfg.deltaE) continue;
        const double v = evaluate(o, s);
        for (; it != grid.end() && *it <= h + cfg.deltaE; ++it) {
            const auto g = static_cast<std::size_t>(it - grid.begin());
            ++out.count[g];
            out.sum[g] += v;
            out.sum2[g] += v * v;
        }
    }
    out.drawn += n;
}

std::vector<McEstimate> finalize(std::span<const ShellSums> batches, std::span<const double> grid, const McConfig& cfg) {
    std::vector<McEstimate> out(grid.size());
    std::uint64_t drawn = 0;
    for (const auto& b : batches) drawn += b.drawn;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        Compensated s, s2;
        std::uint64_t n = 0;
        for (const auto& b : batches) {
            n += b.count[g];
            s.add(b.sum[g]);
            s2.add(b.sum2[g]);
        }
        McEstimate& e = out[g];
        e.energy = grid[g];
        e.deltaE = cfg.deltaE;
        e.accepted = n;
        e.total = drawn;
        e.low_confidence = n < cfg.min_accepted;
        if (n == 0) {
            e.value = std::numeric_limits<double>::quiet_NaN();
            e.standard_error = std::numeric_limits<double>::infinity();
            continue;
        }
        const double mean = s.value() / static_cast<double>(n);
        e.value = mean;
        if (n > 1) {
            const double var = std::max(0.0, (s2.value() - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
            e.standard_error = std::sqrt(var / static_cast<double>(n));
        } else {
            e.standard_error = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

McGrid::McGrid(std::vector<double> energies, std::vector<McEstimate> estimates)
    : energies_(std::move(energies)), estimates_(std::move(estimates)) {
    if (energies_.size() != estimates_.size() || energies_.empty()) throw std::invalid_argument("McGrid: size mismatch");
}

namespace {
template <class F>
double interpolate(const std::vector<double>& x, double E, F&& y) {
    if (!(E >= x.front() - 1e-12 && E <= x.back() + 1e-12)) {
        throw std::out_of_range("microcanonical grid query E/N=" + std::to_string(E) + " outside [" +
                                std::to_string(x.front()) + ", " + std::to_string(x.back()) + "]");
    }
    if (x.size() == 1) return y(0);
    auto it = std::upper_bound(x.begin(), x.end(), E);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = std::clamp((E - x[lo]) / (x[hi] - x[lo]), 0.0, 1.0);
    if (w == 0.0) return y(lo);
    if (w == 1.0) return y(hi);
    return (1.0 - w) * y(lo) + w * y(hi);
}
}  // namespace

double McGrid::operator()(double E) const {
    return interpolate(energies_, E, [&](std::size_t i) { return estimates_[i].value; });
}

double McGrid::standard_error_at(double E) const {
    return interpolate(energies_, E, [&](std::size_t i) { return estimates_[i].standard_error; });
}

McGrid mc_grid(const classical::Coupling& c, Observable o, std::span<const double> grid, const McConfig& cfg) {
    if (grid.empty()) throw std::invalid_argument("mc_grid: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("mc_grid: grid must be strictly ascending");
    }
    if (!(cfg.deltaE > 0.0)) throw std::invalid_argument("mc_grid: deltaE must be positive");
    const auto nb = static_cast<long>(batch_count(cfg));
    std::vector<ShellSums> batches(static_cast<std::size_t>(nb), ShellSums(grid.size()));
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < nb; ++b) {
        accumulate_batch(c, o, grid, cfg, static_cast<std::uint64_t>(b), batches[static_cast<std::size_t>(b)]);
    }
    auto est = finalize(batches, grid, cfg);
    return McGrid(std::vector<double>(grid.begin(), grid.end()), std::move(est));
}

McEstimate mc_average(const classical::Coupling& c, Observable o, double E, const McConfig& cfg) {
    const double g[1] = {E};
    return mc_grid(c, o, g, cfg).estimates().front();
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("make_grid: need step > 0 and hi >= lo");
    std::vector<double> g;
    const auto n = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
    for (long k = 0; k <= n; ++k) g.push_back(std::round((lo + static_cast<double>(k) * step) * 1e10) / 1e10);
    return g;
}

}  // namespace gethlab::microcan
