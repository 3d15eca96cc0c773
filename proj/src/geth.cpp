#include "gethlab/geth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gethlab::geth {

std::vector<EthRecord> deviation_records(const std::vector<observables::ProjectedObservable>& projections, int N,
                                         double eta, const std::function<double(double)>& microcanonical) {
    if (!(eta > 0.0)) throw std::invalid_argument("deviation_records: eta must be positive");
    std::vector<EthRecord> out;
    out.reserve(projections.size());
    for (const auto& p : projections) {
        EthRecord r;
        r.n = p.n;
        r.energy_per_particle = p.energy / N;
        const cplx mean = p.trace / 3.0;
        r.deltaT = std::abs(mean - microcanonical(r.energy_per_particle)) / eta;
        for (const auto& l : p.eigenvalues) r.deltaLambda = std::max(r.deltaLambda, std::abs(l - mean) / eta);
        out.push_back(r);
    }
    return out;
}

double sample_sigma(std::span<const cplx> x) {
    if (x.size() < 2) return 0.0;
    cplx mean = 0.0;
    for (auto v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (auto v : x) ss += std::norm(v - mean);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

ScalingResult scaling_fit(std::span<const SigmaPoint> points, std::string observable) {
    if (points.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 sizes");
    std::vector<SigmaPoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.N < b.N; });
    ScalingResult r;
    r.observable = std::move(observable);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : sorted) {
        if (!(p.sigma > 0.0) || p.N <= 0) throw std::invalid_argument("scaling_fit: sigma and N must be positive");
        const double x = std::log(static_cast<double>(p.N));
        const double y = std::log(p.sigma);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        r.sizes.push_back(p.N);
        r.sigmas.push_back(p.sigma);
    }
    const double n = static_cast<double>(sorted.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw std::invalid_argument("scaling_fit: sizes must be distinct");
    r.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - r.exponent * sx) / n;
    r.amplitude = std::exp(intercept);
    double ss = 0.0;
    for (const auto& p : sorted) {
        const double e = std::log(p.sigma) - (intercept + r.exponent * std::log(static_cast<double>(p.N)));
        ss += e * e;
    }
    r.residual = std::sqrt(ss / n);
    return r;
}

ExceedanceTable exceedance_counts(const std::map<int, std::vector<double>>& deviations_by_size,
                                  std::span<const double> bounds) {
    ExceedanceTable t;
    t.bounds.assign(bounds.begin(), bounds.end());
    for (const auto& [N, devs] : deviations_by_size) {
        t.sizes.push_back(N);
        std::vector<std::size_t> row;
        for (double b : bounds) {
            row.push_back(static_cast<std::size_t>(std::count_if(devs.begin(), devs.end(), [b](double d) { return d > b; })));
        }
        t.counts.push_back(std::move(row));
    }
    return t;
}

double InitialCondition::norm() const {
    double s = 0.0;
    for (const auto& [n, c] : coefficients) {
        for (const auto& v : c) s += std::norm(v);
    }
    return std::sqrt(s);
}

void InitialCondition::validate() const {
    if (std::abs(norm() - 1.0) > 1e-12) throw std::invalid_argument("initial condition is not normalized");
}

InitialCondition InitialCondition::uniform_witness(int subspace) {
    InitialCondition ic;
    const double c = 1.0 / std::sqrt(3.0);
    ic.coefficients[subspace] = {c, c, c};
    return ic;
}

InitialCondition InitialCondition::eigenvector_witness(int subspace, int alpha) {
    if (alpha < 0 || alpha > 2) throw std::invalid_argument("eigenvector_witness: alpha must be 0, 1 or 2");
    InitialCondition ic;
    std::array<cplx, 3> c{};
    c[static_cast<std::size_t>(alpha)] = 1.0;
    ic.coefficients[subspace] = c;
    return ic;
}

cplx long_time_average(const InitialCondition& ic, const std::vector<observables::ProjectedObservable>& projections) {
    ic.validate();
    std::map<int, const observables::ProjectedObservable*> by_index;
    for (const auto& p : projections) by_index[p.n] = &p;
    cplx sum = 0.0;
    for (const auto& [n, c] : ic.coefficients) {
        auto it = by_index.find(n);
        if (it == by_index.end()) {
            throw std::out_of_range("initial condition has support on subspace " + std::to_string(n) +
                                    " which has no computed projection");
        }
        for (int a = 0; a < 3; ++a) sum += std::norm(c[static_cast<std::size_t>(a)]) * it->second->eigenvalues[static_cast<std::size_t>(a)];
    }
    return sum;
}

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::rotation_breaking: return "ROTATION_BREAKING";
        case RegionLabel::reflection_breaking: return "REFLECTION_BREAKING";
        case RegionLabel::mixed: return "MIXED";
        case RegionLabel::thermal_candidate: return "THERMAL_CANDIDATE";
        case RegionLabel::symmetric_nonthermal: return "SYMMETRIC_NONTHERMAL";
        case RegionLabel::insufficient_data: return "INSUFFICIENT_DATA";
    }
    return "?";
}

std::vector<WindowClassification> classify_regions(const std::vector<SizeTable>& tables,
                                                   const ClassifierConfig& config) {
    if (tables.empty()) return {};
    if (!(config.window > 0.0)) throw std::invalid_argument("classify_regions: window must be positive");
    const auto target = std::max_element(tables.begin(), tables.end(), [](auto& a, auto& b) { return a.N < b.N; });
    if (target->rows.empty()) return {};

    double emin = std::numeric_limits<double>::infinity();
    double emax = -emin;
    for (const auto& r : target->rows) {
        emin = std::min(emin, r.energy_per_particle);
        emax = std::max(emax, r.energy_per_particle);
    }
    // windows aligned to integer multiples of the width
    const long first = static_cast<long>(std::floor(emin / config.window + 1e-9));
    const long last = static_cast<long>(std::floor(emax / config.window + 1e-9));

    std::vector<WindowClassification> out;
    for (long w = first; w <= last; ++w) {
        WindowClassification c;
        c.lo = static_cast<double>(w) * config.window;
        c.hi = c.lo + config.window;
        auto inside = [&](double e) { return e >= c.lo && e < c.hi; };

        std::size_t above_i = 0, above_c = 0;
        for (const auto& r : target->rows) {
            if (!inside(r.energy_per_particle)) continue;
            ++c.count;
            above_i += r.max_abs_imbalance > config.imbalance_bound;
            above_c += r.max_abs_current > config.current_bound;
            c.max_imbalance = std::max(c.max_imbalance, r.max_abs_imbalance);
            c.max_current = std::max(c.max_current, r.max_abs_current);
        }
        for (const auto& t : tables) {
            double ss = 0.0;
            std::size_t k = 0;
            for (const auto& r : t.rows) {
                if (!inside(r.energy_per_particle) || !std::isfinite(r.h12_deviation)) continue;
                ss += r.h12_deviation * r.h12_deviation;
                ++k;
            }
            if (k >= config.min_subspaces) c.h12_spread.emplace_back(t.N, std::sqrt(ss / static_cast<double>(k)));
        }
        std::sort(c.h12_spread.begin(), c.h12_spread.end());
        c.h12_slope = std::numeric_limits<double>::quiet_NaN();
        if (c.h12_spread.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (auto [N, s] : c.h12_spread) {
                const double x = std::log(static_cast<double>(N));
                const double y = std::log(std::max(s, 1e-300));
                sx += x, sy += y, sxx += x * x, sxy += x * y;
            }
            const double n = static_cast<double>(c.h12_spread.size());
            c.h12_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            c.shrinking = c.h12_slope < 0.0;
        }

        if (c.count < config.min_subspaces) {
            c.label = RegionLabel::insufficient_data;
            out.push_back(std::move(c));
            continue;
        }
        c.fraction_imbalance = static_cast<double>(above_i) / static_cast<double>(c.count);
        c.fraction_current = static_cast<double>(above_c) / static_cast<double>(c.count);
        const bool all_i = c.fraction_imbalance >= config.all_fraction;
        const bool all_c = c.fraction_current >= config.all_fraction;
        const bool none_i = c.fraction_imbalance <= config.none_fraction;
        const bool none_c = c.fraction_current <= config.none_fraction;
        if (all_i && !all_c) {
            c.label = RegionLabel::rotation_breaking;
        } else if (all_c && !all_i) {
            c.label = RegionLabel::reflection_breaking;
        } else if (all_i && all_c) {
            // both orders everywhere; report the stronger order parameter relative to its bound
            c.label = (c.max_imbalance / config.imbalance_bound >= c.max_current / config.current_bound)
                          ? RegionLabel::rotation_breaking
                          : RegionLabel::reflection_breaking;
        } else if (!none_i || !none_c) {
            c.label = RegionLabel::mixed;
        } else {
            c.label = c.shrinking ? RegionLabel::thermal_candidate : RegionLabel::symmetric_nonthermal;
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gethlab::geth
