#include "gethlab/rmtstats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gethlab::rmtstats {

namespace {

constexpr double kPi = std::numbers::pi;

double poly_eval(const Eigen::VectorXd& c, double t) {
    double v = 0.0;
    for (Eigen::Index j = c.size() - 1; j >= 0; --j) v = v * t + c(j);
    return v;
}

double poly_deriv(const Eigen::VectorXd& c, double t) {
    double v = 0.0;
    for (Eigen::Index j = c.size() - 1; j >= 1; --j) v = v * t + static_cast<double>(j) * c(j);
    return v;
}

Eigen::VectorXd fit_staircase(const std::vector<double>& t, int degree) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            A(k, j) = p;
            p *= t[static_cast<std::size_t>(k)];
        }
        y(k) = static_cast<double>(k) + 0.5;
    }
    return A.colPivHouseholderQr().solve(y);
}

bool increasing(const Eigen::VectorXd& c, const std::vector<double>& t) {
    constexpr int probes = 256;
    const double a = t.front(), b = t.back();
    for (int i = 0; i <= probes; ++i) {
        if (poly_deriv(c, a + (b - a) * i / probes) <= 0.0) return false;
    }
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k] > t[k - 1] && !(poly_eval(c, t[k]) > poly_eval(c, t[k - 1]))) return false;
    }
    return true;
}

double neg_log_likelihood(std::span<const double> s, double rho) {
    double ll = 0.0;
    for (double x : s) {
        const double p = berry_robnik_pdf(x, rho);
        ll += std::log(std::max(p, std::numeric_limits<double>::min()));
    }
    return -ll;
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Stationary renewal sequence with the given gap sampler (unit mean gaps scaled by 1/density).
template <class Gap>
void renewal(std::vector<double>& out, double density, double length, rng::Engine& gen, Gap&& gap) {
    if (density <= 0.0) return;
    const double scale = 1.0 / density;
    double x = -50.0 * scale;  // burn-in towards stationarity
    while (x < length) {
        x += scale * gap(gen);
        if (x >= 0.0 && x < length) out.push_back(x);
    }
}

double draw_exponential(rng::Engine& g) { return std::exponential_distribution<double>(1.0)(g); }

double draw_wigner(rng::Engine& g) {
    std::uniform_real_distribution<double> u01;
    return std::sqrt(-4.0 * std::log1p(-u01(g)) / kPi);
}

}  // namespace

SpacingWindow unfold(std::span<const double> levels, double center, double width, std::string sector,
                     std::size_t min_levels) {
    if (levels.size() < std::max<std::size_t>(min_levels, 3)) {
        throw TooFewLevels("unfold: " + std::to_string(levels.size()) + " levels in window centred at E/N=" +
                           std::to_string(center) + (sector.empty() ? "" : " sector " + sector) + ", need " +
                           std::to_string(std::max<std::size_t>(min_levels, 3)));
    }
    std::vector<double> x(levels.begin(), levels.end());
    std::sort(x.begin(), x.end());
    const double mid = 0.5 * (x.front() + x.back());
    const double half = std::max(0.5 * (x.back() - x.front()), std::numeric_limits<double>::min());
    std::vector<double> t(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) t[k] = (x[k] - mid) / half;

    SpacingWindow w;
    w.center = center;
    w.width = width;
    w.sector = std::move(sector);
    Eigen::VectorXd coeffs;
    for (int degree : {4, 3, 1}) {
        if (static_cast<int>(t.size()) <= degree) continue;
        coeffs = fit_staircase(t, degree);
        w.degree = degree;
        if (increasing(coeffs, t)) break;
    }
    w.spacings.resize(x.size() - 1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        w.spacings[k] = poly_eval(coeffs, t[k + 1]) - poly_eval(coeffs, t[k]);
        total += w.spacings[k];
    }
    const double mean = total / static_cast<double>(w.spacings.size());
    if (!(mean > 0.0)) throw TooFewLevels("unfold: degenerate window at E/N=" + std::to_string(center));
    for (auto& s : w.spacings) s /= mean;
    return w;
}

double berry_robnik_pdf(double s, double rho) {
    if (s < 0.0) return 0.0;
    const double rb = 1.0 - rho;
    const double a = rho * rho * std::exp(-rho * s) * std::erfc(0.5 * std::sqrt(kPi) * rb * s);
    const double b = (2.0 * rho * rb + 0.5 * kPi * rb * rb * rb * s) * std::exp(-rho * s - 0.25 * kPi * rb * rb * s * s);
    return a + b;
}

BerryRobnikFit fit_rho(std::span<const double> spacings, double tolerance) {
    if (spacings.empty()) throw std::invalid_argument("fit_rho: no spacings");
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = neg_log_likelihood(spacings, c), fd = neg_log_likelihood(spacings, d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = neg_log_likelihood(spacings, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = neg_log_likelihood(spacings, d);
        }
    }
    BerryRobnikFit fit;
    fit.count = spacings.size();
    fit.rho = 0.5 * (a + b);
    double best = neg_log_likelihood(spacings, fit.rho);
    for (double edge : {0.0, 1.0}) {
        const double f = neg_log_likelihood(spacings, edge);
        if (f < best) {
            best = f;
            fit.rho = edge;
        }
    }
    fit.log_likelihood = -best;
    return fit;
}

ChaosProfile chaos_profile(std::span<const SectorLevels> sectors, int N, double width, std::size_t min_levels) {
    if (N <= 0 || !(width > 0.0)) throw std::invalid_argument("chaos_profile: need N > 0 and width > 0");
    ChaosProfile out;
    double emin = std::numeric_limits<double>::infinity(), emax = -emin;
    for (const auto& s : sectors) {
        for (double e : s.energies) {
            emin = std::min(emin, e / N);
            emax = std::max(emax, e / N);
        }
    }
    if (!(emin <= emax)) return out;
    const long first = static_cast<long>(std::floor(emin / width + 1e-9));
    const long last = static_cast<long>(std::floor(emax / width + 1e-9));
    const long nw = last - first + 1;

    std::vector<ChaosPoint> points(static_cast<std::size_t>(nw));
    std::vector<std::vector<std::string>> notes(static_cast<std::size_t>(nw));
    std::vector<char> keep(static_cast<std::size_t>(nw), 0);
#pragma omp parallel for schedule(dynamic)
    for (long w = 0; w < nw; ++w) {
        const auto wi = static_cast<std::size_t>(w);
        ChaosPoint& p = points[wi];
        p.lo = static_cast<double>(first + w) * width;
        p.hi = p.lo + width;
        p.center = 0.5 * (p.lo + p.hi);
        std::vector<double> pooled;
        for (const auto& s : sectors) {
            std::vector<double> in;
            for (double e : s.energies) {
                const double x = e / N;
                if (x >= p.lo && x < p.hi) in.push_back(e);
            }
            if (in.size() < min_levels) {
                notes[wi].push_back("window [" + std::to_string(p.lo) + ", " + std::to_string(p.hi) + ") sector " +
                                    s.label + ": " + std::to_string(in.size()) + " levels, level density too low");
                continue;
            }
            const auto sw = unfold(in, p.center, width, s.label, min_levels);
            pooled.insert(pooled.end(), sw.spacings.begin(), sw.spacings.end());
            p.sectors.push_back(s.label);
        }
        if (pooled.size() < min_levels) continue;
        p.count = pooled.size();
        p.fit = fit_rho(pooled);
        keep[wi] = 1;
    }
    for (std::size_t w = 0; w < points.size(); ++w) {
        if (keep[w]) out.points.push_back(std::move(points[w]));
        for (auto& n : notes[w]) out.skipped.push_back(std::move(n));
    }
    return out;
}

std::vector<double> poisson_spacings(std::size_t n, rng::Engine& gen) {
    std::vector<double> s(n);
    for (auto& x : s) x = draw_exponential(gen);
    return s;
}

std::vector<double> wigner_spacings(std::size_t n, rng::Engine& gen) {
    std::vector<double> s(n);
    for (auto& x : s) x = draw_wigner(gen);
    return s;
}

std::vector<double> superposed_spacings(std::size_t n, double rho, rng::Engine& gen) {
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("superposed_spacings: rho outside [0, 1]");
    double length = static_cast<double>(n) * 1.1 + 100.0;
    for (;;) {
        std::vector<double> levels;
        renewal(levels, rho, length, gen, draw_exponential);
        renewal(levels, 1.0 - rho, length, gen, draw_wigner);
        std::sort(levels.begin(), levels.end());
        if (levels.size() > n) {
            std::vector<double> s(n);
            for (std::size_t k = 0; k < n; ++k) s[k] = levels[k + 1] - levels[k];
            return s;
        }
        length *= 1.5;
    }
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double f = cdf(sample[k]);
        d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
    }
    const double sq = std::sqrt(n);
    return {d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

double spacing_correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < n; ++k) ma += a[k], mb += b[k];
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    return (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
}

}  // namespace gethlab::rmtstats
