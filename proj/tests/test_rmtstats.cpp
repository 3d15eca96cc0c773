#include "doctest.h"
#include "oracles.hpp"

#include "gethlab/rmtstats.hpp"

#include <cmath>
#include <numeric>

using namespace gethlab;
using namespace gethlab::rmtstats;

namespace {

std::vector<double> cumulative(const std::vector<double>& spacings, double start = 0.0) {
    std::vector<double> x{start};
    for (double s : spacings) x.push_back(x.back() + s);
    return x;
}

double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double ss = 0;
    for (std::size_t k = 0; k < a.size(); ++k) ss += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(ss / double(a.size()));
}

}  // namespace

TEST_CASE("Berry-Robnik density") {
    for (double s : {0.0, 0.3, 1.0, 2.5, 7.0}) {
        CHECK(berry_robnik_pdf(s, 1.0) == doctest::Approx(std::exp(-s)).epsilon(1e-14));
        const double wigner = std::numbers::pi * s / 2 * std::exp(-std::numbers::pi * s * s / 4);
        CHECK(berry_robnik_pdf(s, 0.0) == doctest::Approx(wigner).epsilon(1e-14));
    }
    CHECK(berry_robnik_pdf(-1.0, 0.5) == 0.0);
    for (double rho : {0.0, 0.3, 0.7, 1.0}) {
        const auto f = [rho](double s) { return berry_robnik_pdf(s, rho); };
        const auto g = [rho](double s) { return s * berry_robnik_pdf(s, rho); };
        CHECK(std::abs(oracle::simpson(f, 0.0, 60.0, 200000) - 1.0) <= 1e-6);
        CHECK(std::abs(oracle::simpson(g, 0.0, 60.0, 200000) - 1.0) <= 1e-6);
    }
    SUBCASE("complementary error function reference values") {
        CHECK(std::erfc(0.0) == 1.0);
        CHECK(std::abs(std::erfc(1.0) - 0.15729920705028513066) <= 1e-15);
        CHECK(std::abs(std::erfc(3.0) / 2.2090496998585441373e-5 - 1.0) <= 1e-12);
        CHECK(std::abs(std::erfc(0.5) - 0.47950012218695346232) <= 1e-15);
    }
}

TEST_CASE("unfolding") {
    SUBCASE("equally spaced levels") {
        std::vector<double> x;
        for (int k = 0; k < 120; ++k) x.push_back(-3.0 + 0.013 * k);
        const auto w = unfold(x, -2.5, 0.1, "r0s+");
        CHECK(w.spacings.size() == 119);
        CHECK(w.sector == "r0s+");
        for (double s : w.spacings) CHECK(std::abs(s - 1.0) <= 1e-8);
    }
    SUBCASE("too few levels") {
        const std::vector<double> x(49, 0.0);
        CHECK_THROWS_AS(unfold(x), TooFewLevels);
    }
    SUBCASE("Poisson levels give exponential spacings") {
        auto gen = rng::stream(31, 0);
        const auto lv = cumulative(poisson_spacings(3000, gen));
        const auto w = unfold(lv);
        const double mean = std::accumulate(w.spacings.begin(), w.spacings.end(), 0.0) / double(w.spacings.size());
        CHECK(std::abs(mean - 1.0) <= 1e-6);
        const auto ks = ks_test(w.spacings, [](double s) { return 1.0 - std::exp(-s); });
        CHECK(ks.p_value > 0.01);
    }
    SUBCASE("non-monotone quartic falls back to a lower degree") {
        std::vector<double> x;
        for (int k = 0; k < 40; ++k) x.push_back(1e-3 * k);
        for (int k = 0; k < 40; ++k) x.push_back(1.0 + 1e-3 * k);
        const auto w = unfold(x);
        CHECK(w.degree < 4);
        for (double s : w.spacings) CHECK(s > 0.0);
    }
    SUBCASE("unfolding is idempotent on a rigid spectrum") {
        auto gen = rng::stream(37, 0);
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        std::vector<double> x;
        for (int k = 0; k < 400; ++k) x.push_back(-3.0 + 0.002 * (k + u(gen)) + 1e-7 * k * k);
        const auto once = unfold(x);
        const auto twice = unfold(cumulative(once.spacings, 0.0));
        CHECK(rms_difference(once.spacings, twice.spacings) <= 1e-6);
    }
}

TEST_CASE("maximum-likelihood regular fraction") {
    auto gen = rng::stream(41, 0);
    CHECK(fit_rho(poisson_spacings(5000, gen)).rho == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit_rho(wigner_spacings(5000, gen)).rho <= 0.05);
    const auto mid = fit_rho(superposed_spacings(5000, 0.5, gen));
    CHECK(std::abs(mid.rho - 0.5) <= 0.08);
    CHECK(mid.count == 5000);
    CHECK(mid.chaotic_fraction() == doctest::Approx(1.0 - mid.rho));
    CHECK_THROWS_AS(fit_rho({}), std::invalid_argument);
    CHECK_THROWS_AS(superposed_spacings(10, 1.5, gen), std::invalid_argument);

    SUBCASE("fit maximizes the likelihood") {
        const auto s = superposed_spacings(2000, 0.3, gen);
        const auto f = fit_rho(s);
        for (double d : {-0.01, 0.01}) {
            const double r = std::clamp(f.rho + d, 0.0, 1.0);
            double ll = 0;
            for (double x : s) ll += std::log(berry_robnik_pdf(x, r));
            CHECK(ll <= f.log_likelihood + 1e-9);
        }
    }
}

TEST_CASE("spacing generators have unit mean") {
    auto gen = rng::stream(43, 0);
    for (const auto& s : {poisson_spacings(100000, gen), wigner_spacings(100000, gen), superposed_spacings(100000, 0.4, gen)}) {
        const double m = std::accumulate(s.begin(), s.end(), 0.0) / double(s.size());
        CHECK(m == doctest::Approx(1.0).epsilon(0.02));
    }
    const auto w = wigner_spacings(20000, gen);
    const auto ks = ks_test(w, [](double s) { return 1.0 - std::exp(-std::numbers::pi * s * s / 4); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("chaos profile over sectors") {
    auto gen = rng::stream(47, 0);
    const int N = 100;
    // two sectors, regular for E/N in [-4, -3] and chaotic in [-3, -2], about 150 levels per window
    const double d = 1.0 / 15.0;
    std::vector<SectorLevels> sectors(2);
    for (std::size_t k = 0; k < 2; ++k) {
        sectors[k].label = k ? "r0s-" : "r0s+";
        for (double e : cumulative(poisson_spacings(1500, gen), -400.0 / d)) sectors[k].energies.push_back(e * d);
        for (double e : cumulative(wigner_spacings(1500, gen), -300.0 / d)) sectors[k].energies.push_back(e * d);
    }
    const auto p = chaos_profile(sectors, N, 0.1, 50);
    REQUIRE(!p.points.empty());
    for (std::size_t k = 1; k < p.points.size(); ++k) CHECK(p.points[k].center > p.points[k - 1].center);
    double regular = 0, chaotic = 0;
    int n_regular = 0, n_chaotic = 0;
    for (const auto& pt : p.points) {
        if (pt.lo > -3.95 && pt.hi < -2.05) CHECK(pt.sectors.size() == 2);
        CHECK(pt.count >= 50);
        if (pt.hi <= -3.1 + 1e-9) {
            CHECK(pt.fit.rho >= 0.5);
            regular += pt.fit.rho;
            ++n_regular;
        }
        if (pt.lo >= -2.9 - 1e-9 && pt.hi <= -2.1 + 1e-9) {
            CHECK(pt.fit.rho <= 0.4);
            chaotic += pt.fit.rho;
            ++n_chaotic;
        }
    }
    REQUIRE(n_regular > 0);
    REQUIRE(n_chaotic > 0);
    CHECK(regular / n_regular >= 0.85);
    CHECK(chaotic / n_chaotic <= 0.15);

    SUBCASE("sparse windows are skipped with a diagnostic") {
        const auto q = chaos_profile(sectors, N, 0.1, 100000);
        CHECK(q.points.empty());
        CHECK(!q.skipped.empty());
        CHECK(q.skipped.front().find("level density too low") != std::string::npos);
    }
    SUBCASE("independent sectors are uncorrelated") {
        const auto a = unfold(cumulative(wigner_spacings(2000, gen)));
        const auto b = unfold(cumulative(wigner_spacings(2000, gen)));
        CHECK(std::abs(spacing_correlation(a.spacings, b.spacings)) <= 4.0 / std::sqrt(double(a.spacings.size())));
        CHECK(spacing_correlation(a.spacings, a.spacings) == doctest::Approx(1.0));
    }
}
