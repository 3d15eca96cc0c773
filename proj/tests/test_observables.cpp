#include "doctest.h"
#include "oracles.hpp"

#include "gethlab/linalg.hpp"
#include "gethlab/observables.hpp"
#include "gethlab/rng.hpp"

#include <algorithm>

using namespace gethlab;
using observables::Kind;
using cplx = std::complex<double>;

namespace {

struct Prepared {
    spectra::SectorSet set;
    std::vector<spectra::DegenerateSubspace> subspaces;
};

Prepared prepare(int N) {
    Prepared p{spectra::solve_sectors({N, 1.0, -5.0}), {}};
    p.subspaces = spectra::assemble_subspaces(p.set.r1.energies, p.set.omega.energies).subspaces;
    return p;
}

Eigen::MatrixXcd dense(const Eigen::SparseMatrix<cplx>& m) { return Eigen::MatrixXcd(m); }

/// Greedy multiset distance between two eigenvalue triples.
double multiset_distance(std::array<cplx, 3> a, std::array<cplx, 3> b) {
    std::array<int, 3> perm{0, 1, 2};
    double best = 1e300;
    do {
        double d = 0;
        for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a[k] - b[perm[k]]));
        best = std::min(best, d);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("observable names and widths") {
    CHECK(observables::name(Kind::current) == "C");
    CHECK(observables::kind_from_name("I") == Kind::imbalance);
    CHECK_THROWS_AS(observables::kind_from_name("x"), std::invalid_argument);
    CHECK(observables::spectral_width(Kind::hopping12) == 2.0);
    CHECK(observables::spectral_width(Kind::current) == doctest::Approx(2 * std::sqrt(3.0)));
    CHECK(observables::spectral_width(Kind::imbalance) == 1.0);
    CHECK_FALSE(observables::ObservableSpec::of(Kind::imbalance).hermitian);
    CHECK(observables::ObservableSpec::of(Kind::current).hermitian);
}

TEST_CASE("operators match the dense oracle") {
    for (int N : {1, 2, 5, 8}) {
        for (int k = 0; k < 3; ++k) {
            const auto op = observables::build_observable(static_cast<Kind>(k), N);
            CHECK((dense(op) - oracle::observable(k, N)).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("operator values on reference states") {
    const int N = 12;
    const Eigen::MatrixXcd I = dense(observables::build_observable(Kind::imbalance, N));
    CHECK(std::abs(I(fock::canonical_index({N, 0, 0}), fock::canonical_index({N, 0, 0})) - 1.0) < 1e-15);
    CHECK(std::abs(I(fock::canonical_index({4, 4, 4}), fock::canonical_index({4, 4, 4}))) < 1e-15);

    const Eigen::MatrixXcd C1 = dense(observables::build_observable(Kind::current, 1));
    const auto ec = oracle::sorted_eigenvalues(C1);
    CHECK(ec.front() == doctest::Approx(-std::sqrt(3.0)));
    CHECK(ec.back() == doctest::Approx(std::sqrt(3.0)));

    const Eigen::MatrixXcd h = dense(observables::build_observable(Kind::hopping12, 20));
    const auto eh = oracle::sorted_eigenvalues(h);
    CHECK(eh.front() == doctest::Approx(-1.0));
    CHECK(eh.back() == doctest::Approx(1.0));
}

TEST_CASE("projected h12 trace matches the dense sandwich at N = 4") {
    const auto p = prepare(4);
    const Eigen::MatrixXcd h = oracle::observable(0, 4);
    const auto op = observables::build_observable(Kind::hopping12, 4);
    for (const auto& s : p.subspaces) {
        const auto m = p.set.members(s);
        const auto proj = observables::project_observable(op, Kind::hopping12, m, s);
        const cplx ref = m.r1.dot(h * m.r1) + m.omega.dot(h * m.omega) + m.omega2.dot(h * m.omega2);
        CHECK(std::abs(proj.trace - ref) <= 1e-12);
    }
}

TEST_CASE("exact identities on every subspace, N in {30, 60}") {
    for (int N : {30, 60}) {
        const auto p = prepare(N);
        const std::array kinds{Kind::hopping12, Kind::current, Kind::imbalance};
        const auto tabs = observables::project_subspaces(p.set, p.subspaces, kinds);
        for (const auto& t : tabs) {
            for (const auto& r : t.rows) {
                const cplx sum = r.eigenvalues[0] + r.eigenvalues[1] + r.eigenvalues[2];
                CHECK(std::abs(sum - r.trace) <= 1e-10);
                if (t.kind != Kind::hopping12) CHECK(std::abs(r.trace) <= 1e-10);
                if (t.kind != Kind::imbalance) {
                    CHECK((r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
                    for (const auto& l : r.eigenvalues) CHECK(l.imag() == 0.0);
                }
                if (t.kind == Kind::imbalance) {
                    for (int a = 0; a < 3; ++a) CHECK(std::abs(r.matrix(a, a)) <= 1e-10);
                    std::array<cplx, 3> conj{std::conj(r.eigenvalues[0]), std::conj(r.eigenvalues[1]),
                                             std::conj(r.eigenvalues[2])};
                    CHECK(multiset_distance(r.eigenvalues, conj) <= 1e-8);
                }
                if (t.kind == Kind::current) {
                    CHECK(std::abs(r.matrix(1, 1) + r.matrix(2, 2)) <= 1e-9);
                    CHECK(std::abs(r.matrix(0, 0)) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("eigenvalues are independent of the basis inside a subspace") {
    const auto p = prepare(24);
    auto gen = rng::stream(7, 0);
    std::normal_distribution<double> g;
    const std::array kinds{Kind::hopping12, Kind::current, Kind::imbalance};
    for (std::size_t i = 0; i < p.subspaces.size(); i += 7) {
        const auto& s = p.subspaces[i];
        const auto m = p.set.members(s);
        Eigen::Matrix3cd z;
        for (int a = 0; a < 9; ++a) z.data()[a] = cplx(g(gen), g(gen));
        const Eigen::Matrix3cd q = Eigen::HouseholderQR<Eigen::Matrix3cd>(z).householderQ();
        spectra::SubspaceMembers mixed;
        mixed.r1 = q(0, 0) * m.r1 + q(1, 0) * m.omega + q(2, 0) * m.omega2;
        mixed.omega = q(0, 1) * m.r1 + q(1, 1) * m.omega + q(2, 1) * m.omega2;
        mixed.omega2 = q(0, 2) * m.r1 + q(1, 2) * m.omega + q(2, 2) * m.omega2;
        for (auto k : kinds) {
            const auto op = observables::build_observable(k, 24);
            const auto a = observables::project_observable(op, k, m, s);
            const auto b = observables::project_observable(op, k, mixed, s);
            CHECK(multiset_distance(a.eigenvalues, b.eigenvalues) <= 1e-9);
        }
    }
}

TEST_CASE("3x3 general eigensolver and closed-form fallback") {
    auto gen = rng::stream(11, 0);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Matrix3cd m;
        for (int a = 0; a < 9; ++a) m.data()[a] = cplx(g(gen), g(gen));
        for (const auto& e : {linalg::general_eig3(m), linalg::general_eig3_closed_form(m)}) {
            for (int k = 0; k < 3; ++k) {
                const Eigen::Vector3cd v = e.vectors.col(k);
                CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
                CHECK((m * v - e.values[k] * v).norm() <= 1e-9 * m.norm());
            }
        }
    }
    SUBCASE("defective and zero matrices") {
        Eigen::Matrix3cd jordan = Eigen::Matrix3cd::Zero();
        jordan(0, 1) = 1.0;
        const auto e = linalg::general_eig3(jordan);
        for (const auto& l : e.values) CHECK(std::abs(l) <= 1e-6);
        const auto z = linalg::general_eig3(Eigen::Matrix3cd::Zero());
        for (const auto& l : z.values) CHECK(l == cplx(0.0));
    }
    SUBCASE("cubic roots") {
        const auto r = linalg::cubic_roots(-6.0, 11.0, -6.0);
        std::vector<double> re{r[0].real(), r[1].real(), r[2].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(1.0));
        CHECK(re[1] == doctest::Approx(2.0));
        CHECK(re[2] == doctest::Approx(3.0));
    }
}

TEST_CASE("lambda cloud") {
    const auto p = prepare(30);
    const std::array kinds{Kind::imbalance};
    const auto tab = observables::project_subspaces(p.set, p.subspaces, kinds).front();
    const auto cloud = observables::lambda_cloud(tab, {-4.2, 0.3});
    std::size_t brute = 0;
    for (const auto& r : tab.rows) brute += std::abs(r.energy / 30 + 4.2) <= 0.3;
    CHECK(cloud.size() == brute);
    REQUIRE(!cloud.empty());
    const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
    for (const auto& c : cloud) {
        CHECK(std::abs(c.energy_per_particle + 4.2) <= 0.3);
        std::array<cplx, 3> rotated{w * c.eigenvalues[0], w * c.eigenvalues[1], w * c.eigenvalues[2]};
        CHECK(multiset_distance(c.eigenvalues, rotated) <= 1e-8);
    }
}
