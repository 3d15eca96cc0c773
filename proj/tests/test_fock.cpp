#include "doctest.h"
#include "oracles.hpp"

#include "gethlab/fock.hpp"

#include <set>

using namespace gethlab::fock;

TEST_CASE("basis enumeration") {
    CHECK_THROWS_AS(enumerate_basis(0), std::invalid_argument);

    const auto b1 = enumerate_basis(1);
    REQUIRE(b1.size() == 3);
    CHECK(b1[0] == FockState{1, 0, 0});
    CHECK(b1[1] == FockState{0, 1, 0});
    CHECK(b1[2] == FockState{0, 0, 1});

    CHECK(enumerate_basis(2).size() == 6);
    CHECK(dimension(320) == 51681);
    CHECK(enumerate_basis(320).size() == 51681);

    for (int N : {1, 5, 17, 40}) {
        const auto b = enumerate_basis(N);
        const auto ref = oracle::basis(N);
        REQUIRE(b.size() == ref.states.size());
        for (std::size_t k = 0; k < b.size(); ++k) {
            CHECK(b[k].total() == N);
            CHECK(b[k].n1 == ref.states[k][0]);
            CHECK(b[k].n2 == ref.states[k][1]);
            CHECK(canonical_index(b[k]) == static_cast<Eigen::Index>(k));
        }
    }
}

TEST_CASE("rotation and reflection maps") {
    CHECK(apply_rotation({2, 1, 0}) == FockState{0, 2, 1});
    CHECK(apply_rotation({1, 1, 1}) == FockState{1, 1, 1});
    CHECK(apply_reflection({1, 1, 1}) == FockState{1, 1, 1});
    CHECK(apply_reflection({4, 2, 0}) == FockState{0, 2, 4});
    for (const auto& s : enumerate_basis(3)) {
        CHECK(apply_rotation(apply_rotation(apply_rotation(s))) == s);
        CHECK(apply_reflection(apply_reflection(s)) == s);
    }
}

TEST_CASE("D3 relations as permutation matrices, N <= 12") {
    for (int N = 1; N <= 12; ++N) {
        const Eigen::MatrixXd R = rotation_matrix(N);
        const Eigen::MatrixXd S = reflection_matrix(N);
        const auto I = Eigen::MatrixXd::Identity(R.rows(), R.cols());
        CHECK((R * R * R - I).cwiseAbs().maxCoeff() == 0.0);
        CHECK((S * S - I).cwiseAbs().maxCoeff() == 0.0);
        CHECK((S * R * S - R * R).cwiseAbs().maxCoeff() == 0.0);
        CHECK((R - oracle::permutation(N, true)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((S - oracle::permutation(N, false)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("sector labels") {
    CHECK_THROWS_AS(SectorLabel::make(Rotation::omega, 1), std::invalid_argument);
    CHECK_THROWS_AS(SectorLabel::make(Rotation::one, 0), std::invalid_argument);
    CHECK(SectorLabel::make(Rotation::one, -1).name() == "r0s-");
    CHECK(SectorLabel::make(Rotation::omega2).name() == "r2");
    CHECK(std::abs(rotation_eigenvalue(Rotation::omega) - std::polar(1.0, 2 * std::numbers::pi / 3)) < 1e-15);
}

TEST_CASE("sector dimensions") {
    CHECK(build_sector_basis(3, SectorLabel::make(Rotation::one)).size() == 4);
    CHECK(build_sector_basis(3, SectorLabel::make(Rotation::omega)).size() == 3);
    CHECK(build_sector_basis(3, SectorLabel::make(Rotation::omega2)).size() == 3);

    const auto one = build_sector_basis(1, SectorLabel::make(Rotation::one));
    REQUIRE(one.size() == 1);
    const Eigen::VectorXcd v = one.expand(Eigen::VectorXcd::Ones(1));
    for (Eigen::Index k = 0; k < 3; ++k) CHECK(std::abs(v(k) - 1.0 / std::sqrt(3.0)) < 1e-15);

    for (int N = 1; N <= 30; ++N) {
        const auto a = build_sector_basis(N, SectorLabel::make(Rotation::one)).size();
        const auto b = build_sector_basis(N, SectorLabel::make(Rotation::omega)).size();
        const auto c = build_sector_basis(N, SectorLabel::make(Rotation::omega2)).size();
        CHECK(b == c);
        CHECK(static_cast<std::size_t>(a + b + c) == dimension(N));
        const auto sp = build_sector_basis(N, SectorLabel::make(Rotation::one, 1)).size();
        const auto sm = build_sector_basis(N, SectorLabel::make(Rotation::one, -1)).size();
        CHECK(sp + sm == a);
    }
}

TEST_CASE("sector bases are complete, orthonormal rotation (and reflection) eigenvectors, N <= 12") {
    for (int N = 1; N <= 12; ++N) {
        const Eigen::MatrixXcd R = rotation_matrix(N).cast<std::complex<double>>();
        const Eigen::MatrixXcd S = reflection_matrix(N).cast<std::complex<double>>();
        std::vector<Eigen::MatrixXcd> blocks;
        for (auto r : {Rotation::one, Rotation::omega, Rotation::omega2}) {
            const auto b = build_sector_basis(N, SectorLabel::make(r));
            const Eigen::MatrixXcd B = b.matrix();
            const auto lam = rotation_eigenvalue(r);
            CHECK((B.adjoint() * B - Eigen::MatrixXcd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((R * B - lam * B).cwiseAbs().maxCoeff() <= 1e-12);
            blocks.push_back(B);
        }
        Eigen::MatrixXcd all(R.rows(), R.cols());
        all << blocks[0], blocks[1], blocks[2];
        CHECK((all.adjoint() * all - Eigen::MatrixXcd::Identity(all.cols(), all.cols())).cwiseAbs().maxCoeff() <= 1e-10);

        CHECK((blocks[2] - blocks[1].conjugate()).cwiseAbs().maxCoeff() == 0.0);

        for (int s : {1, -1}) {
            const Eigen::MatrixXcd B = build_sector_basis(N, SectorLabel::make(Rotation::one, s)).matrix();
            if (B.cols() == 0) continue;
            CHECK((S * B - double(s) * B).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((R * B - B).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("orbit representative carries +1/sqrt(3)") {
    const auto b = build_sector_basis(7, SectorLabel::make(Rotation::omega));
    for (const auto& v : b.vectors) {
        Eigen::Index top = -1;
        std::complex<double> val;
        for (const auto& a : v) {
            if (a.index > top) {
                top = a.index;
                val = a.value;
            }
        }
        CHECK(std::abs(val - 1.0 / std::sqrt(3.0)) < 1e-15);
    }
}
