#include "gethlab/fock.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gethlab::fock {

namespace {

void require_particles(int N) {
    if (N < 1) {
        throw std::invalid_argument("particle number must be >= 1, got " + std::to_string(N));
    }
}

struct Orbit {
    std::array<Eigen::Index, 3> members{};  // R^k applied to the representative, k = 0,1,2
    int size = 3;
};

// Orbits ordered by their smallest canonical index.
std::vector<Orbit> rotation_orbits(int N) {
    const auto states = enumerate_basis(N);
    std::vector<bool> seen(states.size(), false);
    std::vector<Orbit> orbits;
    orbits.reserve(states.size() / 3 + 1);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (seen[i]) continue;
        const FockState a = states[i];
        const FockState b = apply_rotation(a);
        const FockState c = apply_rotation(b);
        std::array<Eigen::Index, 3> idx{canonical_index(a), canonical_index(b), canonical_index(c)};
        Orbit orbit;
        if (a == b) {
            orbit.size = 1;
            orbit.members = {idx[0], idx[0], idx[0]};
        } else {
            int rep = 0;
            for (int k = 1; k < 3; ++k) {
                if (idx[k] > idx[rep]) rep = k;
            }
            for (int k = 0; k < 3; ++k) orbit.members[k] = idx[(rep + k) % 3];
        }
        for (auto j : idx) seen[static_cast<std::size_t>(j)] = true;
        orbits.push_back(orbit);
    }
    return orbits;
}

SparseVector orbit_vector(const Orbit& orbit, cplx r) {
    if (orbit.size == 1) return {{orbit.members[0], cplx(1.0, 0.0)}};
    const double norm = 1.0 / std::sqrt(3.0);
    SparseVector v;
    cplx phase(1.0, 0.0);
    const cplx step = std::conj(r);  // r^{-k}
    for (int k = 0; k < 3; ++k) {
        v.push_back({orbit.members[k], norm * phase});
        phase *= step;
    }
    return v;
}

}  // namespace

std::size_t dimension(int N) {
    require_particles(N);
    const auto n = static_cast<std::size_t>(N);
    return (n + 1) * (n + 2) / 2;
}

std::vector<FockState> enumerate_basis(int N) {
    require_particles(N);
    std::vector<FockState> out;
    out.reserve(dimension(N));
    for (int n1 = N; n1 >= 0; --n1) {
        for (int n2 = N - n1; n2 >= 0; --n2) {
            out.push_back({n1, n2, N - n1 - n2});
        }
    }
    return out;
}

Eigen::Index canonical_index(const FockState& state) {
    const Eigen::Index K = state.total() - state.n1;
    return K * (K + 1) / 2 + (K - state.n2);
}

FockState apply_rotation(const FockState& s) { return {s.n3, s.n1, s.n2}; }
FockState apply_reflection(const FockState& s) { return {s.n3, s.n2, s.n1}; }

cplx rotation_eigenvalue(Rotation r) {
    const double angle = 2.0 * std::numbers::pi * static_cast<int>(r) / 3.0;
    if (r == Rotation::one) return {1.0, 0.0};
    return {std::cos(angle), std::sin(angle)};
}

SectorLabel SectorLabel::make(Rotation r, std::optional<int> s) {
    if (s && *s != 1 && *s != -1) throw std::invalid_argument("reflection parity must be +1 or -1");
    if (s && r != Rotation::one) {
        throw std::invalid_argument("reflection parity is only defined in the r = 1 sector");
    }
    return SectorLabel{r, s};
}

std::string SectorLabel::name() const {
    std::string out = "r" + std::to_string(static_cast<int>(r));
    if (s) out += (*s > 0 ? "s+" : "s-");
    return out;
}

Eigen::SparseMatrix<cplx> SectorBasis::matrix() const {
    const auto rows = static_cast<Eigen::Index>(dimension(N));
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(vectors.size() * 3);
    for (Eigen::Index b = 0; b < size(); ++b) {
        for (const auto& a : vectors[static_cast<std::size_t>(b)]) triplets.emplace_back(a.index, b, a.value);
    }
    Eigen::SparseMatrix<cplx> m(rows, size());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

Eigen::VectorXcd SectorBasis::expand(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) const {
    if (coeffs.size() != size()) throw std::invalid_argument("coefficient count does not match sector size");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension(N)));
    for (Eigen::Index b = 0; b < size(); ++b) {
        const cplx c = coeffs[b];
        for (const auto& a : vectors[static_cast<std::size_t>(b)]) out[a.index] += c * a.value;
    }
    return out;
}

SectorBasis build_sector_basis(int N, SectorLabel label) {
    require_particles(N);
    label = SectorLabel::make(label.r, label.s);
    SectorBasis basis{N, label, {}};

    if (label.r == Rotation::omega2) {
        auto conj = build_sector_basis(N, SectorLabel::make(Rotation::omega));
        for (auto& v : conj.vectors) {
            for (auto& a : v) a.value = std::conj(a.value);
        }
        basis.vectors = std::move(conj.vectors);
        return basis;
    }

    const auto orbits = rotation_orbits(N);
    const cplx r = rotation_eigenvalue(label.r);
    if (!label.s) {
        for (const auto& o : orbits) {
            if (o.size == 1 && label.r != Rotation::one) continue;
            basis.vectors.push_back(orbit_vector(o, r));
        }
        return basis;
    }

    // r = 1 with reflection parity: S maps orbit sums onto orbit sums.
    const auto states = enumerate_basis(N);
    std::vector<Eigen::Index> orbit_of(states.size(), -1);
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        for (auto m : orbits[k].members) orbit_of[static_cast<std::size_t>(m)] = static_cast<Eigen::Index>(k);
    }
    const int s = *label.s;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        const auto rep = states[static_cast<std::size_t>(orbits[k].members[0])];
        const auto image = static_cast<std::size_t>(orbit_of[static_cast<std::size_t>(canonical_index(apply_reflection(rep)))]);
        if (image == k) {
            if (s == 1) basis.vectors.push_back(orbit_vector(orbits[k], r));
            continue;
        }
        if (image < k) continue;  // emitted with its partner
        SparseVector v;
        for (auto a : orbit_vector(orbits[k], r)) v.push_back({a.index, a.value * inv_sqrt2});
        for (auto a : orbit_vector(orbits[image], r)) v.push_back({a.index, a.value * (s * inv_sqrt2)});
        basis.vectors.push_back(std::move(v));
    }
    return basis;
}

namespace {
template <class Map>
Eigen::SparseMatrix<double> permutation_matrix(int N, Map map) {
    const auto states = enumerate_basis(N);
    const auto n = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(states.size());
    for (Eigen::Index j = 0; j < n; ++j) t.emplace_back(canonical_index(map(states[static_cast<std::size_t>(j)])), j, 1.0);
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}
}  // namespace

Eigen::SparseMatrix<double> rotation_matrix(int N) { return permutation_matrix(N, apply_rotation); }
Eigen::SparseMatrix<double> reflection_matrix(int N) { return permutation_matrix(N, apply_reflection); }

}  // namespace gethlab::fock
