#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

// Fixed-N Fock space of the bosonic trimer and its D3 symmetry sectors.
namespace gethlab::fock {

using cplx = std::complex<double>;

struct FockState {
    int n1 = 0;
    int n2 = 0;
    int n3 = 0;

    int total() const { return n1 + n2 + n3; }
    int operator[](int site) const { return site == 0 ? n1 : (site == 1 ? n2 : n3); }
    friend bool operator==(const FockState&, const FockState&) = default;
};

/// (N+1)(N+2)/2
std::size_t dimension(int N);

/// All states with n1+n2+n3 = N, lexicographically descending: (N,0,0), (N-1,1,0), ...
std::vector<FockState> enumerate_basis(int N);

/// Position of `state` in enumerate_basis(state.total()); O(1).
Eigen::Index canonical_index(const FockState& state);

/// |n1,n2,n3> -> |n3,n1,n2>
FockState apply_rotation(const FockState& state);
/// |n1,n2,n3> -> |n3,n2,n1>
FockState apply_reflection(const FockState& state);

enum class Rotation : int { one = 0, omega = 1, omega2 = 2 };

/// exp(2 pi i k / 3) for Rotation k.
cplx rotation_eigenvalue(Rotation r);

struct SectorLabel {
    Rotation r = Rotation::one;
    std::optional<int> s;  // reflection parity, only meaningful for r == one

    /// Throws std::invalid_argument for s not in {+1,-1} or s given with r != one.
    static SectorLabel make(Rotation r, std::optional<int> s = std::nullopt);
    /// "r0", "r1", "r2", "r0s+", "r0s-"
    std::string name() const;
    friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

struct Amplitude {
    Eigen::Index index;  // into enumerate_basis(N)
    cplx value;
};
using SparseVector = std::vector<Amplitude>;

/// Orthonormal symmetry-adapted vectors of one sector, stored sparsely over the Fock basis.
struct SectorBasis {
    int N = 0;
    SectorLabel label;
    std::vector<SparseVector> vectors;

    Eigen::Index size() const { return static_cast<Eigen::Index>(vectors.size()); }
    /// Fock-dimension x size() column matrix of the basis vectors.
    Eigen::SparseMatrix<cplx> matrix() const;
    /// sum_b coeffs[b] * vectors[b] as a dense Fock-space vector.
    Eigen::VectorXcd expand(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) const;
};

/// Builds the sector from rotation orbits. Orbit representative (largest canonical index)
/// carries +1/sqrt(3); the omega^2 sector is the complex conjugate of the omega sector.
/// With label.s set, r = 1 vectors are further combined into reflection eigenvectors.
SectorBasis build_sector_basis(int N, SectorLabel label);

/// Permutation matrices of R and S on the Fock basis (column j = image of state j).
Eigen::SparseMatrix<double> rotation_matrix(int N);
Eigen::SparseMatrix<double> reflection_matrix(int N);

}  // namespace gethlab::fock
