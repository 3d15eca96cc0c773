#pragma once

#include "gethlab/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

// Intensive observables h12/N, C/N, I/N and their 3x3 projections onto degenerate triplets.
namespace gethlab::observables {

using cplx = std::complex<double>;

enum class Kind { hopping12, current, imbalance };

struct ObservableSpec {
    Kind kind = Kind::hopping12;
    bool hermitian = true;
    double eta = 2.0;  // spectral width used to normalize deviations

    static ObservableSpec of(Kind kind);
};

std::string name(Kind kind);  // "h12", "C", "I"
Kind kind_from_name(const std::string& name);  // throws std::invalid_argument

/// Fixed classical ranges: h12/N -> 2, C/N -> 2 sqrt(3), I/N -> 1.
double spectral_width(Kind kind);

/// Operator divided by N, as a sparse matrix over enumerate_basis(N).
Eigen::SparseMatrix<cplx> build_observable(Kind kind, int N);

struct ProjectedObservable {
    int n = 0;            // subspace index
    double energy = 0.0;  // E_n (total, not per particle)
    Eigen::Matrix3cd matrix;  // <m_a|O|m_b>, members ordered (r=1, omega, omega^2)
    std::array<cplx, 3> eigenvalues{};
    Eigen::Matrix3cd eigenvectors;  // columns match `eigenvalues`
    cplx trace{};

    double max_abs_eigenvalue() const;
};

/// Sandwiches `op` between the three member vectors and diagonalizes the result
/// (Hermitian solver for hermitian kinds, general 3x3 solver otherwise).
ProjectedObservable project_observable(const Eigen::SparseMatrix<cplx>& op, Kind kind,
                                       const spectra::SubspaceMembers& members,
                                       const spectra::DegenerateSubspace& subspace);
/// Eigen-decomposition of an already assembled 3x3 block.
void diagonalize_block(ProjectedObservable& p, Kind kind);

struct ProjectionTable {
    Kind kind = Kind::hopping12;
    int N = 0;
    std::vector<ProjectedObservable> rows;  // same order as the input subspaces
};

/// All requested observables on all given subspaces; OpenMP-parallel over subspaces,
/// output in input order.
std::vector<ProjectionTable> project_subspaces(const spectra::SectorSet& set,
                                               const std::vector<spectra::DegenerateSubspace>& subspaces,
                                               std::span<const Kind> kinds);

struct CloudPoint {
    int n = 0;
    double energy_per_particle = 0.0;
    std::array<cplx, 3> eigenvalues{};
};

/// Eigenvalue sets of the subspaces whose E_n/N lies in the shell.
std::vector<CloudPoint> lambda_cloud(const ProjectionTable& table, const spectra::EnergyShell& shell);

}  // namespace gethlab::observables
