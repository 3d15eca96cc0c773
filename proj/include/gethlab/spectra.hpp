#pragma once

#include "gethlab/fock.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <vector>

// Bose-Hubbard trimer Hamiltonian, per-sector spectra and degenerate triplets.
namespace gethlab::spectra {

using cplx = std::complex<double>;

struct ModelParams {
    int N = 0;
    double J = 1.0;
    double U = -5.0;

    void validate() const;  // throws std::invalid_argument
};

/// sum_i [ -J (a+_{i+1} a_i + h.c.) + (U/N) n_i (n_i - 1) ] on the full Fock basis (real, sparse).
Eigen::SparseMatrix<double> fock_hamiltonian(const ModelParams& params);
/// Same operator restricted to a sector: B^dagger H B.
Eigen::MatrixXcd build_hamiltonian(const ModelParams& params, const fock::SectorBasis& basis);

struct SectorSpectrum {
    fock::SectorLabel label;
    Eigen::VectorXd energies;      // ascending
    Eigen::MatrixXcd eigenvectors;  // columns, coefficients over the sector basis (may be empty)

    Eigen::Index size() const { return energies.size(); }
    bool has_vectors() const { return eigenvectors.cols() == energies.size(); }
};

/// Dense eigendecomposition of a sector Hamiltonian. Complex rotation sectors are mapped to a
/// real symmetric problem through the antiunitary reflection-conjugation symmetry first.
/// Numerical failures throw NumericalError naming the sector.
SectorSpectrum diagonalize_sector(const Eigen::MatrixXcd& h, const fock::SectorBasis& basis, bool vectors = true);

/// The omega^2 sector obtained from the omega sector: identical energies, conjugated vectors.
SectorSpectrum conjugate_spectrum(const SectorSpectrum& omega);

/// Unitary W (size x size, at most two entries per column) with W^dagger H W real for every
/// Hamiltonian of the model; identity for sectors whose basis is already real.
Eigen::SparseMatrix<cplx> real_structure(const fock::SectorBasis& basis);

struct DegenerateSubspace {
    int index = 0;
    double energy = 0.0;  // mean of the three member energies
    Eigen::Index r1_level = 0;
    Eigen::Index pair_level = 0;  // shared level index in the omega and omega^2 sectors
    double pairing_residual = 0.0;

    static constexpr int dimension = 3;
};

struct SubspaceAssembly {
    std::vector<DegenerateSubspace> subspaces;  // ascending energy
    std::vector<Eigen::Index> unpaired_r1;       // r = 1 levels left after matching
};

/// Doublets swept in ascending energy, each matched to the nearest unused r = 1 level.
SubspaceAssembly assemble_subspaces(const Eigen::VectorXd& r1_energies, const Eigen::VectorXd& pair_energies);

struct EnergyShell {
    double E = 0.0;       // per particle
    double deltaE = 0.0;  // half-width per particle, > 0
};

/// Subspaces with |E_n/N - shell.E| <= shell.deltaE, energy order preserved.
std::vector<DegenerateSubspace> select_shell(const std::vector<DegenerateSubspace>& subspaces, int N,
                                             const EnergyShell& shell);

/// The three member states of a subspace as Fock-space vectors: r = 1, omega, omega^2.
struct SubspaceMembers {
    Eigen::VectorXcd r1;
    Eigen::VectorXcd omega;
    Eigen::VectorXcd omega2;
};

/// Everything needed to expand subspace members over the Fock basis.
struct SectorSet {
    ModelParams params;
    fock::SectorBasis r1_basis;
    fock::SectorBasis omega_basis;
    SectorSpectrum r1;
    SectorSpectrum omega;

    SubspaceMembers members(const DegenerateSubspace& s) const;
};

/// Sector Hamiltonian assembled as a real symmetric matrix and diagonalized with LAPACK.
SectorSpectrum solve_sector(const ModelParams& params, const fock::SectorBasis& basis, bool vectors = true);

/// Builds and diagonalizes the r = 1 and omega sectors (omega^2 follows by conjugation).
SectorSet solve_sectors(const ModelParams& params);

}  // namespace gethlab::spectra
