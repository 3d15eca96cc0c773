#include "gethlab/spectra.hpp"

#include "gethlab/errors.hpp"
#include "gethlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace gethlab::spectra {

void ModelParams::validate() const {
    if (N < 1) throw std::invalid_argument("ModelParams: N must be >= 1");
    if (!std::isfinite(J) || !std::isfinite(U)) throw std::invalid_argument("ModelParams: J and U must be finite");
}

Eigen::SparseMatrix<double> fock_hamiltonian(const ModelParams& params) {
    params.validate();
    const int N = params.N;
    const auto states = fock::enumerate_basis(N);
    const auto dim = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(states.size() * 7);
    const double u = params.U / N;
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto& s = states[static_cast<std::size_t>(col)];
        std::array<int, 3> n{s.n1, s.n2, s.n3};
        double diag = 0.0;
        for (int i = 0; i < 3; ++i) diag += u * n[i] * (n[i] - 1);
        if (diag != 0.0) t.emplace_back(col, col, diag);
        if (params.J == 0.0) continue;
        // a+_j a_i for every ordered neighbor pair (i, j); on the ring all pairs are neighbors
        for (int i = 0; i < 3; ++i) {
            if (n[i] == 0) continue;
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                auto m = n;
                m[i] -= 1;
                m[j] += 1;
                const double amp = -params.J * std::sqrt(static_cast<double>(n[i]) * (n[j] + 1));
                t.emplace_back(fock::canonical_index({m[0], m[1], m[2]}), col, amp);
            }
        }
    }
    Eigen::SparseMatrix<double> h(dim, dim);
    h.setFromTriplets(t.begin(), t.end());
    return h;
}

Eigen::MatrixXcd build_hamiltonian(const ModelParams& params, const fock::SectorBasis& basis) {
    if (basis.N != params.N) throw std::invalid_argument("build_hamiltonian: basis built for a different N");
    const Eigen::SparseMatrix<cplx> h = fock_hamiltonian(params).cast<cplx>();
    const Eigen::SparseMatrix<cplx> b = basis.matrix();
    const Eigen::SparseMatrix<cplx> hs = b.adjoint() * (h * b);
    return Eigen::MatrixXcd(hs);
}

Eigen::SparseMatrix<cplx> real_structure(const fock::SectorBasis& basis) {
    const Eigen::Index n = basis.size();
    bool real = true;
    for (const auto& v : basis.vectors) {
        for (const auto& a : v) real = real && a.value.imag() == 0.0;
    }
    Eigen::SparseMatrix<cplx> w(n, n);
    if (real) {
        w.setIdentity();
        return w;
    }

    // owner[f] = (vector, coefficient) for every Fock index touched by the basis
    const auto fock_dim = static_cast<Eigen::Index>(fock::dimension(basis.N));
    std::vector<Eigen::Index> owner(static_cast<std::size_t>(fock_dim), -1);
    std::vector<cplx> coeff(static_cast<std::size_t>(fock_dim));
    for (Eigen::Index b = 0; b < n; ++b) {
        for (const auto& a : basis.vectors[static_cast<std::size_t>(b)]) {
            if (owner[static_cast<std::size_t>(a.index)] != -1) {
                throw std::logic_error("real_structure: basis vectors overlap on a Fock state");
            }
            owner[static_cast<std::size_t>(a.index)] = b;
            coeff[static_cast<std::size_t>(a.index)] = a.value;
        }
    }
    const auto states = fock::enumerate_basis(basis.N);

    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(2 * n));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx I(0.0, 1.0);
    Eigen::Index col = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        // A = S K maps v_a onto phi * v_b
        const auto& first = basis.vectors[static_cast<std::size_t>(a)].front();
        const auto image = fock::canonical_index(fock::apply_reflection(states[static_cast<std::size_t>(first.index)]));
        const Eigen::Index b = owner[static_cast<std::size_t>(image)];
        if (b < 0) throw std::logic_error("real_structure: sector not closed under reflection-conjugation");
        const cplx phi = std::conj(first.value) / coeff[static_cast<std::size_t>(image)];
        if (b == a) {
            t.emplace_back(a, col++, std::polar(1.0, std::arg(phi) / 2.0));
        } else if (a < b) {
            t.emplace_back(a, col, inv_sqrt2);
            t.emplace_back(b, col, phi * inv_sqrt2);
            ++col;
            t.emplace_back(a, col, I * inv_sqrt2);
            t.emplace_back(b, col, -I * phi * inv_sqrt2);
            ++col;
        }
    }
    if (col != n) throw std::logic_error("real_structure: pairing did not cover the sector");
    w.setFromTriplets(t.begin(), t.end());
    return w;
}

namespace {

SectorSpectrum solve_real(Eigen::MatrixXd&& h_real, const Eigen::SparseMatrix<cplx>& w,
                          const fock::SectorBasis& basis, bool vectors) {
    SectorSpectrum out;
    out.label = basis.label;
    const std::string context = "sector " + basis.label.name() + " (N=" + std::to_string(basis.N) + ")";
    if (!vectors) {
        out.energies = linalg::symmetric_eigenvalues(std::move(h_real), context);
        return out;
    }
    out.energies = linalg::symmetric_eigensolve(h_real, context);
    out.eigenvectors = w * h_real.cast<cplx>();
    return out;
}

}  // namespace

SectorSpectrum diagonalize_sector(const Eigen::MatrixXcd& h, const fock::SectorBasis& basis, bool vectors) {
    if (h.rows() != basis.size() || h.cols() != basis.size()) {
        throw std::invalid_argument("diagonalize_sector: matrix does not match sector " + basis.label.name());
    }
    const Eigen::SparseMatrix<cplx> w = real_structure(basis);
    const Eigen::MatrixXcd hw = w.adjoint() * (h * w);
    const double scale = std::max(1.0, hw.cwiseAbs().maxCoeff());
    if (hw.imag().cwiseAbs().maxCoeff() <= 1e-13 * scale) {
        return solve_real(hw.real(), w, basis, vectors);
    }
    // generic Hermitian input without the model's antiunitary symmetry
    SectorSpectrum out;
    out.label = basis.label;
    Eigen::MatrixXcd a = h;
    out.energies = linalg::hermitian_eigensolve(a, "sector " + basis.label.name() + " (N=" + std::to_string(basis.N) + ")");
    if (vectors) out.eigenvectors = std::move(a);
    return out;
}

SectorSpectrum conjugate_spectrum(const SectorSpectrum& omega) {
    SectorSpectrum out;
    out.label = fock::SectorLabel::make(fock::Rotation::omega2);
    out.energies = omega.energies;
    out.eigenvectors = omega.eigenvectors.conjugate();
    return out;
}

SubspaceAssembly assemble_subspaces(const Eigen::VectorXd& r1_energies, const Eigen::VectorXd& pair_energies) {
    SubspaceAssembly out;
    std::set<Eigen::Index> unused;
    for (Eigen::Index i = 0; i < r1_energies.size(); ++i) unused.insert(unused.end(), i);
    const double* begin = r1_energies.data();
    const double* end = begin + r1_energies.size();
    for (Eigen::Index k = 0; k < pair_energies.size() && !unused.empty(); ++k) {
        const double e = pair_energies[k];
        const auto pos = static_cast<Eigen::Index>(std::lower_bound(begin, end, e) - begin);
        auto above = unused.lower_bound(pos);
        auto pick = above;
        if (above == unused.end()) {
            pick = std::prev(above);
        } else if (above != unused.begin()) {
            auto below = std::prev(above);
            if (std::abs(r1_energies[*below] - e) <= std::abs(r1_energies[*above] - e)) pick = below;
        }
        DegenerateSubspace s;
        s.index = static_cast<int>(out.subspaces.size());
        s.r1_level = *pick;
        s.pair_level = k;
        s.energy = (r1_energies[*pick] + 2.0 * e) / 3.0;
        s.pairing_residual = std::abs(r1_energies[*pick] - e);
        out.subspaces.push_back(s);
        unused.erase(pick);
    }
    out.unpaired_r1.assign(unused.begin(), unused.end());
    return out;
}

std::vector<DegenerateSubspace> select_shell(const std::vector<DegenerateSubspace>& subspaces, int N,
                                             const EnergyShell& shell) {
    if (!(shell.deltaE > 0.0)) throw std::invalid_argument("select_shell: deltaE must be positive");
    std::vector<DegenerateSubspace> out;
    for (const auto& s : subspaces) {
        if (std::abs(s.energy / N - shell.E) <= shell.deltaE) out.push_back(s);
    }
    return out;
}

SubspaceMembers SectorSet::members(const DegenerateSubspace& s) const {
    SubspaceMembers m;
    m.r1 = r1_basis.expand(r1.eigenvectors.col(s.r1_level));
    m.omega = omega_basis.expand(omega.eigenvectors.col(s.pair_level));
    m.omega2 = m.omega.conjugate();
    return m;
}

SectorSpectrum solve_sector(const ModelParams& params, const fock::SectorBasis& basis, bool vectors) {
    params.validate();
    const Eigen::SparseMatrix<cplx> h = fock_hamiltonian(params).cast<cplx>();
    const Eigen::SparseMatrix<cplx> w = real_structure(basis);
    const Eigen::SparseMatrix<cplx> bw = basis.matrix() * w;
    const Eigen::SparseMatrix<cplx> hs = bw.adjoint() * (h * bw);
    Eigen::MatrixXd h_real = Eigen::MatrixXcd(hs).real();
    return solve_real(std::move(h_real), w, basis, vectors);
}

SectorSet solve_sectors(const ModelParams& params) {
    params.validate();
    SectorSet set{params,
                  fock::build_sector_basis(params.N, fock::SectorLabel::make(fock::Rotation::one)),
                  fock::build_sector_basis(params.N, fock::SectorLabel::make(fock::Rotation::omega)),
                  {},
                  {}};
    set.r1 = solve_sector(params, set.r1_basis, true);
    set.omega = solve_sector(params, set.omega_basis, true);
    return set;
}

}  // namespace gethlab::spectra
