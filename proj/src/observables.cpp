#include "gethlab/observables.hpp"

#include "gethlab/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gethlab::observables {

ObservableSpec ObservableSpec::of(Kind kind) { return {kind, kind != Kind::imbalance, spectral_width(kind)}; }

std::string name(Kind kind) {
    switch (kind) {
        case Kind::hopping12: return "h12";
        case Kind::current: return "C";
        case Kind::imbalance: return "I";
    }
    return "?";
}

Kind kind_from_name(const std::string& s) {
    if (s == "h12") return Kind::hopping12;
    if (s == "C") return Kind::current;
    if (s == "I") return Kind::imbalance;
    throw std::invalid_argument("unknown observable '" + s + "' (expected h12, C or I)");
}

double spectral_width(Kind kind) {
    switch (kind) {
        case Kind::hopping12: return 2.0;
        case Kind::current: return 2.0 * std::sqrt(3.0);
        case Kind::imbalance: return 1.0;
    }
    return 1.0;
}

Eigen::SparseMatrix<cplx> build_observable(Kind kind, int N) {
    const auto states = fock::enumerate_basis(N);
    const auto dim = static_cast<Eigen::Index>(states.size());
    const double inv_n = 1.0 / N;
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(states.size() * (kind == Kind::current ? 6 : 2));

    // a+_to a_from |n>, scaled by `coeff`
    auto hop = [&](Eigen::Index col, const fock::FockState& s, int from, int to, cplx coeff) {
        std::array<int, 3> n{s.n1, s.n2, s.n3};
        if (n[from] == 0) return;
        const double amp = std::sqrt(static_cast<double>(n[from]) * (n[to] + 1));
        n[from] -= 1;
        n[to] += 1;
        t.emplace_back(fock::canonical_index({n[0], n[1], n[2]}), col, coeff * amp * inv_n);
    };

    const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx roots[3] = {1.0, omega, omega * omega};
    const cplx I(0.0, 1.0);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto& s = states[static_cast<std::size_t>(col)];
        switch (kind) {
            case Kind::hopping12:
                hop(col, s, 1, 0, 1.0);
                hop(col, s, 0, 1, 1.0);
                break;
            case Kind::current:
                for (int j = 0; j < 3; ++j) {
                    const int next = (j + 1) % 3;
                    hop(col, s, j, next, I);
                    hop(col, s, next, j, -I);
                }
                break;
            case Kind::imbalance: {
                const cplx v = (roots[0] * double(s.n1) + roots[1] * double(s.n2) + roots[2] * double(s.n3)) * inv_n;
                if (v != cplx(0.0)) t.emplace_back(col, col, v);
                break;
            }
        }
    }
    Eigen::SparseMatrix<cplx> op(dim, dim);
    op.setFromTriplets(t.begin(), t.end());
    return op;
}

double ProjectedObservable::max_abs_eigenvalue() const {
    double m = 0.0;
    for (const auto& l : eigenvalues) m = std::max(m, std::abs(l));
    return m;
}

void diagonalize_block(ProjectedObservable& p, Kind kind) {
    p.trace = p.matrix.trace();
    if (kind != Kind::imbalance) {
        const Eigen::Matrix3cd h = 0.5 * (p.matrix + p.matrix.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(h);
        for (int k = 0; k < 3; ++k) p.eigenvalues[k] = cplx(solver.eigenvalues()[k], 0.0);
        p.eigenvectors = solver.eigenvectors();
        return;
    }
    const auto eig = linalg::general_eig3(p.matrix);
    // order by argument in [0, 2 pi), then modulus
    std::array<int, 3> order{0, 1, 2};
    auto key = [&](int k) {
        double a = std::arg(eig.values[k]);
        if (a < 0) a += 2.0 * std::numbers::pi;
        if (std::abs(eig.values[k]) < 1e-14) a = 0.0;
        return std::pair{a, std::abs(eig.values[k])};
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    for (int k = 0; k < 3; ++k) {
        p.eigenvalues[k] = eig.values[order[k]];
        p.eigenvectors.col(k) = eig.vectors.col(order[k]);
    }
}

ProjectedObservable project_observable(const Eigen::SparseMatrix<cplx>& op, Kind kind,
                                       const spectra::SubspaceMembers& members,
                                       const spectra::DegenerateSubspace& subspace) {
    const Eigen::VectorXcd* v[3] = {&members.r1, &members.omega, &members.omega2};
    ProjectedObservable p;
    p.n = subspace.index;
    p.energy = subspace.energy;
    for (int b = 0; b < 3; ++b) {
        const Eigen::VectorXcd ov = op * (*v[b]);
        for (int a = 0; a < 3; ++a) p.matrix(a, b) = v[a]->dot(ov);  // dot() conjugates the left side
    }
    diagonalize_block(p, kind);
    return p;
}

std::vector<ProjectionTable> project_subspaces(const spectra::SectorSet& set,
                                               const std::vector<spectra::DegenerateSubspace>& subspaces,
                                               std::span<const Kind> kinds) {
    const int N = set.params.N;
    std::vector<Eigen::SparseMatrix<cplx>> ops;
    std::vector<ProjectionTable> tables;
    for (auto k : kinds) {
        ops.push_back(build_observable(k, N));
        tables.push_back({k, N, std::vector<ProjectedObservable>(subspaces.size())});
    }
    const auto count = static_cast<long>(subspaces.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < count; ++i) {
        const auto& s = subspaces[static_cast<std::size_t>(i)];
        const auto members = set.members(s);
        for (std::size_t k = 0; k < ops.size(); ++k) {
            tables[k].rows[static_cast<std::size_t>(i)] = project_observable(ops[k], kinds[k], members, s);
        }
    }
    return tables;
}

std::vector<CloudPoint> lambda_cloud(const ProjectionTable& table, const spectra::EnergyShell& shell) {
    std::vector<CloudPoint> out;
    for (const auto& p : table.rows) {
        const double e = p.energy / table.N;
        if (std::abs(e - shell.E) <= shell.deltaE) out.push_back({p.n, e, p.eigenvalues});
    }
    return out;
}

}  // namespace gethlab::observables
