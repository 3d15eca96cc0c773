#include "gethlab/linalg.hpp"

#include "gethlab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace gethlab::linalg {

namespace {

void check_info(lapack_int info, std::string_view routine, std::string_view context) {
    if (info == 0) return;
    throw NumericalError(std::string(routine) + " failed (info=" + std::to_string(info) + ") for " + std::string(context));
}

// Eigen conjugates complex cross products; the null-vector construction needs the plain one.
Eigen::Vector3cd bilinear_cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Null vector of (m - lambda I) from the largest cross product of its rows.
Eigen::Vector3cd null_vector(const Eigen::Matrix3cd& m, cplx lambda) {
    Eigen::Matrix3cd a = m - lambda * Eigen::Matrix3cd::Identity();
    Eigen::Vector3cd best = Eigen::Vector3cd::Zero();
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Eigen::Vector3cd c = bilinear_cross(a.row(i).transpose(), a.row(j).transpose());
            const double n = c.norm();
            if (n > best_norm) {
                best_norm = n;
                best = c;
            }
        }
    }
    if (best_norm <= 1e-300) {
        // rank <= 1: any vector orthogonal to the nonzero row works
        int k = 0;
        for (int i = 1; i < 3; ++i) {
            if (a.row(i).norm() > a.row(k).norm()) k = i;
        }
        Eigen::Vector3cd row = a.row(k).transpose();
        Eigen::Vector3cd e = Eigen::Vector3cd::Unit(0);
        if (std::abs(row[0]) > std::abs(row[1])) e = Eigen::Vector3cd::Unit(1);
        best = bilinear_cross(row, e);
        if (best.norm() == 0.0) best = Eigen::Vector3cd::Unit(0);
    }
    return best.normalized();
}

}  // namespace

Eigen::VectorXd symmetric_eigensolve(Eigen::MatrixXd& a, std::string_view context) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data()), "dsyevd", context);
    return w;
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a, std::string_view context) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()), "dsyevd", context);
    return w;
}

Eigen::VectorXd hermitian_eigensolve(Eigen::MatrixXcd& a, std::string_view context) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data()), "zheevd", context);
    return w;
}

std::array<cplx, 3> cubic_roots(cplx c2, cplx c1, cplx c0) {
    const cplx d0 = c2 * c2 - 3.0 * c1;
    const cplx d1 = 2.0 * c2 * c2 * c2 - 9.0 * c2 * c1 + 27.0 * c0;
    const cplx disc = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
    cplx big = (std::abs(d1 + disc) >= std::abs(d1 - disc)) ? (d1 + disc) : (d1 - disc);
    std::array<cplx, 3> x;
    if (std::abs(big) == 0.0) {
        x.fill(-c2 / 3.0);
    } else {
        const cplx C = std::pow(big / 2.0, 1.0 / 3.0);
        const cplx xi(-0.5, std::sqrt(3.0) / 2.0);
        cplx ck = C;
        for (int k = 0; k < 3; ++k) {
            x[k] = -(c2 + ck + d0 / ck) / 3.0;
            ck *= xi;
        }
    }
    for (auto& r : x) {
        for (int it = 0; it < 3; ++it) {
            const cplx f = ((r + c2) * r + c1) * r + c0;
            const cplx df = (3.0 * r + 2.0 * c2) * r + c1;
            if (std::abs(df) < 1e-300) break;
            const cplx step = f / df;
            r -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
        }
    }
    return x;
}

Eig3 general_eig3_closed_form(const Eigen::Matrix3cd& m) {
    const cplx tr = m.trace();
    const cplx minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const cplx det = m.determinant();
    Eig3 out;
    out.values = cubic_roots(-tr, minors, -det);
    for (int k = 0; k < 3; ++k) out.vectors.col(k) = null_vector(m, out.values[k]);
    out.closed_form = true;
    return out;
}

Eig3 general_eig3(const Eigen::Matrix3cd& m) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(m, true);
    if (solver.info() == Eigen::Success) {
        Eig3 out;
        for (int k = 0; k < 3; ++k) out.values[k] = solver.eigenvalues()[k];
        out.vectors = solver.eigenvectors();
        for (int k = 0; k < 3; ++k) out.vectors.col(k).normalize();
        if (std::abs(out.vectors.determinant()) > 1e-12) return out;
    }
    return general_eig3_closed_form(m);
}

}  // namespace gethlab::linalg
