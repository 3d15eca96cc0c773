#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string_view>

namespace gethlab::linalg {

using cplx = std::complex<double>;

/// Dense real-symmetric eigendecomposition (LAPACK dsyevd). On return `a` holds the
/// eigenvectors column-wise; eigenvalues ascending. `context` names the problem in errors.
Eigen::VectorXd symmetric_eigensolve(Eigen::MatrixXd& a, std::string_view context);
/// Eigenvalues only.
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a, std::string_view context);
/// Dense complex-Hermitian eigendecomposition (LAPACK zheevd), same conventions.
Eigen::VectorXd hermitian_eigensolve(Eigen::MatrixXcd& a, std::string_view context);

/// Roots of the monic cubic x^3 + c2 x^2 + c1 x + c0 (closed form, Newton-polished).
std::array<cplx, 3> cubic_roots(cplx c2, cplx c1, cplx c0);

struct Eig3 {
    std::array<cplx, 3> values;
    Eigen::Matrix3cd vectors;  // right eigenvectors, unit columns, matching `values`
    bool closed_form = false;  // true if the cubic fallback produced the result
};

/// Eigenpairs of a general complex 3x3 matrix. Falls back to the characteristic
/// cubic when the iterative solver does not converge or the basis it returns is singular.
Eig3 general_eig3(const Eigen::Matrix3cd& m);
/// Same, forcing the closed-form route (exposed for testing).
Eig3 general_eig3_closed_form(const Eigen::Matrix3cd& m);

}  // namespace gethlab::linalg
