#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ggme/errors.hpp"

namespace ggme {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Force exact symmetry; MCMC updates touch single columns and tiny
// asymmetries otherwise accumulate.
inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

struct SpdCheck {
    bool ok = false;
    // Lower Cholesky factor when ok.
    Matrix chol;
};

// Cholesky with a relative pivot threshold: a pivot below
// 1e-12 * max diagonal entry counts as failure.
SpdCheck spd_check(const Matrix& a);

// Cholesky factor of an SPD matrix; throws NotPositiveDefinite.
Matrix spd_chol(const Matrix& a);

// Inverse via Cholesky; throws NotPositiveDefinite.
Matrix spd_inverse(const Matrix& a);

// log|A| for SPD A.
double spd_logdet(const Matrix& a);

// Schur complement removing the last row/column:
//   A_{1:k-1,1:k-1} - a_{1:k-1,k} a_{k,1:k-1} / a_{kk}
Matrix schur_remove_last(const Matrix& a);

// Rows/cols of `a` restricted to `idx` (order preserved).
Matrix submatrix(const Matrix& a, const std::vector<int>& idx);
Vector subvector(const Vector& v, const std::vector<int>& idx);

// Drop row/column k.
Matrix drop_index(const Matrix& a, int k);
Vector drop_index(const Vector& v, int k);

} // namespace ggme
