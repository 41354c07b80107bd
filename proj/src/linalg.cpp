#include "ggme/linalg.hpp"

#include <cmath>

namespace ggme {

SpdCheck spd_check(const Matrix& a) {
    SpdCheck out;
    const auto n = a.rows();
    if (n != a.cols()) throw DimensionError("spd_check: matrix not square");
    if (n == 0) { out.ok = true; out.chol = Matrix(0, 0); return out; }

    double max_diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    if (max_diag <= 0.0) return out;
    const double tol = 1e-12 * max_diag;

    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > tol)) return out; // catches NaN too
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
            l(i, j) = s / l(j, j);
        }
    }
    out.ok = true;
    out.chol = std::move(l);
    return out;
}

Matrix spd_chol(const Matrix& a) {
    auto c = spd_check(a);
    if (!c.ok) throw NotPositiveDefinite("spd_chol: matrix is not positive definite");
    return c.chol;
}

Matrix spd_inverse(const Matrix& a) {
    Matrix l = spd_chol(a);
    Matrix inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(a.rows(), a.rows()));
    return symmetrize(l.transpose().triangularView<Eigen::Upper>().solve(inv));
}

double spd_logdet(const Matrix& a) {
    Matrix l = spd_chol(a);
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

Matrix schur_remove_last(const Matrix& a) {
    const auto n = a.rows();
    if (n != a.cols()) throw DimensionError("schur_remove_last: matrix not square");
    if (n == 0) throw DimensionError("schur_remove_last: empty matrix");
    if (!(a(n - 1, n - 1) > 0.0))
        throw NotPositiveDefinite("schur_remove_last: non-positive corner entry");
    if (n == 1) return Matrix(0, 0);
    Vector col = a.col(n - 1).head(n - 1);
    return symmetrize(a.topLeftCorner(n - 1, n - 1) - col * col.transpose() / a(n - 1, n - 1));
}

Matrix submatrix(const Matrix& a, const std::vector<int>& idx) {
    Matrix out((Eigen::Index)idx.size(), (Eigen::Index)idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out((Eigen::Index)i, (Eigen::Index)j) = a(idx[i], idx[j]);
    return out;
}

Vector subvector(const Vector& v, const std::vector<int>& idx) {
    Vector out((Eigen::Index)idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out((Eigen::Index)i) = v(idx[i]);
    return out;
}

Matrix drop_index(const Matrix& a, int k) {
    const auto n = a.rows();
    Matrix out(n - 1, n - 1);
    for (Eigen::Index i = 0, ii = 0; i < n; ++i) {
        if (i == k) continue;
        for (Eigen::Index j = 0, jj = 0; j < n; ++j) {
            if (j == k) continue;
            out(ii, jj++) = a(i, j);
        }
        ++ii;
    }
    return out;
}

Vector drop_index(const Vector& v, int k) {
    Vector out(v.size() - 1);
    for (Eigen::Index i = 0, ii = 0; i < v.size(); ++i)
        if (i != k) out(ii++) = v(i);
    return out;
}

} // namespace ggme
