#pragma once

// Small dense linear algebra: just enough for least squares with rank
// detection, Cholesky factorisation and symmetric eigen-decomposition.
// Problem sizes here are tiny (at most ~11 columns), so clarity wins over
// blocking or vectorisation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "badlab/error.hpp"

namespace badlab {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw ArgumentError("matrix product: shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ============================================================================
// LEAST SQUARES (Householder QR, no pivoting)
// ============================================================================

struct LeastSquaresResult {
    std::vector<double> coefficients;  // 0 for aliased columns
    std::vector<std::size_t> aliased;  // columns found to lie in the span of earlier ones
    double rss = 0.0;
    std::size_t rank = 0;
};

// A column is declared aliased when the part of it orthogonal to all earlier
// columns has norm below `rel_tol` times its own norm. Aliased columns are
// excluded from the fit; callers that require full rank check `aliased`.
inline LeastSquaresResult least_squares(const Matrix& x, std::span<const double> y,
                                        double rel_tol = 1e-10) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (y.size() != n) throw ArgumentError("least_squares: response length mismatch");

    Matrix a = x;
    std::vector<double> b(y.begin(), y.end());
    std::vector<std::size_t> kept;
    LeastSquaresResult out;
    out.coefficients.assign(p, 0.0);

    std::size_t k = 0;  // next pivot row
    for (std::size_t c = 0; c < p; ++c) {
        double full_norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) full_norm += x(r, c) * x(r, c);
        full_norm = std::sqrt(full_norm);

        double tail = 0.0;
        for (std::size_t r = k; r < n; ++r) tail += a(r, c) * a(r, c);
        tail = std::sqrt(tail);

        if (k >= n || full_norm == 0.0 || tail <= rel_tol * full_norm) {
            out.aliased.push_back(c);
            continue;
        }

        // Reflect column c onto e_k; apply to remaining columns and b.
        const double alpha = a(k, c) > 0 ? -tail : tail;
        std::vector<double> v(n - k);
        for (std::size_t r = k; r < n; ++r) v[r - k] = a(r, c);
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double vi : v) vnorm2 += vi * vi;
        if (vnorm2 > 0.0) {
            auto reflect = [&](auto get) {
                double dot = 0.0;
                for (std::size_t r = k; r < n; ++r) dot += v[r - k] * get(r);
                const double scale = 2.0 * dot / vnorm2;
                for (std::size_t r = k; r < n; ++r) get(r) -= scale * v[r - k];
            };
            for (std::size_t cc = c; cc < p; ++cc)
                reflect([&](std::size_t r) -> double& { return a(r, cc); });
            reflect([&](std::size_t r) -> double& { return b[r]; });
        }
        kept.push_back(c);
        ++k;
    }

    out.rank = kept.size();
    // Back-substitution on the kept columns; R occupies rows [0, rank).
    std::vector<double> beta(kept.size(), 0.0);
    for (std::size_t i = kept.size(); i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < kept.size(); ++j) s -= a(i, kept[j]) * beta[j];
        beta[i] = s / a(i, kept[i]);
    }
    for (std::size_t i = 0; i < kept.size(); ++i) out.coefficients[kept[i]] = beta[i];

    // Residuals from the original system: more accurate than the tail of Q'b
    // when the fit is essentially exact.
    for (std::size_t r = 0; r < n; ++r) {
        double fitted = 0.0;
        for (std::size_t c = 0; c < p; ++c) fitted += x(r, c) * out.coefficients[c];
        const double e = y[r] - fitted;
        out.rss += e * e;
    }
    return out;
}

// ============================================================================
// CHOLESKY
// ============================================================================

// Lower-triangular L with A = L L'. Throws DecompositionError naming the
// first leading principal minor that is not positive definite.
inline Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ArgumentError("cholesky: matrix is not square");
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) {
            throw DecompositionError("matrix is not positive definite: leading minor " +
                                     std::to_string(j + 1) + " of " + std::to_string(n) +
                                     " has nonpositive pivot");
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
inline Matrix spd_inverse(const Matrix& a) {
    const Matrix l = cholesky(a);
    const std::size_t n = a.rows();
    // Solve L L' X = I column by column.
    Matrix inv(n, n);
    std::vector<double> z(n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
            z[i] = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = z[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * inv(k, col);
            inv(i, col) = s / l(i, i);
        }
    }
    return inv;
}

// ============================================================================
// SYMMETRIC EIGEN-DECOMPOSITION (cyclic Jacobi)
// ============================================================================

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns are eigenvectors
};

inline SymmetricEigen symmetric_eigen(const Matrix& input) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw ArgumentError("symmetric_eigen: matrix is not square");
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

// Clip eigenvalues from below at `floor`, rebuild, and rescale back to a unit
// diagonal. The result is the eigenvalue-clipped neighbour of a correlation
// matrix; it stays positive definite after the diagonal rescale.
inline Matrix nearest_correlation_by_clipping(const Matrix& corr, double floor = 1e-6) {
    const std::size_t n = corr.rows();
    const SymmetricEigen eig = symmetric_eigen(corr);
    Matrix rebuilt(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = std::max(eig.values[k], floor);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rebuilt(i, j) += lambda * eig.vectors(i, k) * eig.vectors(j, k);
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = (i == j) ? 1.0
                                 : rebuilt(i, j) / std::sqrt(rebuilt(i, i) * rebuilt(j, j));
    return out;
}

} // namespace badlab
