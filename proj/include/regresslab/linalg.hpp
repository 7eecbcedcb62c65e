#ifndef REGRESSLAB_LINALG_HPP
#define REGRESSLAB_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "regresslab/errors.hpp"

namespace regresslab {

// Relative tolerance for the symmetry check in cholesky_solve.
inline constexpr double kSymmetryTol = 1e-10;
// Relative pivot threshold below which LU declares the matrix singular.
inline constexpr double kPivotTol = 1e-12;

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(what) + ": non-finite entry");
    }
}
} // namespace detail

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {
        detail::require_finite(value, "Vector");
    }
    Vector(std::initializer_list<double> init) : data_(init) {
        for (double v : data_) detail::require_finite(v, "Vector");
    }
    static Vector from(std::vector<double> values) {
        Vector v;
        v.data_ = std::move(values);
        for (double x : v.data_) detail::require_finite(x, "Vector");
        return v;
    }

    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }
    const std::vector<double>& values() const { return data_; }

private:
    std::vector<double> data_;
};

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {
        detail::require_finite(value, "Matrix");
    }
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> init)
        : rows_(rows), cols_(cols), data_(init) {
        if (data_.size() != rows * cols) {
            throw ShapeError("Matrix: initializer length does not match rows*cols");
        }
        for (double v : data_) detail::require_finite(v, "Matrix");
    }
    static Matrix from(std::size_t rows, std::size_t cols, std::vector<double> values) {
        if (values.size() != rows * cols) {
            throw ShapeError("Matrix: data length does not match rows*cols");
        }
        Matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(values);
        for (double v : m.data_) detail::require_finite(v, "Matrix");
        return m;
    }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector row(std::size_t i) const {
        std::vector<double> r(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
        return Vector::from(std::move(r));
    }
    Vector col(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return Vector::from(std::move(c));
    }

    const std::vector<double>& values() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double inf_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline double two_norm(const Vector& v) {
    return std::sqrt(dot(v, v));
}

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.values()) m = std::max(m, std::fabs(x));
    return m;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions disagree");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw ShapeError("matvec: dimensions disagree");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

namespace detail {

inline void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols()) throw ShapeError(std::string(who) + ": matrix is not square");
}

inline void require_symmetric(const Matrix& a, const char* who) {
    const double tol = kSymmetryTol * max_abs(a);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > tol) {
                throw ShapeError(std::string(who) + ": matrix is not symmetric");
            }
}

// Lower-triangular Cholesky factor; throws NotPositiveDefiniteError when a
// pivot fails to be strictly positive.
inline Matrix cholesky_factor(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) {
            throw NotPositiveDefiniteError("cholesky: non-positive pivot at index " +
                                           std::to_string(j));
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

inline Vector forward_substitute(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

inline Vector backward_substitute_lt(const Matrix& l, const Vector& y) {
    // Solves L^T x = y with L lower triangular.
    const std::size_t n = l.rows();
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

} // namespace detail

// Solves a*x = b for symmetric positive definite a. A failed factorization
// signals rank deficiency (or plain non-PD input) as NotPositiveDefiniteError.
inline Vector cholesky_solve(const Matrix& a, const Vector& b) {
    detail::require_square(a, "cholesky_solve");
    detail::require_symmetric(a, "cholesky_solve");
    if (a.rows() != b.size()) throw ShapeError("cholesky_solve: rhs length mismatch");
    const Matrix l = detail::cholesky_factor(a);
    return detail::backward_substitute_lt(l, detail::forward_substitute(l, b));
}

// Solves a*x = b by LU with partial pivoting.
inline Vector lu_solve(const Matrix& a, const Vector& b) {
    detail::require_square(a, "lu_solve");
    if (a.rows() != b.size()) throw ShapeError("lu_solve: rhs length mismatch");
    const std::size_t n = a.rows();
    const double pivot_floor = kPivotTol * max_abs(a);
    Matrix u = a;
    Vector x = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(u(i, col)) > std::fabs(u(pivot, col))) pivot = i;
        if (std::fabs(u(pivot, col)) <= pivot_floor) {
            throw SingularError("lu_solve: pivot below threshold at column " +
                                std::to_string(col));
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(u(col, j), u(pivot, j));
            std::swap(x[col], x[pivot]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = u(i, col) / u(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) u(i, j) -= f * u(col, j);
            x[i] -= f * x[col];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= u(ii, j) * x[j];
        x[ii] = s / u(ii, ii);
    }
    return x;
}

// True iff the Cholesky factorization of a succeeds.
inline bool is_positive_definite(const Matrix& a) {
    detail::require_square(a, "is_positive_definite");
    detail::require_symmetric(a, "is_positive_definite");
    try {
        detail::cholesky_factor(a);
        return true;
    } catch (const NotPositiveDefiniteError&) {
        return false;
    }
}

} // namespace regresslab

#endif
