#ifndef RESONANCE_MATRIX_HPP
#define RESONANCE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"

namespace resonance {

/// Dense row-major matrix over one scalar mode.
template <Field F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<F> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entry count does not match rows x cols");
    }

    static Matrix from_rows(const std::vector<std::vector<F>>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<F>>& rows) {
        return from_rows(rows, rows.empty() ? 0 : rows.front().size());
    }

    static Matrix from_columns(const std::vector<std::vector<F>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("Matrix::from_columns: ragged columns");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field_traits<F>::from_int(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const F> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<F> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::vector<F> column(std::size_t j) const {
        std::vector<F> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    const std::vector<F>& entries() const noexcept { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Stacks `other` underneath this matrix.
    Matrix vstack(const Matrix& other) const {
        if (other.rows_ != 0 && rows_ != 0 && other.cols_ != cols_)
            throw std::invalid_argument("Matrix::vstack: column mismatch");
        const std::size_t c = rows_ != 0 ? cols_ : other.cols_;
        std::vector<F> d = data_;
        d.insert(d.end(), other.data_.begin(), other.data_.end());
        return Matrix(rows_ + other.rows_, c, std::move(d));
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<F> data_;
};

template <Field F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
    Matrix<F> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (field_traits<F>::is_zero(a(i, k), 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

template <Field F>
Vector<F> operator*(const Matrix<F>& a, const Vector<F>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    Vector<F> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline Matrix<Complex> to_complex(const Matrix<Rational>& m) {
    std::vector<Complex> d;
    d.reserve(m.entries().size());
    for (const auto& x : m.entries()) d.push_back(to_complex(x));
    return Matrix<Complex>(m.rows(), m.cols(), std::move(d));
}

inline Matrix<Complex> to_complex(const Matrix<Complex>& m) { return m; }

}  // namespace resonance

#endif  // RESONANCE_MATRIX_HPP
