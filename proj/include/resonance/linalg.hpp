#ifndef RESONANCE_LINALG_HPP
#define RESONANCE_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"
#include "matrix.hpp"

namespace resonance {

namespace detail {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Scales each row by the lcm of its denominators; returns the integer rows
// and the product of the scale factors.
inline std::pair<IntMatrix, mpz_class> integer_rows(const Matrix<Rational>& m) {
    IntMatrix out(m.rows(), std::vector<mpz_class>(m.cols()));
    mpz_class scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        for (const auto& x : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rational& x = m(i, j);
            out[i][j] = x.get_num() * (l / x.get_den());
        }
        scale *= l;
    }
    return {std::move(out), scale};
}

/// Fraction-free (Bareiss) forward elimination, first nonzero pivot per
/// column. Returns the rank; `m` is left in echelon form and `swaps` counts
/// the row interchanges.
inline std::size_t bareiss_echelon(IntMatrix& m, std::size_t cols, std::size_t& swaps) {
    const std::size_t rows = m.size();
    std::size_t r = 0;
    mpz_class prev = 1;
    swaps = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            std::swap(m[p], m[r]);
            ++swaps;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class v = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

// Reduced row echelon form over Q. Returns pivot columns.
inline std::vector<std::size_t> rref(Matrix<Rational>& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || sgn(m(i, c)) == 0) continue;
            const Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline Eigen::MatrixXcd to_eigen(const Matrix<Complex>& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline std::size_t numerical_rank(const Eigen::VectorXd& sv, double tol) {
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

}  // namespace detail

/// Singular values in decreasing order.
inline std::vector<double> singular_values(const Matrix<Complex>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

/// Rank. Exact mode: fraction-free elimination (tol must be 0). Floating
/// mode: count of singular values above tol times the largest one.
template <Field F>
std::size_t rank(const Matrix<F>& m, double tol = default_tol<F>()) {
    check_tolerance<F>(tol);
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if constexpr (is_exact_v<F>) {
        auto [ints, scale] = detail::integer_rows(m);
        std::size_t swaps = 0;
        return detail::bareiss_echelon(ints, m.cols(), swaps);
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
        return detail::numerical_rank(svd.singularValues(), tol);
    }
}

/// Determinant of a square rational matrix, by Bareiss elimination.
inline Rational determinant(const Matrix<Rational>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
    if (m.rows() == 0) return 1;
    auto [ints, scale] = detail::integer_rows(m);
    std::size_t swaps = 0;
    const std::size_t r = detail::bareiss_echelon(ints, m.cols(), swaps);
    if (r < m.rows()) return 0;
    Rational det(ints.back().back(), scale);
    det.canonicalize();
    return (swaps % 2 == 0) ? det : Rational(-det);
}

/// Columns of the returned cols x (cols - rank) matrix span the right kernel.
/// Exact mode returns the RREF basis (free variable set to 1); floating mode
/// returns orthonormal right singular vectors.
template <Field F>
Matrix<F> kernel_basis(const Matrix<F>& m, double tol = default_tol<F>()) {
    check_tolerance<F>(tol);
    const std::size_t n = m.cols();
    if (m.rows() == 0) return Matrix<F>::identity(n);
    if constexpr (is_exact_v<F>) {
        Matrix<Rational> r = m;
        const auto pivots = detail::rref(r);
        std::vector<bool> is_pivot(n, false);
        for (auto p : pivots) is_pivot[p] = true;
        Matrix<Rational> basis(n, n - pivots.size());
        std::size_t k = 0;
        for (std::size_t f = 0; f < n; ++f) {
            if (is_pivot[f]) continue;
            basis(f, k) = 1;
            for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], k) = -r(i, f);
            ++k;
        }
        return basis;
    } else {
        if (n == 0) return Matrix<Complex>(0, 0);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m), Eigen::ComputeFullV);
        const std::size_t r = detail::numerical_rank(svd.singularValues(), tol);
        const auto& v = svd.matrixV();
        Matrix<Complex> basis(n, n - r);
        for (std::size_t j = r; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) basis(i, j - r) = v(i, j);
        return basis;
    }
}

/// Some solution of m x = rhs, or nullopt when the system is inconsistent.
template <Field F>
std::optional<Vector<F>> solve_linear(const Matrix<F>& m, const Vector<F>& rhs,
                                      double tol = default_tol<F>()) {
    check_tolerance<F>(tol);
    if (rhs.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
    const std::size_t n = m.cols();
    if constexpr (is_exact_v<F>) {
        Matrix<Rational> aug(m.rows(), n + 1);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
            aug(i, n) = rhs[i];
        }
        const auto pivots = detail::rref(aug);
        if (!pivots.empty() && pivots.back() == n) return std::nullopt;
        Vector<Rational> x(n);
        for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, n);
        return x;
    } else {
        Vector<Complex> x(n);
        if (m.rows() == 0) return x;
        const Eigen::MatrixXcd a = detail::to_eigen(m);
        Eigen::VectorXcd b(rhs.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) b(i) = rhs[i];
        if (n > 0) {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(tol);
            const Eigen::VectorXcd sol = svd.solve(b);
            for (std::size_t i = 0; i < n; ++i) x[i] = sol(i);
        }
        Eigen::VectorXcd ex(n);
        for (std::size_t i = 0; i < n; ++i) ex(i) = x[i];
        const double scale = (n > 0 ? a.operatorNorm() * ex.norm() : 0.0) + b.norm();
        const double residual = (n > 0 ? Eigen::VectorXcd(a * ex - b) : b).norm();
        if (residual > tol * std::max(scale, 1e-300)) return std::nullopt;
        return x;
    }
}

/// Orthonormal basis (as rows) of the row space of m.
inline Matrix<Complex> orthonormal_row_basis(const Matrix<Complex>& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix<Complex>(0, m.cols());
    // Row space of m = column space of m^T; left singular vectors of m^T.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m).transpose(), Eigen::ComputeThinU);
    const std::size_t r = detail::numerical_rank(svd.singularValues(), tol);
    Matrix<Complex> q(r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = svd.matrixU()(j, i);
    return q;
}

}  // namespace resonance

#endif  // RESONANCE_LINALG_HPP
