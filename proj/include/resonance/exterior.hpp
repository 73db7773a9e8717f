#ifndef RESONANCE_EXTERIOR_HPP
#define RESONANCE_EXTERIOR_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace resonance {

/*
 * Coordinate conventions
 *
 * Indices are 0-based internally. Two-forms use the lexicographic basis
 * e_i ^ e_j, i < j:  (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1),
 * and four-forms the lexicographic basis of quadruples i < j < k < l.
 * The pairing between Lambda^2 V and Lambda^2 V^dual is the coordinate dot
 * product in these bases (dual bases, <e_I, e*_J> = delta_IJ), bilinear
 * also in complex mode. All file formats use the same order.
 */

inline constexpr std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Lexicographic index tables for Lambda^2 and Lambda^4 of an n-dimensional space.
class WedgeBasis {
public:
    explicit WedgeBasis(std::size_t n) : n_(n) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs_.push_back({i, j});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l) quads_.push_back({i, j, k, l});
    }

    std::size_t dim() const noexcept { return n_; }
    std::size_t pair_count() const noexcept { return pairs_.size(); }
    std::size_t quad_count() const noexcept { return quads_.size(); }
    const std::vector<std::array<std::size_t, 2>>& pairs() const noexcept { return pairs_; }
    const std::vector<std::array<std::size_t, 4>>& quads() const noexcept { return quads_; }

    /// Position of (i, j), i < j, in the lexicographic order.
    std::size_t pair_index(std::size_t i, std::size_t j) const {
        if (!(i < j && j < n_)) throw std::out_of_range("pair_index: need i < j < n");
        return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
    }

private:
    std::size_t n_;
    std::vector<std::array<std::size_t, 2>> pairs_;
    std::vector<std::array<std::size_t, 4>> quads_;
};

enum class Side { V, Dual };

constexpr Side flip(Side s) noexcept { return s == Side::V ? Side::Dual : Side::V; }

template <Field F>
struct TwoForm {
    std::size_t n = 0;
    Side side = Side::Dual;
    Vector<F> coords;

    TwoForm() = default;
    TwoForm(std::size_t dim, Side s) : n(dim), side(s), coords(binomial(dim, 2)) {}
    TwoForm(std::size_t dim, Side s, Vector<F> c) : n(dim), side(s), coords(std::move(c)) {
        if (coords.size() != binomial(n, 2)) throw std::invalid_argument("TwoForm: expected C(n,2) coordinates");
    }

    /// e_i ^ e_j for 0-based i < j.
    static TwoForm basis(std::size_t dim, Side s, std::size_t i, std::size_t j) {
        TwoForm w(dim, s);
        w.coords[WedgeBasis(dim).pair_index(i, j)] = field_traits<F>::from_int(1);
        return w;
    }

    bool is_zero() const { return is_zero_vector(coords, 0.0); }

    friend bool operator==(const TwoForm&, const TwoForm&) = default;
};

template <Field F>
struct FourForm {
    std::size_t n = 0;
    Side side = Side::Dual;
    Vector<F> coords;

    bool is_zero() const { return is_zero_vector(coords, 0.0); }
};

template <Field F>
TwoForm<F> operator+(const TwoForm<F>& x, const TwoForm<F>& y) {
    if (x.n != y.n || x.side != y.side) throw std::invalid_argument("TwoForm sum: mismatched forms");
    TwoForm<F> r = x;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += y.coords[i];
    return r;
}

template <Field F>
TwoForm<F> operator*(const F& s, const TwoForm<F>& x) {
    TwoForm<F> r = x;
    for (auto& c : r.coords) c *= s;
    return r;
}

inline TwoForm<Complex> to_complex(const TwoForm<Rational>& w) {
    return {w.n, w.side, to_complex(w.coords)};
}
inline TwoForm<Complex> to_complex(const TwoForm<Complex>& w) { return w; }

/// Rows of the returned matrix are the coordinate vectors of `forms`.
template <Field F>
Matrix<F> coordinate_matrix(std::span<const TwoForm<F>> forms, std::size_t n) {
    Matrix<F> m(forms.size(), binomial(n, 2));
    for (std::size_t r = 0; r < forms.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = forms[r].coords[c];
    return m;
}

/// (a ^ b)_(i,j) = a_i b_j - a_j b_i.
template <Field F>
TwoForm<F> wedge_vectors(const Vector<F>& a, const Vector<F>& b, Side side = Side::Dual) {
    if (a.size() != b.size()) throw std::invalid_argument("wedge_vectors: length mismatch");
    const std::size_t n = a.size();
    TwoForm<F> w(n, side);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w.coords[k++] = a[i] * b[j] - a[j] * b[i];
    return w;
}

/// omega ^ eta for two-forms; coordinate (i,j,k,l) sums the three splittings
/// of the quadruple into two pairs, each in both orders.
template <Field F>
FourForm<F> wedge_two_forms(const TwoForm<F>& w, const TwoForm<F>& e) {
    if (w.n != e.n || w.side != e.side) throw std::invalid_argument("wedge_two_forms: mismatched forms");
    const WedgeBasis basis(w.n);
    FourForm<F> out{w.n, w.side, Vector<F>(basis.quad_count())};
    auto at = [&](const TwoForm<F>& x, std::size_t i, std::size_t j) -> const F& {
        return x.coords[basis.pair_index(i, j)];
    };
    for (std::size_t q = 0; q < basis.quad_count(); ++q) {
        const auto [i, j, k, l] = basis.quads()[q];
        out.coords[q] = at(w, i, j) * at(e, k, l) - at(w, i, k) * at(e, j, l) + at(w, i, l) * at(e, j, k) +
                        at(w, j, k) * at(e, i, l) - at(w, j, l) * at(e, i, k) + at(w, k, l) * at(e, i, j);
    }
    return out;
}

/// Plücker criterion: omega ^ omega = 0 (floating: every coordinate below
/// tol * |omega|^2, with |.| the max-modulus norm).
template <Field F>
bool is_decomposable(const TwoForm<F>& w, double tol = default_tol<F>()) {
    check_tolerance<F>(tol);
    if (is_zero_vector(w.coords, 0.0)) throw std::invalid_argument("is_decomposable: zero two-form");
    const FourForm<F> sq = wedge_two_forms(w, w);
    if constexpr (is_exact_v<F>) {
        return sq.is_zero();
    } else {
        const double scale = max_magnitude(w.coords);
        return max_magnitude(sq.coords) < tol * scale * scale;
    }
}

/// n x n skew matrix A with A_ij = omega_(i,j).
template <Field F>
Matrix<F> skew_matrix(const TwoForm<F>& w) {
    Matrix<F> a(w.n, w.n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < w.n; ++i)
        for (std::size_t j = i + 1; j < w.n; ++j) {
            a(i, j) = w.coords[k];
            a(j, i) = -w.coords[k];
            ++k;
        }
    return a;
}

/// Factors a decomposable omega as a ^ b (up to a nonzero scalar). The two
/// vectors span the column space of the skew matrix of omega. Exact mode
/// normalizes a so its first nonzero coordinate is 1; floating mode returns
/// an orthonormal pair.
template <Field F>
std::pair<Vector<F>, Vector<F>> decompose(const TwoForm<F>& w, double tol = default_tol<F>()) {
    if (!is_decomposable(w, tol)) throw std::invalid_argument("decompose: two-form is not decomposable");
    const Matrix<F> a = skew_matrix(w);
    const std::size_t n = w.n;
    if constexpr (is_exact_v<F>) {
        // Columns of an RREF-independent pair: the first two pivot columns.
        Matrix<Rational> r = a;
        const auto pivots = detail::rref(r);
        if (pivots.size() != 2) throw std::invalid_argument("decompose: skew matrix does not have rank 2");
        Vector<Rational> u = a.column(pivots[0]);
        Vector<Rational> v = a.column(pivots[1]);
        Rational uu = 0, uv = 0;
        for (std::size_t i = 0; i < n; ++i) {
            uu += u[i] * u[i];
            uv += u[i] * v[i];
        }
        const Rational f = uv / uu;
        for (std::size_t i = 0; i < n; ++i) v[i] -= f * u[i];
        std::size_t first = 0;
        while (sgn(u[first]) == 0) ++first;
        const Rational inv = 1 / u[first];
        for (auto& x : u) x *= inv;
        return {u, v};
    } else {
        // Column-pivoted Gram-Schmidt on the columns of A.
        std::vector<Vector<Complex>> cols;
        for (std::size_t j = 0; j < n; ++j) cols.push_back(a.column(j));
        auto pick = [&]() {
            std::size_t best = 0;
            double best_norm = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double nn = norm2(cols[j]);
                if (nn > best_norm) {
                    best_norm = nn;
                    best = j;
                }
            }
            return std::pair{best, best_norm};
        };
        auto [j0, n0] = pick();
        Vector<Complex> u = cols[j0];
        for (auto& x : u) x /= n0;
        for (auto& c : cols) {
            Complex d = 0;
            for (std::size_t i = 0; i < n; ++i) d += std::conj(u[i]) * c[i];
            for (std::size_t i = 0; i < n; ++i) c[i] -= d * u[i];
        }
        auto [j1, n1] = pick();
        if (n1 <= tol * n0) throw std::invalid_argument("decompose: skew matrix has rank < 2");
        Vector<Complex> v = cols[j1];
        for (auto& x : v) x /= n1;
        return {u, v};
    }
}

/// Basis of the annihilator of span(basis) under the coordinate pairing,
/// as forms on the other side.
template <Field F>
std::vector<TwoForm<F>> orthogonal_complement(std::span<const TwoForm<F>> basis, std::size_t n, Side side,
                                              double tol = default_tol<F>()) {
    for (const auto& w : basis)
        if (w.n != n || w.side != side) throw std::invalid_argument("orthogonal_complement: mismatched forms");
    const Matrix<F> m = coordinate_matrix(basis, n);
    if (rank(m, tol) != basis.size()) throw std::invalid_argument("orthogonal_complement: dependent rows");
    const Matrix<F> k = kernel_basis(m, tol);
    std::vector<TwoForm<F>> out;
    for (std::size_t j = 0; j < k.cols(); ++j) out.emplace_back(n, flip(side), k.column(j));
    return out;
}

/// A pair (V, K): K in Lambda^2 V and its annihilator K-perp in Lambda^2 V^dual.
template <Field F>
class PairVK {
public:
    /// Builds the pair from a basis of K; K-perp is derived.
    static PairVK from_k(std::size_t n, std::vector<TwoForm<F>> k, double tol = default_tol<F>()) {
        check_dim(n);
        for (auto& w : k) w.side = Side::V;
        auto kp = orthogonal_complement<F>(k, n, Side::V, tol);
        return PairVK(n, std::move(k), std::move(kp));
    }

    /// Builds the pair from a basis of K-perp; K is derived.
    static PairVK from_kperp(std::size_t n, std::vector<TwoForm<F>> kperp, double tol = default_tol<F>()) {
        check_dim(n);
        for (auto& w : kperp) w.side = Side::Dual;
        auto k = orthogonal_complement<F>(kperp, n, Side::Dual, tol);
        return PairVK(n, std::move(k), std::move(kperp));
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t dim_k() const noexcept { return k_.size(); }
    std::size_t dim_kperp() const noexcept { return kperp_.size(); }
    const std::vector<TwoForm<F>>& k_basis() const noexcept { return k_; }
    const std::vector<TwoForm<F>>& kperp_basis() const noexcept { return kperp_; }

    /// Assembles a pair from bases already known to be mutually orthogonal.
    static PairVK from_parts(std::size_t n, std::vector<TwoForm<F>> k, std::vector<TwoForm<F>> kperp) {
        check_dim(n);
        if (k.size() + kperp.size() != binomial(n, 2))
            throw std::invalid_argument("PairVK: dim K + dim K-perp must equal C(n,2)");
        return PairVK(n, std::move(k), std::move(kperp));
    }

private:
    PairVK(std::size_t n, std::vector<TwoForm<F>> k, std::vector<TwoForm<F>> kp)
        : n_(n), k_(std::move(k)), kperp_(std::move(kp)) {}

    static void check_dim(std::size_t n) {
        if (n < 2) throw std::invalid_argument("PairVK: dimension must be at least 2");
    }

    std::size_t n_;
    std::vector<TwoForm<F>> k_;
    std::vector<TwoForm<F>> kperp_;
};

inline PairVK<Complex> to_complex(const PairVK<Rational>& p) {
    std::vector<TwoForm<Complex>> k, kp;
    for (const auto& w : p.k_basis()) k.push_back(to_complex(w));
    for (const auto& w : p.kperp_basis()) kp.push_back(to_complex(w));
    return PairVK<Complex>::from_parts(p.n(), std::move(k), std::move(kp));
}
inline PairVK<Complex> to_complex(const PairVK<Complex>& p) { return p; }

/// <x, y> under the coordinate pairing.
template <Field F>
F pairing(const TwoForm<F>& x, const TwoForm<F>& y) {
    if (x.n != y.n) throw std::invalid_argument("pairing: dimension mismatch");
    F s{};
    for (std::size_t i = 0; i < x.coords.size(); ++i) s += x.coords[i] * y.coords[i];
    return s;
}

/// dim K x n matrix whose (r, j) entry pairs K_basis[r] with a ^ e*_j. Its
/// right kernel is {b : a ^ b in K-perp} and always contains a.
template <Field F>
Matrix<F> resonance_matrix(const Vector<F>& a, const PairVK<F>& pair) {
    const std::size_t n = pair.n();
    if (a.size() != n) throw std::invalid_argument("resonance_matrix: point has wrong length");
    if (is_zero_vector(a, 0.0)) throw std::invalid_argument("resonance_matrix: zero point");
    const WedgeBasis basis(n);
    Matrix<F> m(pair.dim_k(), n);
    for (std::size_t r = 0; r < pair.dim_k(); ++r) {
        const auto& kr = pair.k_basis()[r].coords;
        for (std::size_t j = 0; j < n; ++j) {
            // (a ^ e_j)_(p,q) = a_p [q == j] - a_q [p == j]
            F s{};
            for (std::size_t p = 0; p < j; ++p) s += kr[basis.pair_index(p, j)] * a[p];
            for (std::size_t q = j + 1; q < n; ++q) s -= kr[basis.pair_index(j, q)] * a[q];
            m(r, j) = s;
        }
    }
    return m;
}

template <Field F>
struct ResonanceResult {
    bool resonant = false;
    std::size_t kernel_dim = 0;
    std::optional<Vector<F>> witness;
};

/// [a] is resonant iff some b independent of a has a ^ b in K-perp, i.e. the
/// resonance matrix has a kernel of dimension >= 2.
template <Field F>
ResonanceResult<F> is_resonant(const Vector<F>& a, const PairVK<F>& pair, double tol = default_tol<F>()) {
    const Matrix<F> m = resonance_matrix(a, pair);
    const Matrix<F> ker = kernel_basis(m, tol);
    ResonanceResult<F> out;
    out.kernel_dim = ker.cols();
    out.resonant = ker.cols() >= 2;
    if (!out.resonant) return out;
    if constexpr (is_exact_v<F>) {
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Vector<Rational> b = ker.column(j);
            if (!is_zero_vector(wedge_vectors(a, b).coords, 0.0)) {
                out.witness = std::move(b);
                break;
            }
        }
    } else {
        // Project the kernel onto the complement of a; keep the largest component.
        const double na = norm2(a);
        Vector<Complex> best;
        double best_norm = -1.0;
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Vector<Complex> b = ker.column(j);
            Complex d = 0;
            for (std::size_t i = 0; i < a.size(); ++i) d += std::conj(a[i]) * b[i];
            for (std::size_t i = 0; i < a.size(); ++i) b[i] -= d / (na * na) * a[i];
            const double nb = norm2(b);
            if (nb > best_norm) {
                best_norm = nb;
                best = std::move(b);
            }
        }
        for (auto& x : best) x /= best_norm;
        out.witness = std::move(best);
    }
    return out;
}

/// K spanned by e_i ^ e_{i+1}, i = 1..n-1: the pair of the right-angled Artin
/// group of the path graph on n vertices.
template <Field F>
PairVK<F> raag_path_pair(std::size_t n) {
    if (n < 4) throw std::invalid_argument("raag_path_pair: n must be at least 4");
    std::vector<TwoForm<F>> k;
    for (std::size_t i = 0; i + 1 < n; ++i) k.push_back(TwoForm<F>::basis(n, Side::V, i, i + 1));
    return PairVK<F>::from_k(n, std::move(k), default_tol<F>());
}

}  // namespace resonance

#endif  // RESONANCE_EXTERIOR_HPP
