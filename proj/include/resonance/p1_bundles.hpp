#ifndef RESONANCE_P1_BUNDLES_HPP
#define RESONANCE_P1_BUNDLES_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace resonance::p1 {

/// Homogeneous binary form of degree d; coeffs[i] multiplies x0^{d-i} x1^i.
struct BinaryForm {
    int degree = 0;
    std::vector<Rational> coeffs;

    BinaryForm() : coeffs(1) {}
    explicit BinaryForm(int d) : degree(d), coeffs(check(d) + 1) {}
    BinaryForm(int d, std::vector<Rational> c) : degree(d), coeffs(std::move(c)) {
        check(d);
        if (coeffs.size() != static_cast<std::size_t>(d) + 1)
            throw std::invalid_argument("BinaryForm: expected degree + 1 coefficients");
    }

    /// x0^{d-i} x1^i.
    static BinaryForm monomial(int d, int i) {
        BinaryForm f(d);
        f.coeffs.at(static_cast<std::size_t>(i)) = 1;
        return f;
    }

    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return sgn(c) == 0; });
    }

    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

private:
    static std::size_t check(int d) {
        if (d < 0) throw std::invalid_argument("BinaryForm: negative degree");
        return static_cast<std::size_t>(d);
    }
};

inline BinaryForm operator*(const BinaryForm& p, const BinaryForm& q) {
    BinaryForm r(p.degree + q.degree);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (sgn(p.coeffs[i]) == 0) continue;
        for (std::size_t j = 0; j < q.coeffs.size(); ++j) r.coeffs[i + j] += p.coeffs[i] * q.coeffs[j];
    }
    return r;
}

inline BinaryForm operator-(const BinaryForm& p, const BinaryForm& q) {
    if (p.degree != q.degree) throw std::invalid_argument("BinaryForm difference: degree mismatch");
    BinaryForm r = p;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= q.coeffs[i];
    return r;
}

/// A global section h1 + h2 of O(a) + O(b).
struct BinaryFormPair {
    BinaryForm h1, h2;

    BinaryFormPair(BinaryForm p, BinaryForm q) : h1(std::move(p)), h2(std::move(q)) {
        if (h1.is_zero() && h2.is_zero()) throw std::invalid_argument("BinaryFormPair: both components zero");
    }
    int a() const noexcept { return h1.degree; }
    int b() const noexcept { return h2.degree; }
};

/// E = O(a) + O(b) on P^1 with 1 <= a <= b.
struct SplitBundle {
    int a = 1, b = 1;

    SplitBundle(int a_, int b_) : a(a_), b(b_) {
        if (a < 1 || a > b) throw std::invalid_argument("SplitBundle: need 1 <= a <= b");
    }
    std::size_t n() const noexcept { return static_cast<std::size_t>(a + b + 2); }
};

namespace detail {

using Poly = std::vector<Rational>;  // low degree first

inline void trim(Poly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline Poly remainder(Poly p, const Poly& d) {
    trim(p);
    while (p.size() >= d.size()) {
        const Rational f = p.back() / d.back();
        const std::size_t shift = p.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) p[shift + i] -= f * d[i];
        p.pop_back();
        trim(p);
    }
    return p;
}

inline Poly poly_gcd(Poly p, Poly q) {
    trim(p);
    trim(q);
    while (!q.empty()) {
        Poly r = remainder(p, q);
        p = std::move(q);
        q = std::move(r);
    }
    return p;
}

// Power of x1 dividing f, and f(x0, 1) as a polynomial in x0 (low degree first).
inline std::pair<int, Poly> split_x1(const BinaryForm& f) {
    int v = 0;
    while (sgn(f.coeffs[static_cast<std::size_t>(v)]) == 0) ++v;
    Poly p;
    for (int i = f.degree; i >= v; --i) p.push_back(f.coeffs[static_cast<std::size_t>(i)]);
    return {v, p};
}

}  // namespace detail

/// Degree of the homogeneous gcd: Euclid on the dehomogenizations at x1 = 1,
/// plus the shared power of x1. By convention gcd_degree(0, q) = deg q.
inline int gcd_degree(const BinaryForm& p, const BinaryForm& q) {
    const bool pz = p.is_zero(), qz = q.is_zero();
    if (pz && qz) throw std::invalid_argument("gcd_degree: both forms are zero");
    if (pz) return q.degree;
    if (qz) return p.degree;
    const auto [vp, dp] = detail::split_x1(p);
    const auto [vq, dq] = detail::split_x1(q);
    const detail::Poly g = detail::poly_gcd(dp, dq);
    return static_cast<int>(g.size()) - 1 + std::min(vp, vq);
}

/// Homogeneous resultant: determinant of the (deg p + deg q) square Sylvester matrix.
inline Rational resultant(const BinaryForm& p, const BinaryForm& q) {
    const std::size_t m = static_cast<std::size_t>(p.degree), k = static_cast<std::size_t>(q.degree);
    Matrix<Rational> s(m + k, m + k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t i = 0; i <= m; ++i) s(r, r + i) = p.coeffs[i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= k; ++i) s(k + r, r + i) = q.coeffs[i];
    return determinant(s);
}

/// Resonant iff the components share a factor of positive degree.
inline bool is_resonant_gcd(const BinaryFormPair& s) { return gcd_degree(s.h1, s.h2) >= 1; }

/// Degree of the saturation of the line subsheaf generated by s, or 0 when s
/// is not resonant. (0, h2) lies in the O(b) summand and gets b; (h1, 0) gets a.
inline int stratum(const BinaryFormPair& s) {
    if (s.h1.is_zero()) return s.b();
    if (s.h2.is_zero()) return s.a();
    return gcd_degree(s.h1, s.h2);
}

/// h1 h2' - h2 h1': zero iff the two sections generate a rank-one subsheaf.
inline BinaryForm cross_determinant(const BinaryFormPair& s, const BinaryFormPair& t) {
    if (s.a() != t.a() || s.b() != t.b()) throw std::invalid_argument("cross_determinant: bundle mismatch");
    return s.h1 * t.h2 - s.h2 * t.h1;
}

inline bool proportional(const BinaryFormPair& s, const BinaryFormPair& t) {
    std::vector<Rational> x = s.h1.coeffs, y = t.h1.coeffs;
    x.insert(x.end(), s.h2.coeffs.begin(), s.h2.coeffs.end());
    y.insert(y.end(), t.h2.coeffs.begin(), t.h2.coeffs.end());
    return rank(Matrix<Rational>::from_rows({x, y}), 0.0) < 2;
}

/// Saturation degree of the rank-one subsheaf generated by span{s1, s2}.
/// All nonzero sections of the span share one saturation, so the stratum of
/// either generator is the answer.
inline int lambda_stratum(const BinaryFormPair& s1, const BinaryFormPair& s2) {
    if (proportional(s1, s2)) throw std::invalid_argument("lambda_stratum: sections are dependent");
    if (!cross_determinant(s1, s2).is_zero())
        throw std::invalid_argument("lambda_stratum: span generates a rank-two subsheaf");
    const int d1 = stratum(s1), d2 = stratum(s2);
    if (d1 != d2) throw std::logic_error("lambda_stratum: generators disagree on saturation degree");
    return d1;
}

/// Coefficient vector in the monomial basis of Sym^a + Sym^b (length a+b+2).
inline Vector<Rational> section_vector(const BinaryFormPair& s) {
    Vector<Rational> v = s.h1.coeffs;
    v.insert(v.end(), s.h2.coeffs.begin(), s.h2.coeffs.end());
    return v;
}

inline BinaryFormPair section_from_vector(const SplitBundle& e, const Vector<Rational>& v) {
    if (v.size() != e.n()) throw std::invalid_argument("section_from_vector: wrong length");
    const auto mid = v.begin() + e.a + 1;
    return {BinaryForm(e.a, {v.begin(), mid}), BinaryForm(e.b, {mid, v.end()})};
}

/// V^dual = H^0(E) with the monomial basis; K-perp is the exact kernel of
/// det: Lambda^2 H^0(E) -> H^0(O(a+b)), (s, t) -> s1 t2 - s2 t1, and K its
/// annihilator.
inline PairVK<Rational> build_pair(const SplitBundle& e) {
    const std::size_t n = e.n();
    const WedgeBasis basis(n);
    const std::size_t first = static_cast<std::size_t>(e.a) + 1;
    Matrix<Rational> det(static_cast<std::size_t>(e.a + e.b) + 1, basis.pair_count());
    for (std::size_t c = 0; c < basis.pair_count(); ++c) {
        const auto [p, q] = basis.pairs()[c];
        if (p < first && q >= first) det(p + (q - first), c) = 1;
    }
    // Rows of det are the forms spanning K.
    std::vector<TwoForm<Rational>> k;
    for (std::size_t r = 0; r < det.rows(); ++r)
        k.emplace_back(n, Side::V, Vector<Rational>(det.row(r).begin(), det.row(r).end()));
    return PairVK<Rational>::from_k(n, std::move(k));
}

/// theta_d: (f, g1 + g2) -> f g1 + f g2. For d = b > a the O(a) part is
/// absent and g1 must be omitted.
inline BinaryFormPair theta_d(const SplitBundle& e, int d, const BinaryForm& f, const std::optional<BinaryForm>& g1,
                              const BinaryForm& g2) {
    if (f.degree != d) throw std::invalid_argument("theta_d: deg f must equal d");
    if (g2.degree != e.b - d) throw std::invalid_argument("theta_d: deg g2 must equal b - d");
    if (d >= 1 && d <= e.a) {
        if (!g1 || g1->degree != e.a - d) throw std::invalid_argument("theta_d: deg g1 must equal a - d");
        return {f * *g1, f * g2};
    }
    if (d == e.b) {
        if (g1) throw std::invalid_argument("theta_d: no O(a) component when d = b > a");
        return {BinaryForm(e.a), f * g2};
    }
    throw std::invalid_argument("theta_d: need 1 <= d <= a or d = b");
}

inline BinaryForm random_form(int d, Rng& rng) {
    BinaryForm f(d);
    do
        for (auto& c : f.coeffs) c = random_rational(rng);
    while (f.is_zero());
    return f;
}

inline bool valid_stratum(const SplitBundle& e, int d) { return (d >= 1 && d <= e.a) || d == e.b; }

/// A section with stratum exactly d: random f of degree d times a coprime
/// pair (g1, g2), coprimality certified by a nonzero resultant.
inline BinaryFormPair sample_stratum(const SplitBundle& e, int d, Rng& rng) {
    if (!valid_stratum(e, d)) throw std::invalid_argument("sample_stratum: no stratum of degree " + std::to_string(d));
    const BinaryForm f = random_form(d, rng);
    if (d > e.a) return theta_d(e, d, f, std::nullopt, random_form(0, rng));
    for (int attempt = 0; attempt < 100; ++attempt) {
        const BinaryForm g1 = random_form(e.a - d, rng);
        const BinaryForm g2 = random_form(e.b - d, rng);
        if (sgn(resultant(g1, g2)) != 0) return theta_d(e, d, f, g1, g2);
    }
    throw std::runtime_error("sample_stratum: no coprime pair in 100 draws");
}

/// Numerical rank of the Jacobian of (f, g1, g2) -> (f g1, f g2) at a random
/// rational point: the dimension of the affine cone over the stratum closure.
inline std::size_t stratum_cone_dimension(const SplitBundle& e, int d, Rng& rng, double tol = 1e-8) {
    if (d < 1 || d > e.a) throw std::invalid_argument("stratum_cone_dimension: need 1 <= d <= a");
    const BinaryForm f = random_form(d, rng);
    const BinaryForm g1 = random_form(e.a - d, rng);
    const BinaryForm g2 = random_form(e.b - d, rng);
    const std::size_t n = e.n();
    const std::size_t off2 = static_cast<std::size_t>(e.a) + 1;
    std::vector<std::vector<Complex>> cols;
    auto shifted = [&](const BinaryForm& g, std::size_t k, std::size_t offset, std::vector<Complex>& col) {
        for (std::size_t i = 0; i < g.coeffs.size(); ++i) col[offset + k + i] += to_complex(g.coeffs[i]);
    };
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {  // d/df_k = x^k (g1, g2)
        std::vector<Complex> col(n);
        shifted(g1, k, 0, col);
        shifted(g2, k, off2, col);
        cols.push_back(std::move(col));
    }
    for (std::size_t k = 0; k < g1.coeffs.size(); ++k) {  // d/dg1_k = (x^k f, 0)
        std::vector<Complex> col(n);
        shifted(f, k, 0, col);
        cols.push_back(std::move(col));
    }
    for (std::size_t k = 0; k < g2.coeffs.size(); ++k) {  // d/dg2_k = (0, x^k f)
        std::vector<Complex> col(n);
        shifted(f, k, off2, col);
        cols.push_back(std::move(col));
    }
    return rank(Matrix<Complex>::from_columns(cols, n), tol);
}

struct CrossCheckReport {
    std::size_t total = 0;
    std::size_t agree = 0;
    std::size_t resonant = 0;
    std::size_t witness_checked = 0;
    std::size_t witness_consistent = 0;
    std::map<int, std::size_t> strata;  // stratum -> count, 0 = not resonant
    std::vector<Vector<Rational>> disagreements;
};

/// Draws `count` sections, the first half forced resonant via sample_stratum
/// and the rest with random coefficients, and compares the exact rank test on
/// build_pair(e) with the gcd test. Every rank-test witness b must generate
/// with a a rank-one subsheaf (vanishing cross determinant).
inline CrossCheckReport cross_check(const SplitBundle& e, std::size_t count, Rng& rng) {
    const PairVK<Rational> pair = build_pair(e);
    std::vector<int> strata;
    for (int d = 1; d <= e.b; ++d)
        if (valid_stratum(e, d)) strata.push_back(d);
    std::uniform_int_distribution<std::size_t> pick(0, strata.size() - 1);
    CrossCheckReport rep;
    for (std::size_t i = 0; i < count; ++i) {
        const BinaryFormPair s = [&] {
            if (i < count / 2) return sample_stratum(e, strata[pick(rng)], rng);
            for (;;) {
                Vector<Rational> v = random_vector<Rational>(rng, e.n());
                if (!is_zero_vector(v, 0.0)) return section_from_vector(e, v);
            }
        }();
        const Vector<Rational> v = section_vector(s);
        const auto rank_test = is_resonant(v, pair, 0.0);
        const bool gcd_test = is_resonant_gcd(s);
        ++rep.total;
        if (rank_test.resonant == gcd_test)
            ++rep.agree;
        else
            rep.disagreements.push_back(v);
        if (gcd_test) ++rep.resonant;
        ++rep.strata[gcd_test ? stratum(s) : 0];
        if (rank_test.witness) {
            ++rep.witness_checked;
            const BinaryFormPair w = section_from_vector(e, *rank_test.witness);
            if (cross_determinant(s, w).is_zero()) ++rep.witness_consistent;
        }
    }
    return rep;
}

}  // namespace resonance::p1

#endif  // RESONANCE_P1_BUNDLES_HPP
