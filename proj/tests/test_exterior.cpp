#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "resonance/exterior.hpp"
#include "resonance/random.hpp"

using namespace resonance;

namespace {

// Coefficient of e_i^e_j^e_k^e_l in w^e from the full antisymmetrization:
// (1/4) sum over S_4 of sgn * A[s0][s1] * B[s2][s3].
template <Field F>
Vector<F> wedge_by_permutations(const TwoForm<F>& w, const TwoForm<F>& e) {
    const Matrix<F> A = skew_matrix(w), B = skew_matrix(e);
    Vector<F> out;
    const std::size_t n = w.n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    std::array<std::size_t, 4> idx{0, 1, 2, 3};
                    const std::array<std::size_t, 4> v{i, j, k, l};
                    F s{};
                    do {
                        int inv = 0;
                        for (int p = 0; p < 4; ++p)
                            for (int q = p + 1; q < 4; ++q) inv += idx[p] > idx[q];
                        const F t = A(v[idx[0]], v[idx[1]]) * B(v[idx[2]], v[idx[3]]);
                        s += (inv % 2 == 0) ? t : F(-t);
                    } while (std::next_permutation(idx.begin(), idx.end()));
                    out.push_back(s / F(4));
                }
    return out;
}

template <Field F>
TwoForm<F> random_form(Rng& rng, std::size_t n, Side side = Side::Dual) {
    return TwoForm<F>(n, side, random_vector<F>(rng, binomial(n, 2)));
}

Vector<Rational> unit(std::size_t n, std::size_t i) {
    Vector<Rational> e(n);
    e[i] = 1;
    return e;
}

}  // namespace

TEST(Exterior, PairIndexIsLexicographic) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const WedgeBasis b(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                EXPECT_EQ(b.pair_index(i, j), k);
                EXPECT_EQ(b.pairs()[k], (std::array<std::size_t, 2>{i, j}));
                ++k;
            }
        EXPECT_EQ(k, binomial(n, 2));
        EXPECT_EQ(b.quad_count(), binomial(n, 4));
    }
}

TEST(Exterior, WedgeTwoFormsMatchesAntisymmetrization) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 4;
        const auto w = random_form<Rational>(rng, n), e = random_form<Rational>(rng, n);
        EXPECT_EQ(wedge_two_forms(w, e).coords, wedge_by_permutations(w, e)) << "trial " << trial;
    }
}

TEST(Exterior, WedgeIsSymmetricOnTwoForms) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 3;
        const auto w = random_form<Rational>(rng, n), e = random_form<Rational>(rng, n);
        EXPECT_EQ(wedge_two_forms(w, e).coords, wedge_two_forms(e, w).coords);
    }
}

TEST(Exterior, DecomposableFormsSquareToZero) {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 5;
        const auto a = random_vector<Rational>(rng, n), b = random_vector<Rational>(rng, n);
        const auto w = wedge_vectors(a, b);
        if (w.is_zero()) continue;
        EXPECT_TRUE(is_decomposable(w));
        const auto wc = to_complex(w);
        EXPECT_TRUE(is_decomposable(wc, 1e-10));
    }
}

TEST(Exterior, GenericFormsAreNotDecomposable) {
    Rng rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 3;
        EXPECT_FALSE(is_decomposable(random_form<Rational>(rng, n)));
        EXPECT_FALSE(is_decomposable(random_form<Complex>(rng, n), 1e-8));
    }
    // e12 + e34 has rank-4 skew matrix.
    TwoForm<Rational> w = TwoForm<Rational>::basis(4, Side::Dual, 0, 1) + TwoForm<Rational>::basis(4, Side::Dual, 2, 3);
    EXPECT_FALSE(is_decomposable(w));
    EXPECT_THROW(is_decomposable(TwoForm<Rational>(4, Side::Dual)), std::invalid_argument);
}

TEST(Exterior, DecomposeRoundTripExact) {
    Rng rng(25);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 5;
        const auto w = wedge_vectors(random_vector<Rational>(rng, n), random_vector<Rational>(rng, n));
        if (w.is_zero()) continue;
        const auto [a, b] = decompose(w);
        const auto v = wedge_vectors(a, b);
        // v = c * w for a nonzero rational c.
        const Matrix<Rational> m = Matrix<Rational>::from_rows({v.coords, w.coords});
        EXPECT_EQ(rank(m), 1u);
        std::size_t first = 0;
        while (sgn(a[first]) == 0) ++first;
        EXPECT_EQ(a[first], Rational(1));
    }
}

TEST(Exterior, DecomposeRoundTripFloating) {
    Rng rng(26);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 4;
        const auto w = wedge_vectors(random_vector<Complex>(rng, n), random_vector<Complex>(rng, n));
        const auto [a, b] = decompose(w, 1e-10);
        const auto v = wedge_vectors(a, b);
        EXPECT_EQ(rank(Matrix<Complex>::from_rows({v.coords, w.coords}), 1e-9), 1u);
        EXPECT_NEAR(norm2(a), 1.0, 1e-12);
        EXPECT_NEAR(norm2(b), 1.0, 1e-12);
    }
    EXPECT_THROW(decompose(random_form<Complex>(rng, 5), 1e-8), std::invalid_argument);
}

TEST(Exterior, OrthogonalComplementAnnihilates) {
    Rng rng(27);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 3;
        const std::size_t dim = 1 + trial % (binomial(n, 2) - 1);
        std::vector<TwoForm<Rational>> k;
        for (std::size_t i = 0; i < dim; ++i) k.push_back(random_form<Rational>(rng, n, Side::V));
        if (rank(coordinate_matrix<Rational>(k, n)) != dim) continue;
        const auto pair = PairVK<Rational>::from_k(n, k);
        EXPECT_EQ(pair.dim_k() + pair.dim_kperp(), binomial(n, 2));
        for (const auto& x : pair.k_basis())
            for (const auto& y : pair.kperp_basis()) EXPECT_EQ(sgn(pairing(x, y)), 0);
        for (const auto& y : pair.kperp_basis()) EXPECT_EQ(y.side, Side::Dual);
    }
}

TEST(Exterior, FromKperpRecoversK) {
    Rng rng(28);
    std::vector<TwoForm<Rational>> kp;
    for (int i = 0; i < 4; ++i) kp.push_back(random_form<Rational>(rng, 5, Side::Dual));
    const auto p = PairVK<Rational>::from_kperp(5, kp);
    EXPECT_EQ(p.dim_k(), 6u);
    const auto q = PairVK<Rational>::from_k(5, p.k_basis());
    EXPECT_EQ(rank(coordinate_matrix<Rational>(q.kperp_basis(), 5).vstack(coordinate_matrix<Rational>(kp, 5))), 4u);
}

TEST(Resonance, RaagExamples) {
    const auto pair = raag_path_pair<Rational>(4);
    const auto r = is_resonant(Vector<Rational>{1, 0, 1, 1}, pair);
    EXPECT_TRUE(r.resonant);
    ASSERT_TRUE(r.witness);
    const auto w = wedge_vectors(Vector<Rational>{1, 0, 1, 1}, *r.witness);
    EXPECT_FALSE(w.is_zero());
    for (const auto& k : pair.k_basis()) EXPECT_EQ(sgn(pairing(k, w)), 0);
    EXPECT_FALSE(is_resonant(Vector<Rational>{1, 1, 1, 1}, pair).resonant);
    EXPECT_THROW(raag_path_pair<Rational>(3), std::invalid_argument);
}

TEST(Resonance, EmptyKMakesEveryPointResonant) {
    const auto pair = PairVK<Rational>::from_k(3, {});
    EXPECT_EQ(pair.dim_kperp(), 3u);
    EXPECT_TRUE(is_resonant(unit(3, 0), pair).resonant);
}

TEST(Resonance, ZeroPointRejected) {
    const auto pair = raag_path_pair<Rational>(4);
    EXPECT_THROW(is_resonant(Vector<Rational>(4), pair), std::invalid_argument);
}

// Oracle: [a] is resonant iff the map b -> (<k_r, a ^ b>)_r has kernel of
// dimension >= 2, with the map assembled from wedge_vectors and pairing.
TEST(Resonance, AgreesWithWedgePairingOracle) {
    Rng rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 4 + trial % 3;
        const std::size_t dim_k = 2 + trial % (binomial(n, 2) - 2);
        std::vector<TwoForm<Rational>> k;
        for (std::size_t i = 0; i < dim_k; ++i) k.push_back(random_form<Rational>(rng, n, Side::V));
        if (rank(coordinate_matrix<Rational>(k, n)) != dim_k) continue;
        const auto pair = PairVK<Rational>::from_k(n, k);
        Vector<Rational> a = random_vector<Rational>(rng, n);
        if (trial % 3 == 0) a[trial % n] = 0;
        if (is_zero_vector(a, 0.0)) continue;
        Matrix<Rational> m(dim_k, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto w = wedge_vectors(a, unit(n, j), Side::Dual);
            for (std::size_t r = 0; r < dim_k; ++r) {
                TwoForm<Rational> kr = pair.k_basis()[r];
                kr.side = Side::Dual;
                m(r, j) = pairing(kr, w);
            }
        }
        const bool oracle = n - rank(m) >= 2;
        EXPECT_EQ(is_resonant(a, pair).resonant, oracle) << "trial " << trial;
        EXPECT_EQ(is_resonant(to_complex(a), to_complex(pair), 1e-9).resonant, oracle) << "trial " << trial;
    }
}

TEST(Resonance, DecomposableElementOfKperpGivesResonantPoint) {
    Rng rng(30);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + trial % 3;
        const auto a = random_vector<Rational>(rng, n), b = random_vector<Rational>(rng, n);
        if (wedge_vectors(a, b).is_zero()) continue;
        std::vector<TwoForm<Rational>> kp{wedge_vectors(a, b)};
        for (std::size_t i = 0; i < 1u + trial % 3u; ++i) kp.push_back(random_form<Rational>(rng, n));
        if (rank(coordinate_matrix<Rational>(kp, n)) != kp.size()) continue;
        const auto pair = PairVK<Rational>::from_kperp(n, kp);
        const auto r = is_resonant(a, pair);
        EXPECT_TRUE(r.resonant);
        EXPECT_GE(r.kernel_dim, 2u);
    }
}

TEST(Resonance, RaagHyperplanesAreInteriorCoordinates) {
    Rng rng(31);
    for (std::size_t n = 4; n <= 6; ++n) {
        const auto pair = raag_path_pair<Rational>(n);
        for (int trial = 0; trial < 200; ++trial) {
            Vector<Rational> a(n);
            for (auto& x : a) x = random_nonzero_rational(rng);
            const std::size_t zero = trial % (n + 1);
            if (zero < n) a[zero] = 0;
            const bool predicted = zero >= 1 && zero + 1 < n;
            EXPECT_EQ(is_resonant(a, pair).resonant, predicted) << "n " << n << " zero " << zero;
        }
    }
}
