// Randomized property checks shared by the unit suite and the acceptance gate.
// Each returns how many of `cases` generated instances satisfied the property.
#ifndef RESONANCE_TESTS_PROPERTIES_HPP
#define RESONANCE_TESTS_PROPERTIES_HPP

#include <algorithm>
#include <functional>

#include "resonance/continuation.hpp"
#include "resonance/exterior.hpp"
#include "resonance/random.hpp"

namespace props {

using namespace resonance;

struct Tally {
    std::size_t passed = 0, total = 0;
    bool ok() const { return total > 0 && passed == total; }
    void add(bool b) {
        ++total;
        passed += b;
    }
};

inline TwoForm<Rational> random_form(Rng& rng, std::size_t n, Side side) {
    return TwoForm<Rational>(n, side, random_vector<Rational>(rng, binomial(n, 2)));
}

inline Tally wedge_antisymmetry(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const std::size_t n = 2 + i % 6;
        const auto a = random_vector<Rational>(rng, n), b = random_vector<Rational>(rng, n);
        const auto ab = wedge_vectors(a, b), ba = wedge_vectors(b, a);
        bool ok = wedge_vectors(a, a).is_zero();
        for (std::size_t k = 0; k < ab.coords.size(); ++k) ok = ok && ab.coords[k] == -ba.coords[k];
        t.add(ok);
    }
    return t;
}

inline Tally decompose_roundtrip(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    while (t.total < cases) {
        const std::size_t n = 3 + t.total % 5;
        const auto w = wedge_vectors(random_vector<Rational>(rng, n), random_vector<Rational>(rng, n));
        if (w.is_zero()) continue;
        const auto [a, b] = decompose(w);
        const auto v = wedge_vectors(a, b);
        t.add(rank(Matrix<Rational>::from_rows({v.coords, w.coords})) == 1);
    }
    return t;
}

inline Tally double_orthogonal_complement(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    while (t.total < cases) {
        const std::size_t n = 3 + t.total % 4;
        const std::size_t big = binomial(n, 2);
        const std::size_t dim = 1 + t.total % (big - 1);
        std::vector<TwoForm<Rational>> k;
        for (std::size_t i = 0; i < dim; ++i) k.push_back(random_form(rng, n, Side::V));
        const Matrix<Rational> km = coordinate_matrix<Rational>(k, n);
        if (rank(km) != dim) continue;
        const auto perp = orthogonal_complement<Rational>(k, n, Side::V);
        const auto perp2 = orthogonal_complement<Rational>(perp, n, Side::Dual);
        const Matrix<Rational> back = coordinate_matrix<Rational>(perp2, n);
        bool ok = perp.size() == big - dim && perp2.size() == dim && rank(km.vstack(back)) == dim;
        for (const auto& w : perp2) ok = ok && w.side == Side::V;
        t.add(ok);
    }
    return t;
}

inline Tally resonance_scaling_invariance(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    while (t.total < cases) {
        const std::size_t n = 4 + t.total % 3;
        const std::size_t dim = 1 + t.total % (binomial(n, 2) - 1);
        std::vector<TwoForm<Rational>> k;
        for (std::size_t i = 0; i < dim; ++i) k.push_back(random_form(rng, n, Side::V));
        if (rank(coordinate_matrix<Rational>(k, n)) != dim) continue;
        const auto pair = PairVK<Rational>::from_k(n, k);
        Vector<Rational> a = random_vector<Rational>(rng, n);
        if (t.total % 2 == 0) a[t.total % n] = 0;
        if (is_zero_vector(a, 0.0)) continue;
        const Rational lambda = random_nonzero_rational(rng);
        Vector<Rational> la = a;
        for (auto& x : la) x *= lambda;
        const auto r1 = is_resonant(a, pair), r2 = is_resonant(la, pair);
        const auto c1 = is_resonant(to_complex(a), to_complex(pair), 1e-9);
        Vector<Complex> ca = to_complex(a);
        const Complex mu = random_complex(rng);
        for (auto& x : ca) x *= mu;
        const auto c2 = is_resonant(ca, to_complex(pair), 1e-9);
        t.add(r1.resonant == r2.resonant && r1.kernel_dim == r2.kernel_dim && c1.resonant == r1.resonant &&
              c2.resonant == r1.resonant);
    }
    return t;
}

inline MultiPoly random_dense(Rng& rng, std::size_t vars, int degree) {
    MultiPoly p(vars);
    std::vector<int> e(vars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == vars) {
            p.add_term(e, random_complex(rng));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(0, degree);
    return p;
}

// Central differences with step 1e-6, compared at 1e-6 relative.
inline Tally jacobian_vs_finite_difference(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = 1 + c % 4;
        PolySystem sys;
        for (std::size_t i = 0; i < n; ++i) sys.polys.push_back(random_dense(rng, n, 1 + static_cast<int>(c % 3)));
        const auto z = random_vector<Complex>(rng, n);
        const auto j = jacobian(sys, z);
        const double h = 1e-6;
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) {
            auto zp = z, zm = z;
            zp[k] += h;
            zm[k] -= h;
            const auto fp = evaluate(sys, zp), fm = evaluate(sys, zm);
            for (std::size_t i = 0; i < n; ++i) {
                const Complex fd = (fp[i] - fm[i]) / (2 * h);
                ok = ok && std::abs(fd - j(i, k)) <= 1e-6 * std::max(1.0, std::abs(j(i, k)));
            }
        }
        t.add(ok);
    }
    return t;
}

inline double hausdorff(const std::vector<TrackedSolution>& a, const std::vector<TrackedSolution>& b) {
    auto one_way = [](const auto& x, const auto& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = 1e300;
            for (const auto& q : y) {
                double d = 0.0;
                for (std::size_t i = 0; i < p.point.size(); ++i) d = std::max(d, std::abs(p.point[i] - q.point[i]));
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

// Random dense systems of two quadrics in two variables, solved under two
// different gammas; the solution sets must coincide to 1e-6.
inline Tally gamma_rerun_stability(std::size_t cases, std::uint64_t seed) {
    Rng rng(seed);
    Tally t;
    for (std::size_t c = 0; c < cases; ++c) {
        PolySystem sys;
        const std::size_t n = 1 + c % 2;
        for (std::size_t i = 0; i < n; ++i) sys.polys.push_back(random_dense(rng, n, 2));
        SolverConfig a, b;
        a.seed = rng();
        b.seed = rng();
        const auto ra = solve_total_degree(sys, a), rb = solve_total_degree(sys, b);
        const std::size_t bezout = n == 1 ? 2 : 4;
        t.add(ra.solutions.size() == bezout && rb.solutions.size() == bezout &&
              hausdorff(ra.solutions, rb.solutions) < 1e-6);
    }
    return t;
}

}  // namespace props

#endif  // RESONANCE_TESTS_PROPERTIES_HPP
