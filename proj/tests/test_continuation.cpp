#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <functional>

#include "resonance/continuation.hpp"
#include "resonance/random.hpp"

using namespace resonance;

namespace {

MultiPoly poly(std::size_t vars, std::initializer_list<std::pair<std::vector<int>, Complex>> terms) {
    MultiPoly p(vars);
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

MultiPoly random_dense(Rng& rng, std::size_t vars, int degree) {
    MultiPoly p(vars);
    std::vector<int> e(vars, 0);
    // Every monomial of total degree <= degree.
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

// Largest distance from a point of one set to the nearest point of the other.
double hausdorff(const std::vector<TrackedSolution>& a, const std::vector<TrackedSolution>& b) {
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

}  // namespace

TEST(Continuation, JacobianMatchesFiniteDifferences) {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 4;
        PolySystem sys;
        for (std::size_t i = 0; i < n; ++i) sys.polys.push_back(random_dense(rng, n, 1 + trial % 3));
        const auto z = random_vector<Complex>(rng, n);
        const auto j = jacobian(sys, z);
        const double h = 1e-6;
        for (std::size_t k = 0; k < n; ++k) {
            auto zp = z, zm = z;
            zp[k] += h;
            zm[k] -= h;
            const auto fp = evaluate(sys, zp), fm = evaluate(sys, zm);
            for (std::size_t i = 0; i < n; ++i) {
                const Complex fd = (fp[i] - fm[i]) / (2 * h);
                EXPECT_LT(std::abs(fd - j(i, k)), 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST(Continuation, AddTermMergesMonomials) {
    MultiPoly p(2);
    p.add_term({1, 1}, 2.0);
    p.add_term({1, 1}, 3.0);
    p.add_term({0, 0}, -1.0);
    EXPECT_EQ(p.terms().size(), 2u);
    EXPECT_EQ(p.degree(), 2);
    EXPECT_NEAR(std::abs(p(Vector<Complex>{1.0, 1.0}) - 4.0), 0.0, 1e-15);
    EXPECT_THROW(p.add_term({1}, 1.0), std::invalid_argument);
    EXPECT_THROW(p.add_term({-1, 0}, 1.0), std::invalid_argument);
}

// Oracle: roots of a random univariate polynomial as eigenvalues of its
// companion matrix.
TEST(Continuation, UnivariateRootsMatchCompanionEigenvalues) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 6;
        const auto coeffs = random_vector<Complex>(rng, d + 1);
        PolySystem sys;
        MultiPoly p(1);
        for (int k = 0; k <= d; ++k) p.add_term({k}, coeffs[k]);
        sys.polys.push_back(p);
        SolverConfig cfg;
        cfg.seed = trial;
        const auto res = solve_total_degree(sys, cfg);
        EXPECT_EQ(res.paths, static_cast<std::size_t>(d));
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i) c(i, d - 1) = -coeffs[i] / coeffs[d];
        const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(c).eigenvalues();
        std::vector<TrackedSolution> oracle;
        for (int i = 0; i < d; ++i) oracle.push_back(TrackedSolution{{ev(i)}, 0.0, 0, PathStatus::Converged, 1});
        ASSERT_EQ(res.solutions.size(), static_cast<std::size_t>(d)) << "trial " << trial;
        EXPECT_LT(hausdorff(res.solutions, oracle), 1e-8) << "trial " << trial;
    }
}

TEST(Continuation, KnownQuadraticSystem) {
    // x^2 + y^2 = 5, xy = 2: (1,2), (2,1), (-1,-2), (-2,-1).
    PolySystem sys;
    sys.polys.push_back(poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -5.0}}));
    sys.polys.push_back(poly(2, {{{1, 1}, 1.0}, {{0, 0}, -2.0}}));
    const auto res = solve_total_degree(sys);
    std::vector<TrackedSolution> oracle;
    for (auto [x, y] : {std::pair{1.0, 2.0}, {2.0, 1.0}, {-1.0, -2.0}, {-2.0, -1.0}})
        oracle.push_back(TrackedSolution{{x, y}, 0.0, 0, PathStatus::Converged, 1});
    ASSERT_EQ(res.solutions.size(), 4u);
    EXPECT_LT(hausdorff(res.solutions, oracle), 1e-10);
    EXPECT_EQ(res.converged, 4u);
}

// Random dense quadrics in two variables: generically 4 finite solutions
// (Bezout), independent of the gamma used.
TEST(Continuation, GammaRerunGivesSameSolutionSet) {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        PolySystem sys;
        sys.polys.push_back(random_dense(rng, 2, 2));
        sys.polys.push_back(random_dense(rng, 2, 2));
        SolverConfig a, b;
        a.seed = 2 * trial;
        b.seed = 2 * trial + 1;
        const auto ra = solve_total_degree(sys, a), rb = solve_total_degree(sys, b);
        ASSERT_EQ(ra.solutions.size(), 4u) << "trial " << trial;
        ASSERT_EQ(rb.solutions.size(), 4u) << "trial " << trial;
        EXPECT_LT(hausdorff(ra.solutions, rb.solutions), 1e-8);
        for (const auto& s : ra.solutions)
            for (const auto& v : evaluate(sys, s.point)) EXPECT_LT(std::abs(v), 1e-9);
    }
}

TEST(Continuation, DivergentPathsAreCounted) {
    // x^2 = 1, xy = 1: Bezout bound 4, two finite solutions.
    PolySystem sys;
    sys.polys.push_back(poly(2, {{{2, 0}, 1.0}, {{0, 0}, -1.0}}));
    sys.polys.push_back(poly(2, {{{1, 1}, 1.0}, {{0, 0}, -1.0}}));
    const auto res = solve_total_degree(sys);
    EXPECT_EQ(res.paths, 4u);
    EXPECT_EQ(res.solutions.size(), 2u);
    EXPECT_EQ(res.diverged + res.max_steps, 2u);
}

TEST(Continuation, DoubleRootIsFlagged) {
    PolySystem sys;
    sys.polys.push_back(poly(1, {{{2}, 1.0}}));
    const auto res = solve_total_degree(sys);
    ASSERT_EQ(res.solutions.size(), 1u);
    const auto& s = res.solutions.front();
    EXPECT_TRUE(s.status == PathStatus::ClusterSuspect || s.multiplicity > 1);
    EXPECT_LT(std::abs(s.point[0]), 1e-4);
}

TEST(Continuation, NewtonRefineConvergesQuadratically) {
    PolySystem sys;
    sys.polys.push_back(poly(1, {{{2}, 1.0}, {{0}, -2.0}}));
    const auto s = newton_refine(sys, Vector<Complex>{1.5}, 50, 1e-14);
    EXPECT_EQ(s.status, PathStatus::Converged);
    EXPECT_NEAR(s.point[0].real(), std::sqrt(2.0), 1e-14);
    EXPECT_LE(s.newton_iterations, 6u);
}

TEST(Continuation, DeterministicForFixedSeed) {
    Rng rng(44);
    PolySystem sys;
    for (int i = 0; i < 3; ++i) sys.polys.push_back(random_dense(rng, 3, 2));
    SolverConfig cfg;
    cfg.seed = 9;
    const auto a = solve_total_degree(sys, cfg), b = solve_total_degree(sys, cfg);
    ASSERT_EQ(a.endpoints.size(), b.endpoints.size());
    for (std::size_t i = 0; i < a.endpoints.size(); ++i) EXPECT_EQ(a.endpoints[i].point, b.endpoints[i].point);
    EXPECT_EQ(a.solutions.size(), 8u);
}

TEST(Continuation, RejectsNonSquareAndConstantSystems) {
    PolySystem sys;
    sys.polys.push_back(poly(2, {{{1, 0}, 1.0}}));
    EXPECT_THROW(solve_total_degree(sys), std::invalid_argument);
    PolySystem c;
    c.polys.push_back(poly(1, {{{0}, 1.0}}));
    EXPECT_THROW(solve_total_degree(c), std::invalid_argument);
    EXPECT_THROW(evaluate(sys, Vector<Complex>{1.0}), std::invalid_argument);
}

TEST(Continuation, StatusNames) {
    EXPECT_EQ(to_string(PathStatus::Converged), "converged");
    EXPECT_EQ(to_string(PathStatus::Diverged), "diverged");
    EXPECT_EQ(to_string(PathStatus::MaxSteps), "max-steps");
    EXPECT_EQ(to_string(PathStatus::ClusterSuspect), "cluster-suspect");
}
