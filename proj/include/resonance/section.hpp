#ifndef RESONANCE_SECTION_HPP
#define RESONANCE_SECTION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "continuation.hpp"
#include "exterior.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace resonance {

/// Degree of Gr_2 of an n-dimensional space: the Catalan number C_{n-2}.
inline std::uint64_t catalan_degree(std::size_t n) {
    if (n < 4) throw std::invalid_argument("catalan_degree: n must be at least 4");
    const std::size_t m = n - 2;
    std::uint64_t c = 1;  // C_k = C_{k-1} * 2(2k-1)/(k+1)
    for (std::size_t k = 1; k <= m; ++k) c = c * 2 * (2 * k - 1) / (k + 1);
    return c;
}

/// Expected dimension of Gr_2 intersected with a projective m-1 space inside
/// P(Lambda^2): (m-1) + (2n-4) - (C(n,2)-1). Negative means empty.
inline long expected_section_dimension(std::size_t n, std::size_t m) {
    return static_cast<long>(m) - 1 + 2 * static_cast<long>(n) - 4 - (static_cast<long>(binomial(n, 2)) - 1);
}

/// One quadric per Lambda^4 coordinate of (sum t_i k_i) ^ (sum t_j k_j).
template <Field F>
PolySystem quadrics_of(std::span<const TwoForm<F>> basis, std::size_t n) {
    const std::size_t m = basis.size();
    if (m < 2) throw std::invalid_argument("build_quadric_system: need dim K-perp >= 2");
    const std::size_t q = binomial(n, 4);
    PolySystem sys;
    sys.polys.assign(q, MultiPoly(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const FourForm<F> w = wedge_two_forms(basis[i], basis[j]);
            const double mult = (i == j) ? 1.0 : 2.0;
            for (std::size_t k = 0; k < q; ++k) {
                const Complex c = to_complex(w.coords[k]) * mult;
                if (c == Complex(0.0)) continue;
                std::vector<int> e(m, 0);
                ++e[i];
                ++e[j];
                sys.polys[k].add_term(std::move(e), c);
            }
        }
    return sys;
}

template <Field F>
PolySystem build_quadric_system(const PairVK<F>& pair) {
    return quadrics_of<F>(pair.kperp_basis(), pair.n());
}

struct SectionConfig {
    SolverConfig solver{};
    double residual_tol = 1e-8;  // on all C(n,4) quadrics, at normalized coordinates
    double rank_tol = 1e-8;      // relative singular-value cut for tangent and disjointness ranks
};

struct SectionPoint {
    Vector<Complex> t;  // coordinates in the K-perp basis, largest-modulus entry 1
    TwoForm<Complex> omega;
    Vector<Complex> a, b;
    double full_residual = 0.0;
    bool transversal = false;
    std::size_t tangent_rank = 0;
    bool multiplicity_flag = false;
};

struct ResonanceLine {
    Vector<Complex> a, b;
};

struct SectionReport {
    std::size_t n = 0;
    std::size_t dim_kperp = 0;
    std::vector<SectionPoint> solutions;
    std::uint64_t expected_count = 0;
    std::size_t paths_run = 0;
    std::size_t paths_converged = 0;
    std::size_t paths_diverged = 0;
    std::size_t paths_max_steps = 0;
    std::size_t paths_cluster = 0;
    std::size_t spurious = 0;  // square-system endpoints off the full quadric system
    bool all_transversal = false;
    bool lines_pairwise_disjoint = false;
    std::vector<std::vector<bool>> disjoint;

    bool any_multiplicity() const {
        return std::any_of(solutions.begin(), solutions.end(), [](const auto& s) { return s.multiplicity_flag; });
    }

    /// Any of: point-count deficit, cluster/multiplicity flag, tangent-rank deficit.
    bool degenerate() const {
        return solutions.size() != expected_count || any_multiplicity() || !all_transversal;
    }
};

struct TransversalityResult {
    bool transversal = false;
    std::size_t rank = 0;
};

namespace detail {

template <Field F>
Vector<F> unit_or_self(Vector<F> v) {
    if constexpr (!is_exact_v<F>) {
        const double nv = norm2(v);
        if (nv > 0)
            for (auto& x : v) x /= nv;
    }
    return v;
}

template <Field F>
Matrix<F> kperp_rows_for_rank(const PairVK<F>& pair, double tol) {
    const Matrix<F> kp = coordinate_matrix<F>(pair.kperp_basis(), pair.n());
    if constexpr (is_exact_v<F>) {
        (void)tol;
        return kp;
    } else {
        return orthonormal_row_basis(kp, tol);
    }
}

}  // namespace detail

/// Tangent-space test at [a ^ b]: the affine cone of the Grassmannian has
/// tangent space spanned by a ^ e_j and b ^ e_j; the intersection with P(K-perp)
/// is transversal there iff these rows together with K-perp span Lambda^2.
template <Field F>
TransversalityResult transversality_at(const Vector<F>& a0, const Vector<F>& b0, const PairVK<F>& pair,
                                       double tol = default_tol<F>()) {
    check_tolerance<F>(tol);
    const std::size_t n = pair.n();
    if (a0.size() != n || b0.size() != n) throw std::invalid_argument("transversality_at: wrong vector length");
    const Vector<F> a = detail::unit_or_self(a0);
    const Vector<F> b = detail::unit_or_self(b0);
    const TwoForm<F> w = wedge_vectors(a, b);
    if (is_zero_vector(w.coords, 0.0)) throw std::invalid_argument("transversality_at: a and b are dependent");
    for (const auto& k : pair.k_basis()) {
        const F p = pairing(k, w);
        if constexpr (is_exact_v<F>) {
            if (sgn(p) != 0) throw std::invalid_argument("transversality_at: a ^ b is not in K-perp");
        } else {
            if (std::abs(p) > std::sqrt(tol) * norm2(k.coords) * norm2(w.coords))
                throw std::invalid_argument("transversality_at: a ^ b is not in K-perp");
        }
    }
    const std::size_t big_n = binomial(n, 2);
    Matrix<F> rows(2 * n, big_n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector<F> e(n);
        e[j] = field_traits<F>::from_int(1);
        const auto wa = wedge_vectors(a, e);
        const auto wb = wedge_vectors(b, e);
        for (std::size_t c = 0; c < big_n; ++c) {
            rows(j, c) = wa.coords[c];
            rows(n + j, c) = wb.coords[c];
        }
    }
    const Matrix<F> stacked = rows.vstack(detail::kperp_rows_for_rank(pair, tol));
    const std::size_t r = rank(stacked, tol);
    return {r == big_n, r};
}

struct Disjointness {
    std::vector<ResonanceLine> lines;
    std::vector<std::vector<bool>> matrix;
    bool all = true;
};

/// Two lines P<a,b>, P<c,d> are disjoint iff a, b, c, d are independent.
template <Field F>
bool lines_disjoint(const Vector<F>& a, const Vector<F>& b, const Vector<F>& c, const Vector<F>& d,
                    double tol = default_tol<F>()) {
    const auto m = Matrix<F>::from_rows({detail::unit_or_self(a), detail::unit_or_self(b),
                                         detail::unit_or_self(c), detail::unit_or_self(d)});
    return rank(m, tol) == 4;
}

inline Disjointness lines_and_disjointness(const std::vector<SectionPoint>& pts, double tol = 1e-8) {
    Disjointness out;
    for (const auto& p : pts) out.lines.push_back({p.a, p.b});
    const std::size_t k = pts.size();
    out.matrix.assign(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const bool d = lines_disjoint(pts[i].a, pts[i].b, pts[j].a, pts[j].b, tol);
            out.matrix[i][j] = out.matrix[j][i] = d;
            out.all = out.all && d;
        }
    return out;
}

/// Solves G intersected with P(K-perp) when it is expected to be finite. One random
/// affine chart plus (m-1) random combinations of the quadrics give a square
/// system with 2^{m-1} paths; endpoints off the full quadric system are
/// dropped, the rest normalized, factored, and certified.
inline SectionReport solve_finite_section(const PairVK<Complex>& pair, const SectionConfig& cfg = {}) {
    const std::size_t n = pair.n();
    const std::size_t m = pair.dim_kperp();
    if (n < 4) throw std::invalid_argument("solve_finite_section: n must be at least 4");
    if (expected_section_dimension(n, m) != 0)
        throw std::invalid_argument("solve_finite_section: expected section dimension is " +
                                    std::to_string(expected_section_dimension(n, m)) + ", not 0");

    const Matrix<Complex> kp = coordinate_matrix<Complex>(pair.kperp_basis(), n);
    const Matrix<Complex> q = orthonormal_row_basis(kp, cfg.rank_tol);
    if (q.rows() != m) throw std::invalid_argument("solve_finite_section: degenerate K-perp basis");
    std::vector<TwoForm<Complex>> qforms;
    for (std::size_t i = 0; i < m; ++i) qforms.emplace_back(n, Side::Dual, Vector<Complex>(q.row(i).begin(), q.row(i).end()));
    const PolySystem quads = quadrics_of<Complex>(qforms, n);

    Rng rng(cfg.solver.seed);
    PolySystem square;
    MultiPoly chart(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> e(m, 0);
        e[i] = 1;
        chart.add_term(std::move(e), random_complex(rng));
    }
    chart.add_term(std::vector<int>(m, 0), Complex(-1.0));
    square.polys.push_back(chart);
    for (std::size_t r = 0; r + 1 < m; ++r) {
        MultiPoly p(m);
        for (const auto& quad : quads.polys) {
            const Complex c = random_complex(rng);
            for (const auto& t : quad.terms()) p.add_term(t.exponents, c * t.coeff);
        }
        square.polys.push_back(std::move(p));
    }
    SolverConfig scfg = cfg.solver;
    scfg.seed = rng();
    const SolveResult sol = solve_total_degree(square, scfg);

    SectionReport rep;
    rep.n = n;
    rep.dim_kperp = m;
    rep.expected_count = catalan_degree(n);
    rep.paths_run = sol.paths;
    rep.paths_converged = sol.converged;
    rep.paths_diverged = sol.diverged;
    rep.paths_max_steps = sol.max_steps;
    rep.paths_cluster = sol.cluster;

    // Normalize projectively, filter on the full system, deduplicate.
    std::vector<TrackedSolution> kept;
    for (auto s : sol.solutions) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (std::abs(s.point[i]) > std::abs(s.point[imax])) imax = i;
        const Complex piv = s.point[imax];
        if (piv == Complex(0.0)) continue;
        for (auto& x : s.point) x /= piv;
        double res = 0.0;
        for (const auto& quad : quads.polys) res = std::max(res, std::abs(quad(s.point)));
        if (res >= cfg.residual_tol) {
            ++rep.spurious;
            continue;
        }
        s.residual = res;
        kept.push_back(std::move(s));
    }
    kept = deduplicate(kept, cfg.solver.dedup_tol);

    for (const auto& s : kept) {
        SectionPoint pt;
        Vector<Complex> w(binomial(n, 2));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < w.size(); ++c) w[c] += s.point[i] * q(i, c);
        // Coordinates in the caller's K-perp basis.
        auto t = solve_linear(kp.transpose(), w, 1e-6);
        if (!t) throw std::logic_error("solve_finite_section: point left the K-perp span");
        std::size_t imax = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (std::abs((*t)[i]) > std::abs((*t)[imax])) imax = i;
        const Complex piv = (*t)[imax];
        for (auto& x : *t) x /= piv;
        pt.t = *t;
        pt.omega = TwoForm<Complex>(n, Side::Dual);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < w.size(); ++c) pt.omega.coords[c] += pt.t[i] * kp(i, c);
        pt.full_residual = s.residual;
        auto [a, b] = decompose(pt.omega, cfg.rank_tol);
        pt.a = std::move(a);
        pt.b = std::move(b);
        const auto tr = transversality_at(pt.a, pt.b, pair, cfg.rank_tol);
        pt.transversal = tr.transversal;
        pt.tangent_rank = tr.rank;
        pt.multiplicity_flag = s.status == PathStatus::ClusterSuspect || s.multiplicity > 1;
        rep.solutions.push_back(std::move(pt));
    }
    rep.all_transversal = std::all_of(rep.solutions.begin(), rep.solutions.end(),
                                      [](const auto& p) { return p.transversal; });
    const Disjointness d = lines_and_disjointness(rep.solutions, cfg.rank_tol);
    rep.lines_pairwise_disjoint = d.all;
    rep.disjoint = d.matrix;
    return rep;
}

inline SectionReport solve_finite_section(const PairVK<Rational>& pair, const SectionConfig& cfg = {}) {
    return solve_finite_section(to_complex(pair), cfg);
}

struct MembershipCheck {
    bool all_resonant = true;
    bool witness_structure = true;  // kernel = span(a, b) exactly at every sample
    std::size_t samples = 0;
};

/// Samples random points on every resonance line and runs the pointwise
/// rank test on each. At transversal finite sections each sampled point has
/// kernel exactly the line's span.
inline MembershipCheck membership_cross_check(const std::vector<SectionPoint>& pts, const PairVK<Complex>& pair,
                                              std::size_t samples_per_line, Rng& rng, double tol = 1e-8) {
    MembershipCheck out;
    for (const auto& p : pts) {
        for (std::size_t s = 0; s < samples_per_line; ++s) {
            const Complex l = random_complex(rng), mu = random_complex(rng);
            Vector<Complex> x(pair.n());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = l * p.a[i] + mu * p.b[i];
            const auto r = is_resonant(x, pair, tol);
            ++out.samples;
            out.all_resonant = out.all_resonant && r.resonant;
            const Matrix<Complex> rm = resonance_matrix(x, pair);
            const auto ra = rm * p.a;
            const auto rb = rm * p.b;
            const double scale = std::max(1.0, max_magnitude(rm.entries()));
            const bool contains = max_magnitude(ra) < std::sqrt(tol) * scale && max_magnitude(rb) < std::sqrt(tol) * scale;
            out.witness_structure = out.witness_structure && contains && r.kernel_dim == 2;
        }
    }
    return out;
}

/// Swaps the roles of K and K-perp: the result describes Gr_2(V) intersected with P(K).
template <Field F>
PairVK<F> dual_pair(const PairVK<F>& pair) {
    std::vector<TwoForm<F>> k = pair.kperp_basis(), kp = pair.k_basis();
    for (auto& w : k) w.side = Side::V;
    for (auto& w : kp) w.side = Side::Dual;
    return PairVK<F>::from_parts(pair.n(), std::move(k), std::move(kp));
}

/// Cuts P(K-perp) with d random hyperplanes, d the expected section dimension.
template <Field F>
PairVK<F> slice_to_finite(const PairVK<F>& pair, Rng& rng) {
    const long d = expected_section_dimension(pair.n(), pair.dim_kperp());
    if (d <= 0) throw std::invalid_argument("slice_to_finite: section is already finite or empty");
    const std::size_t m = pair.dim_kperp();
    for (;;) {
        Matrix<F> cond(static_cast<std::size_t>(d), m);
        for (std::size_t i = 0; i < cond.rows(); ++i)
            for (std::size_t j = 0; j < m; ++j) cond(i, j) = random_scalar<F>(rng);
        if (rank(cond, default_tol<F>()) != cond.rows()) continue;
        const Matrix<F> ker = kernel_basis(cond, default_tol<F>());
        std::vector<TwoForm<F>> rows;
        for (std::size_t c = 0; c < ker.cols(); ++c) {
            TwoForm<F> w(pair.n(), Side::Dual);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < w.coords.size(); ++k)
                    w.coords[k] += ker(i, c) * pair.kperp_basis()[i].coords[k];
            rows.push_back(std::move(w));
        }
        return PairVK<F>::from_kperp(pair.n(), std::move(rows), default_tol<F>());
    }
}

/// K spanned by dim_k random rational forms (numerators in [-10,10],
/// denominators in [1,10]).
inline PairVK<Rational> random_pair(std::size_t n, std::size_t dim_k, Rng& rng) {
    if (dim_k > binomial(n, 2)) throw std::invalid_argument("random_pair: dim K exceeds C(n,2)");
    for (;;) {
        std::vector<TwoForm<Rational>> k;
        for (std::size_t r = 0; r < dim_k; ++r) k.emplace_back(n, Side::V, random_vector<Rational>(rng, binomial(n, 2)));
        if (rank(coordinate_matrix<Rational>(k, n), 0.0) == dim_k) return PairVK<Rational>::from_k(n, std::move(k));
    }
}

struct DegenerateInstance {
    PairVK<Rational> pair;
    Vector<Rational> c, d;  // mu0 = c ^ d lies in K
};

/// K containing mu0 = c ^ d and `tangent_dirs` further directions c ^ v + d ^ w
/// from the tangent space of Gr_2(V) at mu0, padded with random forms. With
/// at least two such directions P(K) meets Gr_2(V) non-transversally at [mu0]
/// by a dimension count.
inline DegenerateInstance degenerate_pair(std::size_t n, std::size_t dim_k, Rng& rng, std::size_t tangent_dirs = 3) {
    if (tangent_dirs < 2) throw std::invalid_argument("degenerate_pair: need at least 2 tangent directions");
    if (dim_k < tangent_dirs + 1) throw std::invalid_argument("degenerate_pair: dim K too small for the tangent directions");
    for (;;) {
        const auto c = random_vector<Rational>(rng, n);
        const auto d = random_vector<Rational>(rng, n);
        std::vector<TwoForm<Rational>> k{wedge_vectors(c, d, Side::V)};
        for (std::size_t extra = 0; extra < tangent_dirs; ++extra)
            k.push_back(wedge_vectors(c, random_vector<Rational>(rng, n), Side::V) +
                        wedge_vectors(d, random_vector<Rational>(rng, n), Side::V));
        while (k.size() < dim_k) k.emplace_back(n, Side::V, random_vector<Rational>(rng, binomial(n, 2)));
        if (rank(coordinate_matrix<Rational>(k, n), 0.0) != dim_k) continue;
        return {PairVK<Rational>::from_k(n, std::move(k)), c, d};
    }
}

struct DualityTrial {
    std::size_t index = 0;
    bool finite_side_is_kperp = true;
    std::size_t finite_points = 0;
    std::uint64_t expected_count = 0;
    bool finite_transversal = false;  // count ok, no flags, full tangent rank everywhere
    bool finite_degenerate = true;
    bool count_deficit = false;
    bool cluster_flag = false;
    bool rank_deficit = false;
    long sliced_dimension = 0;
    std::size_t sliced_points = 0;
    bool sliced_transversal_all = false;  // at every computed point of the sliced side
    bool agreement = false;
    std::optional<std::size_t> bad_point_rank;  // degenerate mode: tangent rank at [mu0]
};

struct DualityReport {
    std::size_t n = 0;
    std::size_t dim_k = 0;
    bool degenerate = false;
    std::uint64_t seed = 0;
    std::vector<DualityTrial> trials;

    std::size_t agreements() const {
        return static_cast<std::size_t>(
            std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.agreement; }));
    }
};

namespace detail {

inline DualityTrial run_duality_trial(std::size_t n, std::size_t dim_k, bool degenerate, std::uint64_t seed,
                                      std::size_t index, const SectionConfig& base, std::size_t tangent_dirs) {
    Rng rng = stream_rng(seed, index);
    DualityTrial tr;
    tr.index = index;
    std::optional<DegenerateInstance> inst;
    PairVK<Rational> pair = [&] {
        if (!degenerate) return random_pair(n, dim_k, rng);
        inst = degenerate_pair(n, dim_k, rng, tangent_dirs);
        return inst->pair;
    }();
    const std::size_t big_n = binomial(n, 2);
    const long dim_kperp_side = expected_section_dimension(n, big_n - dim_k);
    const long dim_k_side = expected_section_dimension(n, dim_k);
    tr.finite_side_is_kperp = dim_kperp_side == 0;
    const PairVK<Rational> finite = tr.finite_side_is_kperp ? pair : dual_pair(pair);
    const PairVK<Rational> other = tr.finite_side_is_kperp ? dual_pair(pair) : pair;
    tr.sliced_dimension = tr.finite_side_is_kperp ? dim_k_side : dim_kperp_side;

    SectionConfig cfg = base;
    cfg.solver.seed = rng();
    const SectionReport fr = solve_finite_section(finite, cfg);
    tr.finite_points = fr.solutions.size();
    tr.expected_count = fr.expected_count;
    tr.count_deficit = fr.solutions.size() != fr.expected_count;
    tr.cluster_flag = fr.any_multiplicity();
    tr.rank_deficit = !fr.all_transversal;
    tr.finite_degenerate = fr.degenerate();
    tr.finite_transversal = !tr.finite_degenerate;

    if (tr.sliced_dimension > 0) {
        const PairVK<Rational> sliced = slice_to_finite(other, rng);
        cfg.solver.seed = rng();
        const SectionReport sr = solve_finite_section(sliced, cfg);
        tr.sliced_points = sr.solutions.size();
        const PairVK<Complex> other_c = to_complex(other);
        bool all = !sr.solutions.empty();
        for (const auto& p : sr.solutions) all = all && transversality_at(p.a, p.b, other_c, cfg.rank_tol).transversal;
        tr.sliced_transversal_all = all;
    }
    if (inst) {
        const PairVK<Rational> k_side = tr.finite_side_is_kperp ? dual_pair(pair) : pair;
        tr.bad_point_rank = transversality_at(inst->c, inst->d, k_side, 0.0).rank;
        tr.agreement = tr.finite_degenerate;
    } else {
        tr.agreement = tr.finite_transversal == tr.sliced_transversal_all;
    }
    return tr;
}

}  // namespace detail

/// Tests "P(K) meets Gr_2(V) transversally iff P(K-perp) meets Gr_2(V^dual)
/// transversally" on random or deliberately degenerate K. Trials run
/// concurrently; each owns the RNG stream (seed, trial index).
inline DualityReport duality_experiment(std::size_t n, std::size_t dim_k, std::size_t trials, bool degenerate,
                                        std::uint64_t seed, const SectionConfig& cfg = {},
                                        std::size_t tangent_dirs = 3) {
    if (n < 4 || n > 6) throw std::invalid_argument("duality_experiment: n must be 4, 5 or 6");
    const std::size_t big_n = binomial(n, 2);
    if (dim_k == 0 || dim_k >= big_n) throw std::invalid_argument("duality_experiment: dim K out of range");
    const long a = expected_section_dimension(n, big_n - dim_k);
    const long b = expected_section_dimension(n, dim_k);
    if (a != 0 && b != 0) throw std::invalid_argument("duality_experiment: neither side is expected to be finite");
    if (degenerate && a != 0)
        throw std::invalid_argument("duality_experiment: degenerate mode needs the K-perp side finite");
    DualityReport rep{n, dim_k, degenerate, seed, {}};
    std::vector<std::future<DualityTrial>> jobs;
    for (std::size_t i = 0; i < trials; ++i)
        jobs.push_back(std::async(std::launch::async, detail::run_duality_trial, n, dim_k, degenerate, seed, i, cfg,
                                     tangent_dirs));
    for (auto& j : jobs) rep.trials.push_back(j.get());
    return rep;
}

}  // namespace resonance

#endif  // RESONANCE_SECTION_HPP
