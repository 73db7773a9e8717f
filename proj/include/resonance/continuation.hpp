#ifndef RESONANCE_CONTINUATION_HPP
#define RESONANCE_CONTINUATION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "matrix.hpp"

namespace resonance {

struct Term {
    std::vector<int> exponents;
    Complex coeff;
};

/// Sparse multivariate polynomial with complex coefficients.
class MultiPoly {
public:
    MultiPoly() = default;
    explicit MultiPoly(std::size_t vars) : vars_(vars) {}

    std::size_t vars() const noexcept { return vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// Adds c * z^exponents, merging with an existing monomial.
    void add_term(std::vector<int> exponents, Complex c) {
        if (exponents.size() != vars_) throw std::invalid_argument("MultiPoly: exponent tuple has wrong length");
        for (int e : exponents)
            if (e < 0) throw std::invalid_argument("MultiPoly: negative exponent");
        for (auto& t : terms_)
            if (t.exponents == exponents) {
                t.coeff += c;
                return;
            }
        terms_.push_back({std::move(exponents), c});
    }

    int degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    template <class Vec>
    Complex operator()(const Vec& z) const {
        Complex s = 0;
        for (const auto& t : terms_) {
            Complex m = t.coeff;
            for (std::size_t i = 0; i < vars_; ++i)
                for (int e = 0; e < t.exponents[i]; ++e) m *= z[i];
            s += m;
        }
        return s;
    }

    /// d/dz_var evaluated at z.
    template <class Vec>
    Complex derivative(const Vec& z, std::size_t var) const {
        Complex s = 0;
        for (const auto& t : terms_) {
            const int ev = t.exponents[var];
            if (ev == 0) continue;
            Complex m = t.coeff * static_cast<double>(ev);
            for (std::size_t i = 0; i < vars_; ++i) {
                const int e = (i == var) ? ev - 1 : t.exponents[i];
                for (int k = 0; k < e; ++k) m *= z[i];
            }
            s += m;
        }
        return s;
    }

private:
    std::size_t vars_ = 0;
    std::vector<Term> terms_;
};

struct PolySystem {
    std::vector<MultiPoly> polys;

    std::size_t size() const noexcept { return polys.size(); }
    std::size_t vars() const noexcept { return polys.empty() ? 0 : polys.front().vars(); }
    bool is_square() const noexcept { return polys.size() == vars(); }
};

inline void check_point(const PolySystem& sys, std::size_t len) {
    if (len != sys.vars()) throw std::invalid_argument("point length does not match system variables");
    for (const auto& p : sys.polys)
        if (p.vars() != sys.vars()) throw std::invalid_argument("polynomials over different variable counts");
}

inline Vector<Complex> evaluate(const PolySystem& sys, const Vector<Complex>& z) {
    check_point(sys, z.size());
    Vector<Complex> out;
    for (const auto& p : sys.polys) out.push_back(p(z));
    return out;
}

inline Matrix<Complex> jacobian(const PolySystem& sys, const Vector<Complex>& z) {
    check_point(sys, z.size());
    Matrix<Complex> j(sys.size(), sys.vars());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t k = 0; k < sys.vars(); ++k) j(i, k) = sys.polys[i].derivative(z, k);
    return j;
}

enum class PathStatus { Converged, Diverged, MaxSteps, ClusterSuspect };

inline std::string to_string(PathStatus s) {
    switch (s) {
        case PathStatus::Converged: return "converged";
        case PathStatus::Diverged: return "diverged";
        case PathStatus::MaxSteps: return "max-steps";
        case PathStatus::ClusterSuspect: return "cluster-suspect";
    }
    return "unknown";
}

struct TrackedSolution {
    Vector<Complex> point;
    double residual = 0.0;
    std::size_t newton_iterations = 0;
    PathStatus status = PathStatus::MaxSteps;
    std::size_t multiplicity = 1;  // endpoints merged into this one by deduplication
};

struct SolverConfig {
    double path_tol = 1e-9;    // corrector convergence, relative step size
    double final_tol = 1e-10;  // residual bound for a converged endpoint
    double dedup_tol = 1e-6;   // relative distance for merging endpoints
    std::size_t max_steps = 20000;
    std::uint64_t seed = 0;
};

namespace detail {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline CVec eval(const PolySystem& sys, const CVec& z) {
    CVec f(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) f(i) = sys.polys[i](z);
    return f;
}

inline CMat jac(const PolySystem& sys, const CVec& z) {
    CMat j(sys.size(), sys.vars());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t k = 0; k < sys.vars(); ++k) j(i, k) = sys.polys[i].derivative(z, k);
    return j;
}

inline double inf_norm(const CVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

inline bool rank_deficient(const CMat& j) {
    if (j.size() == 0) return false;
    Eigen::JacobiSVD<CMat> svd(j);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) < 1e-8 * std::max(s(0), 1.0);
}

inline CVec to_eigen(const Vector<Complex>& v) {
    CVec e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e(i) = v[i];
    return e;
}

inline Vector<Complex> from_eigen(const CVec& e) { return {e.data(), e.data() + e.size()}; }

}  // namespace detail

/// Newton's method z <- z - J^{-1} F(z). Converged once |F|_inf < tol. A
/// singular Jacobian, a rank-deficient Jacobian at the limit, or linear
/// (rather than quadratic) convergence over the final steps marks the
/// result cluster-suspect.
inline TrackedSolution newton_refine(const PolySystem& sys, const Vector<Complex>& z0, std::size_t max_iter,
                                     double tol) {
    if (!sys.is_square()) throw std::invalid_argument("newton_refine: system is not square");
    check_point(sys, z0.size());
    detail::CVec z = detail::to_eigen(z0);
    TrackedSolution out;
    std::vector<double> steps;
    double res = detail::inf_norm(detail::eval(sys, z));
    bool singular = false;
    while (res >= tol && out.newton_iterations < max_iter) {
        const detail::CMat j = detail::jac(sys, z);
        Eigen::FullPivLU<detail::CMat> lu(j);
        if (!lu.isInvertible()) {
            singular = true;
            break;
        }
        const detail::CVec dz = lu.solve(-detail::eval(sys, z));
        z += dz;
        ++out.newton_iterations;
        steps.push_back(detail::inf_norm(dz));
        res = detail::inf_norm(detail::eval(sys, z));
        if (!std::isfinite(res)) break;
        if (steps.back() <= 1e-15 * std::max(1.0, detail::inf_norm(z))) break;
    }
    out.point = detail::from_eigen(z);
    out.residual = res;
    if (!std::isfinite(res) || detail::inf_norm(z) > 1e8) {
        out.status = PathStatus::Diverged;
        return out;
    }
    bool linear = false;
    if (steps.size() >= 4) {
        linear = true;
        for (std::size_t k = steps.size() - 3; k < steps.size(); ++k)
            if (steps[k - 1] == 0.0 || steps[k] / steps[k - 1] < 0.1) linear = false;
    }
    if (singular || linear || detail::rank_deficient(detail::jac(sys, z)))
        out.status = PathStatus::ClusterSuspect;
    else if (res < tol)
        out.status = PathStatus::Converged;
    else
        out.status = PathStatus::MaxSteps;
    return out;
}

/// Merges points closer than tol * max(1, |z|_inf), sqrt(tol) between two
/// cluster-suspect points; multiplicities add up.
inline std::vector<TrackedSolution> deduplicate(const std::vector<TrackedSolution>& sols, double tol) {
    std::vector<TrackedSolution> out;
    for (const auto& s : sols) {
        bool merged = false;
        for (auto& o : out) {
            double d = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < s.point.size(); ++i) {
                d = std::max(d, std::abs(s.point[i] - o.point[i]));
                scale = std::max(scale, std::abs(o.point[i]));
            }
            // Two endpoints of a singular cluster are only accurate to about
            // the square root of the residual.
            const bool both_cluster = s.status == PathStatus::ClusterSuspect && o.status == PathStatus::ClusterSuspect;
            if (d < (both_cluster ? std::sqrt(tol) : tol) * scale) {
                o.multiplicity += s.multiplicity;
                if (s.residual < o.residual) {
                    o.point = s.point;
                    o.residual = s.residual;
                }
                if (s.status == PathStatus::ClusterSuspect) o.status = PathStatus::ClusterSuspect;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(s);
    }
    return out;
}

struct SolveResult {
    std::vector<TrackedSolution> endpoints;  // one per path, in start-solution order
    std::vector<TrackedSolution> solutions;  // deduplicated converged and cluster-suspect endpoints
    std::size_t paths = 0;
    std::size_t converged = 0;
    std::size_t diverged = 0;
    std::size_t max_steps = 0;
    std::size_t cluster = 0;
    Complex gamma;
};

namespace detail {

// Tracks one path of H(z,t) = (1-t) gamma g(z) + t f(z) from t = 0 to 1 with
// an RK4 predictor and a Newton corrector.
inline TrackedSolution track_path(const PolySystem& target, const std::vector<int>& degrees, Complex gamma,
                                  CVec z, const SolverConfig& cfg, double max_h = 0.1) {
    const std::size_t n = target.vars();
    auto start_eval = [&](const CVec& x) {
        CVec g(n);
        for (std::size_t i = 0; i < n; ++i) g(i) = std::pow(x(i), degrees[i]) - 1.0;
        return g;
    };
    auto start_jac = [&](const CVec& x) {
        CMat j = CMat::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) j(i, i) = static_cast<double>(degrees[i]) * std::pow(x(i), degrees[i] - 1);
        return j;
    };
    auto h_eval = [&](const CVec& x, double t) { return CVec((1 - t) * gamma * start_eval(x) + t * eval(target, x)); };
    auto h_jac = [&](const CVec& x, double t) { return CMat((1 - t) * gamma * start_jac(x) + t * jac(target, x)); };

    double t = 0.0;
    double h = 0.05;
    int successes = 0;
    std::size_t steps = 0;
    TrackedSolution out;
    while (t < 1.0) {
        if (++steps > cfg.max_steps) {
            out.point = from_eigen(z);
            out.status = PathStatus::MaxSteps;
            return out;
        }
        h = std::min({h, max_h, 1.0 - t});
        const double t1 = (1.0 - t - h < 1e-14) ? 1.0 : t + h;
        // RK4 predictor on dz/dt = -H_z^{-1} H_t, H_t = f - gamma g.
        auto velocity = [&](const CVec& x, double s) {
            const CVec ht = eval(target, x) - gamma * start_eval(x);
            return CVec(-Eigen::PartialPivLU<CMat>(h_jac(x, s)).solve(ht));
        };
        const double dt = t1 - t;
        const CVec k1 = velocity(z, t);
        const CVec k2 = velocity(z + 0.5 * dt * k1, t + 0.5 * dt);
        const CVec k3 = velocity(z + 0.5 * dt * k2, t + 0.5 * dt);
        const CVec k4 = velocity(z + dt * k3, t1);
        CVec x = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        bool ok = x.allFinite();
        double prev_step = std::numeric_limits<double>::infinity();
        bool converged = false;
        for (int it = 0; ok && it < 3; ++it) {
            Eigen::PartialPivLU<CMat> lc(h_jac(x, t1));
            const CVec dx = lc.solve(-h_eval(x, t1));
            if (!dx.allFinite()) {
                ok = false;
                break;
            }
            x += dx;
            const double s = inf_norm(dx);
            if (s > prev_step) {
                ok = false;
                break;
            }
            prev_step = s;
            if (s < cfg.path_tol * std::max(1.0, inf_norm(x))) {
                converged = true;
                break;
            }
        }
        if (ok && converged) {
            z = x;
            t = t1;
            if (++successes >= 4) {
                h *= 1.5;
                successes = 0;
            }
            if (inf_norm(z) > 1e8) {
                out.point = from_eigen(z);
                out.status = PathStatus::Diverged;
                return out;
            }
        } else {
            h *= 0.5;
            successes = 0;
            if (h < 1e-7) {
                // Stalled close to the target: a singular endpoint is reported
                // as a cluster rather than lost.
                if (t >= 0.95) {
                    TrackedSolution end = newton_refine(target, from_eigen(z), 50, cfg.final_tol);
                    if (end.status == PathStatus::ClusterSuspect && end.residual < 1e-6) return end;
                }
                out.point = from_eigen(z);
                out.status = PathStatus::MaxSteps;
                return out;
            }
        }
    }
    return newton_refine(target, from_eigen(z), 50, cfg.final_tol);
}

}  // namespace detail

/// Total-degree homotopy with the gamma trick. The start system
/// z_i^{d_i} - 1 has prod d_i solutions; every path is tracked and its
/// endpoint refined. Path failures are counted, never thrown.
inline SolveResult solve_total_degree(const PolySystem& sys, const SolverConfig& cfg = {}) {
    if (!sys.is_square() || sys.size() == 0) throw std::invalid_argument("solve_total_degree: system is not square");
    check_point(sys, sys.vars());
    std::vector<int> degrees;
    for (const auto& p : sys.polys) {
        const int d = p.degree();
        if (d < 1) throw std::invalid_argument("solve_total_degree: every polynomial needs degree >= 1");
        degrees.push_back(d);
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    SolveResult res;
    res.gamma = std::polar(1.0, angle(rng));

    const std::size_t n = sys.vars();
    std::size_t total = 1;
    for (int d : degrees) total *= static_cast<std::size_t>(d);
    res.paths = total;

    std::vector<int> index(n, 0);
    for (std::size_t p = 0; p < total; ++p) {
        detail::CVec z(n);
        for (std::size_t i = 0; i < n; ++i)
            z(i) = std::polar(1.0, 2.0 * std::numbers::pi * index[i] / degrees[i]);
        TrackedSolution e = detail::track_path(sys, degrees, res.gamma, z, cfg);
        if (e.status == PathStatus::MaxSteps) e = detail::track_path(sys, degrees, res.gamma, z, cfg, 0.005);
        res.endpoints.push_back(std::move(e));
        for (std::size_t i = 0; i < n; ++i) {
            if (++index[i] < degrees[i]) break;
            index[i] = 0;
        }
    }

    std::vector<TrackedSolution> keep;
    for (const auto& e : res.endpoints) {
        switch (e.status) {
            case PathStatus::Converged: ++res.converged; keep.push_back(e); break;
            case PathStatus::ClusterSuspect: ++res.cluster; keep.push_back(e); break;
            case PathStatus::Diverged: ++res.diverged; break;
            case PathStatus::MaxSteps: ++res.max_steps; break;
        }
    }
    res.solutions = deduplicate(keep, cfg.dedup_tol);
    return res;
}

}  // namespace resonance

#endif  // RESONANCE_CONTINUATION_HPP
