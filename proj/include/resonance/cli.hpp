#ifndef RESONANCE_CLI_HPP
#define RESONANCE_CLI_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json_io.hpp"
#include "p1_bundles.hpp"
#include "section.hpp"
#include "version.hpp"

namespace resonance::cli {

/// Exit-code contract.
enum Exit : int { Success = 0, Usage = 1, Degenerate = 2, Negative = 3 };

struct RunConfig {
    std::string command;     // solve | membership | duality | p1 | raag
    std::string subcommand;  // p1: strata | crosscheck | dims
    std::optional<std::string> input;
    std::optional<std::string> output;
    std::optional<std::string> save_pair;
    bool random = false;
    bool degenerate = false;
    bool timing = true;
    std::size_t n = 0;
    std::size_t dim_k = 0;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    std::size_t count = 1000;
    std::size_t raag = 0;
    std::size_t tangent_dirs = 3;
    int a = 1, b = 1;
    std::string point;
    SolverConfig solver{};
    double residual_tol = 1e-8;
    double rank_tol = 1e-8;
};

namespace detail {

inline json tolerances(const RunConfig& c) {
    return {{"path_tol", c.solver.path_tol},
            {"final_tol", c.solver.final_tol},
            {"dedup_tol", c.solver.dedup_tol},
            {"residual_tol", c.residual_tol},
            {"rank_tol", c.rank_tol},
            {"max_steps", c.solver.max_steps}};
}

inline SectionConfig section_config(const RunConfig& c) {
    SectionConfig s;
    s.solver = c.solver;
    s.solver.seed = c.seed;
    s.residual_tol = c.residual_tol;
    s.rank_tol = c.rank_tol;
    return s;
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void emit(const RunConfig& c, const Timer& timer, json result, std::ostream& out) {
    json doc = {{"tool", "resonance"},
                {"version", version},
                {"command", c.subcommand.empty() ? c.command : c.command + " " + c.subcommand},
                {"seed", c.seed},
                {"tolerances", tolerances(c)},
                {"result", std::move(result)}};
    if (c.timing) doc["wall_clock_s"] = timer.seconds();
    const std::string text = doc.dump(2) + "\n";
    if (c.output) {
        std::ofstream f(*c.output);
        if (!f) throw std::runtime_error("cannot write " + *c.output);
        f << text;
    } else {
        out << text;
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return json::parse(f);
}

inline void save_pair(const RunConfig& c, const json& pair) {
    if (!c.save_pair) return;
    std::ofstream f(*c.save_pair);
    if (!f) throw std::runtime_error("cannot write " + *c.save_pair);
    f << pair.dump(2) << "\n";
}

inline AnyPair load_pair(const RunConfig& c) {
    if (c.input) return pair_from_json(read_json_file(*c.input));
    if (c.raag) return raag_path_pair<Rational>(c.raag);
    throw std::invalid_argument("no input pair: pass --input, --raag or --random");
}

template <Field F>
Vector<F> parse_point(const std::string& text) {
    Vector<F> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if constexpr (is_exact_v<F>)
            v.push_back(parse_rational(item));
        else
            v.push_back(Complex(std::stod(item), 0.0));
    }
    return v;
}

}  // namespace detail

/// Solves the finite section G intersected with P(K-perp) and writes the SectionReport.
inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::Timer timer;
    PairVK<Complex> pair = [&]() -> PairVK<Complex> {
        if (c.random) {
            if (c.n < 4) throw std::invalid_argument("--random needs --n >= 4");
            Rng rng(c.seed);
            // Default: the dimension of K that makes the section finite.
            const std::size_t dim_k = c.dim_k ? c.dim_k : 2 * (c.n - 2);
            const PairVK<Rational> p = c.degenerate ? degenerate_pair(c.n, dim_k, rng, c.tangent_dirs).pair
                                                    : random_pair(c.n, dim_k, rng);
            detail::save_pair(c, pair_to_json(p));
            return to_complex(p);
        }
        return std::visit([](const auto& p) { return to_complex(p); }, detail::load_pair(c));
    }();
    if (expected_section_dimension(pair.n(), pair.dim_kperp()) != 0) {
        err << "solve: expected section dimension is " << expected_section_dimension(pair.n(), pair.dim_kperp())
            << ", not 0\n";
        return Usage;
    }
    const SectionReport rep = solve_finite_section(pair, detail::section_config(c));
    Rng rng = stream_rng(c.seed, 1);
    const MembershipCheck mc = membership_cross_check(rep.solutions, pair, 5, rng, c.rank_tol);
    json result = to_json(rep);
    result["membership_cross_check"] = {{"samples", mc.samples},
                                        {"all_resonant", mc.all_resonant},
                                        {"kernel_equals_line_span", mc.witness_structure}};
    detail::emit(c, timer, std::move(result), out);
    err << "solve: " << rep.solutions.size() << " points (expected " << rep.expected_count << "), "
        << (rep.all_transversal ? "all transversal" : "NOT all transversal") << ", lines "
        << (rep.lines_pairwise_disjoint ? "pairwise disjoint" : "meeting") << "\n";
    return rep.degenerate() ? Degenerate : Success;
}

/// Pointwise resonance test for --point against the input pair.
inline int cmd_membership(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::Timer timer;
    const AnyPair any = detail::load_pair(c);
    return std::visit(
        [&](const auto& pair) {
            using F = std::decay_t<decltype(pair.k_basis().front().coords.front())>;
            const Vector<F> a = detail::parse_point<F>(c.point);
            if (a.size() != pair.n()) throw std::invalid_argument("--point needs n coordinates");
            if (is_zero_vector(a, 0.0)) throw std::invalid_argument("--point must be nonzero");
            const double tol = is_exact_v<F> ? 0.0 : c.rank_tol;
            const auto r = is_resonant(a, pair, tol);
            json result = {{"point", to_json(a)}, {"resonant", r.resonant}, {"kernel_dim", r.kernel_dim}};
            if (r.witness) result["witness"] = to_json(*r.witness);
            detail::emit(c, timer, std::move(result), out);
            err << "membership: " << (r.resonant ? "resonant" : "non-resonant") << "\n";
            return r.resonant ? Success : Negative;
        },
        any);
}

inline int cmd_duality(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::Timer timer;
    const DualityReport rep = duality_experiment(c.n, c.dim_k, c.trials, c.degenerate, c.seed,
                                                  detail::section_config(c), c.tangent_dirs);
    bool any_degenerate = false;
    for (const auto& t : rep.trials) any_degenerate = any_degenerate || !t.finite_transversal || !t.sliced_transversal_all;
    detail::emit(c, timer, to_json(rep), out);
    err << "duality: " << rep.agreements() << "/" << rep.trials.size() << " trials "
        << (c.degenerate ? "flagged degenerate" : "agree") << "\n";
    return any_degenerate ? Degenerate : Success;
}

inline constexpr const char* zero_component_note =
    "(0, h2) is assigned stratum b and (h1, 0) stratum a; membership of such points in the other "
    "strata is read as membership in the stratum closures";

inline int cmd_p1(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::Timer timer;
    const p1::SplitBundle e(c.a, c.b);
    Rng rng(c.seed);
    json result = {{"bundle", {{"a", e.a}, {"b", e.b}}}, {"n", e.n()}};
    bool ok = true;
    if (c.subcommand == "strata") {
        json rows = json::array();
        for (int d = 1; d <= e.b; ++d) {
            if (!p1::valid_stratum(e, d)) continue;
            std::map<std::string, std::size_t> hist, lambda_hist;
            json examples = json::array();
            for (std::size_t i = 0; i < c.trials; ++i) {
                const auto s = p1::sample_stratum(e, d, rng);
                ++hist[std::to_string(p1::stratum(s))];
                if (i < 2) examples.push_back({{"h1", to_json(s.h1.coeffs)}, {"h2", to_json(s.h2.coeffs)}});
            }
            rows.push_back({{"d", d}, {"samples", c.trials}, {"stratum_histogram", hist}, {"examples", examples}});
            ok = ok && hist.size() == 1 && hist.count(std::to_string(d)) == 1;
        }
        result["strata"] = rows;
        result["zero_component_convention"] = zero_component_note;
        err << "p1 strata: " << (ok ? "every sample landed in its stratum" : "stratum mismatch") << "\n";
    } else if (c.subcommand == "crosscheck") {
        const auto rep = p1::cross_check(e, c.count, rng);
        json hist = json::object();
        for (const auto& [d, k] : rep.strata) hist[std::to_string(d)] = k;
        json dis = json::array();
        for (const auto& v : rep.disagreements) dis.push_back(to_json(v));
        result["total"] = rep.total;
        result["agree"] = rep.agree;
        result["resonant"] = rep.resonant;
        result["witness_checked"] = rep.witness_checked;
        result["witness_consistent"] = rep.witness_consistent;
        result["strata_histogram"] = hist;
        result["disagreements"] = dis;
        result["zero_component_convention"] = zero_component_note;
        ok = rep.agree == rep.total && rep.witness_consistent == rep.witness_checked;
        err << "p1 crosscheck: " << rep.agree << "/" << rep.total << " agree\n";
    } else if (c.subcommand == "dims") {
        json rows = json::array();
        for (int d = 1; d <= e.a; ++d) {
            json ranks = json::array();
            const std::size_t expected = static_cast<std::size_t>(e.a + e.b - d + 2);
            for (std::size_t i = 0; i < c.trials; ++i) {
                const std::size_t r = p1::stratum_cone_dimension(e, d, rng, c.rank_tol);
                ranks.push_back(r);
                ok = ok && r == expected;
            }
            rows.push_back({{"d", d}, {"expected_cone_dimension", expected},
                            {"stratum_dimension", e.a + e.b - d + 1}, {"jacobian_ranks", ranks}});
            err << "p1 dims: d=" << d << " expected " << expected << "\n";
        }
        result["dims"] = rows;
    } else {
        throw std::invalid_argument("p1 needs one of: strata, crosscheck, dims");
    }
    detail::emit(c, timer, std::move(result), out);
    return ok ? Success : Degenerate;
}

/// Classifies random points against the path-graph pair and probes every
/// coordinate hyperplane for resonance.
inline int cmd_raag(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::Timer timer;
    const PairVK<Rational> pair = raag_path_pair<Rational>(c.n);
    Rng rng(c.seed);
    json hyperplanes = json::array();
    std::vector<bool> interior(c.n, false);
    for (std::size_t i = 0; i < c.n; ++i) {
        bool all = true;
        for (int s = 0; s < 20 && all; ++s) {
            Vector<Rational> a(c.n);
            for (std::size_t j = 0; j < c.n; ++j) a[j] = (j == i) ? Rational(0) : random_nonzero_rational(rng);
            all = is_resonant(a, pair, 0.0).resonant;
        }
        interior[i] = all;
        if (all) hyperplanes.push_back(i + 1);
    }
    std::size_t agree = 0, resonant = 0;
    for (std::size_t k = 0; k < c.count; ++k) {
        Vector<Rational> a;
        do a = random_vector<Rational>(rng, c.n);
        while (is_zero_vector(a, 0.0));
        const bool r = is_resonant(a, pair, 0.0).resonant;
        bool predicted = false;
        for (std::size_t i = 0; i < c.n; ++i) predicted = predicted || (interior[i] && sgn(a[i]) == 0);
        agree += (r == predicted);
        resonant += r;
    }
    json result = {{"n", c.n},
                   {"resonant_coordinate_hyperplanes", hyperplanes},
                   {"hyperplane_count", hyperplanes.size()},
                   {"points", c.count},
                   {"resonant_points", resonant},
                   {"agreement_with_hyperplane_union", agree}};
    detail::emit(c, timer, std::move(result), out);
    err << "raag: " << hyperplanes.size() << " hyperplanes; " << agree << "/" << c.count << " points agree\n";
    return agree == c.count ? Success : Degenerate;
}

/// Dispatches and maps errors onto the exit-code contract.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (c.command == "solve") return cmd_solve(c, out, err);
        if (c.command == "membership") return cmd_membership(c, out, err);
        if (c.command == "duality") return cmd_duality(c, out, err);
        if (c.command == "p1") return cmd_p1(c, out, err);
        if (c.command == "raag") return cmd_raag(c, out, err);
        err << "unknown command '" << c.command << "'\n";
        return Usage;
    } catch (const std::exception& ex) {
        err << c.command << ": " << ex.what() << "\n";
        return Usage;
    }
}

}  // namespace resonance::cli

#endif  // RESONANCE_CLI_HPP
