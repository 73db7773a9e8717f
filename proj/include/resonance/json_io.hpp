#ifndef RESONANCE_JSON_IO_HPP
#define RESONANCE_JSON_IO_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "exterior.hpp"
#include "section.hpp"

namespace resonance {

using nlohmann::json;

/*
 * PairVK document:
 *   { "n": 4, "field": "rational" | "complex", "K": [[c_1, ..., c_{C(n,2)}], ...] }
 * Coordinates follow the lexicographic wedge basis. Rationals are "p/q"
 * strings (plain integers are accepted on input), complex numbers [re, im].
 * K-perp is always derived from K.
 */

inline json to_json(const Rational& x) { return to_string(x); }
inline json to_json(const Complex& x) { return json::array({x.real(), x.imag()}); }

template <Field F>
json to_json(const Vector<F>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_array() || j.is_number_float())
        throw ModeError("complex or floating coordinate in a rational document");
    throw std::invalid_argument("rational coordinate must be a \"p/q\" string or an integer");
}

inline Complex complex_from_json(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number() || !j[1].is_number())
            throw std::invalid_argument("complex coordinate must be [re, im]");
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_string()) throw ModeError("rational string coordinate in a complex document");
    if (j.is_number()) return {j.get<double>(), 0.0};
    throw std::invalid_argument("complex coordinate must be [re, im]");
}

template <Field F>
F scalar_from_json(const json& j) {
    if constexpr (is_exact_v<F>)
        return rational_from_json(j);
    else
        return complex_from_json(j);
}

template <Field F>
json pair_to_json(const PairVK<F>& p) {
    json k = json::array();
    for (const auto& w : p.k_basis()) k.push_back(to_json(w.coords));
    return {{"n", p.n()}, {"field", field_traits<F>::name}, {"K", k}};
}

template <Field F>
PairVK<F> pair_from_json_as(const json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    if (n < 2) throw std::invalid_argument("PairVK JSON: n must be at least 2");
    const std::size_t len = binomial(n, 2);
    std::vector<TwoForm<F>> k;
    for (const auto& row : j.at("K")) {
        if (!row.is_array() || row.size() != len)
            throw std::invalid_argument("PairVK JSON: every K row needs C(n,2) = " + std::to_string(len) + " entries");
        Vector<F> c;
        for (const auto& x : row) c.push_back(scalar_from_json<F>(x));
        k.emplace_back(n, Side::V, std::move(c));
    }
    return PairVK<F>::from_k(n, std::move(k));
}

using AnyPair = std::variant<PairVK<Rational>, PairVK<Complex>>;

inline AnyPair pair_from_json(const json& j) {
    const std::string field = j.at("field").get<std::string>();
    if (field == "rational") return pair_from_json_as<Rational>(j);
    if (field == "complex") return pair_from_json_as<Complex>(j);
    throw std::invalid_argument("PairVK JSON: field must be \"rational\" or \"complex\"");
}

inline json to_json(const SectionPoint& p) {
    return {{"t", to_json(p.t)},
            {"a", to_json(p.a)},
            {"b", to_json(p.b)},
            {"residual", p.full_residual},
            {"transversal", p.transversal},
            {"tangent_rank", p.tangent_rank},
            {"multiplicity_flag", p.multiplicity_flag}};
}

inline json to_json(const SectionReport& r) {
    json pts = json::array();
    for (const auto& p : r.solutions) pts.push_back(to_json(p));
    return {{"n", r.n},
            {"dim_kperp", r.dim_kperp},
            {"expected_count", r.expected_count},
            {"count", r.solutions.size()},
            {"paths",
             {{"run", r.paths_run},
              {"converged", r.paths_converged},
              {"diverged", r.paths_diverged},
              {"max_steps", r.paths_max_steps},
              {"cluster", r.paths_cluster}}},
            {"spurious_endpoints", r.spurious},
            {"all_transversal", r.all_transversal},
            {"lines_pairwise_disjoint", r.lines_pairwise_disjoint},
            {"degenerate", r.degenerate()},
            {"points", pts},
            {"disjointness", r.disjoint}};
}

inline json to_json(const DualityTrial& t) {
    json j = {{"trial", t.index},
              {"finite_side", t.finite_side_is_kperp ? "K-perp" : "K"},
              {"finite_points", t.finite_points},
              {"expected_count", t.expected_count},
              {"finite_transversal", t.finite_transversal},
              {"count_deficit", t.count_deficit},
              {"cluster_flag", t.cluster_flag},
              {"rank_deficit", t.rank_deficit},
              {"sliced_dimension", t.sliced_dimension},
              {"sliced_points", t.sliced_points},
              {"sliced_transversal_at_all_computed_points", t.sliced_transversal_all},
              {"agreement", t.agreement}};
    if (t.bad_point_rank) j["constructed_bad_point_tangent_rank"] = *t.bad_point_rank;
    return j;
}

inline json to_json(const DualityReport& r) {
    json trials = json::array();
    for (const auto& t : r.trials) trials.push_back(to_json(t));
    return {{"n", r.n},
            {"dim_k", r.dim_k},
            {"mode", r.degenerate ? "degenerate" : "random"},
            {"trials", trials},
            {"agreements", r.agreements()},
            {"total", r.trials.size()}};
}

}  // namespace resonance

#endif  // RESONANCE_JSON_IO_HPP
