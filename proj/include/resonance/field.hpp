#ifndef RESONANCE_FIELD_HPP
#define RESONANCE_FIELD_HPP

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <vector>

namespace resonance {

// The two scalar modes. Rational values are GMP rationals, which are kept
// canonical (lowest terms, positive denominator) after every operation.
using Rational = mpq_class;
using Complex = std::complex<double>;

template <class F>
using Vector = std::vector<F>;

template <class F>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static constexpr double default_tol = 0.0;

    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
    static bool is_zero(const Rational& x, double /*tol*/) { return sgn(x) == 0; }
    static Rational from_int(long v) { return Rational(v); }
};

template <>
struct field_traits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "complex";
    static constexpr double default_tol = 1e-8;

    static double magnitude(const Complex& x) { return std::abs(x); }
    static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
    static Complex from_int(long v) { return Complex(static_cast<double>(v), 0.0); }
};

/// A scalar mode understood by the library. Mixing modes inside one
/// computation is a compile error; conversions are explicit via to_complex().
template <class F>
concept Field = requires(const F& x) {
    { field_traits<F>::exact } -> std::convertible_to<bool>;
    { field_traits<F>::magnitude(x) } -> std::convertible_to<double>;
};

template <Field F>
inline constexpr bool is_exact_v = field_traits<F>::exact;

template <Field F>
constexpr double default_tol() { return field_traits<F>::default_tol; }

/// Exact mode requires tol == 0, floating mode requires tol > 0.
template <Field F>
void check_tolerance(double tol) {
    if constexpr (is_exact_v<F>) {
        if (tol != 0.0) throw std::invalid_argument("exact mode requires tolerance 0");
    } else {
        if (!(tol > 0.0)) throw std::invalid_argument("floating mode requires a positive tolerance");
    }
}

/// Raised when a value of one scalar mode meets data declared in the other,
/// e.g. a complex [re, im] coordinate inside a "rational" JSON document.
class ModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Complex to_complex(const Rational& x) { return Complex(x.get_d(), 0.0); }
inline Complex to_complex(const Complex& x) { return x; }

template <Field F>
Vector<Complex> to_complex(const Vector<F>& v) {
    Vector<Complex> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_complex(x));
    return out;
}

/// Parses "p/q", "p" or a decimal-free integer string into a canonical rational.
inline Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0)
        throw std::invalid_argument("malformed rational: '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

template <Field F>
double max_magnitude(const Vector<F>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, field_traits<F>::magnitude(x));
    return m;
}

template <Field F>
bool is_zero_vector(const Vector<F>& v, double tol) {
    for (const auto& x : v)
        if (!field_traits<F>::is_zero(x, tol)) return false;
    return true;
}

inline double norm2(const Vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace resonance

#endif  // RESONANCE_FIELD_HPP
