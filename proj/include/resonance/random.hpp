#ifndef RESONANCE_RANDOM_HPP
#define RESONANCE_RANDOM_HPP

#include <cstdint>
#include <random>

#include "field.hpp"

namespace resonance {

using Rng = std::mt19937_64;

/// Independent stream for (seed, index), used for per-trial reproducibility.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

/// Numerator in [-bound, bound], denominator in [1, bound].
inline Rational random_rational(Rng& rng, long bound = 10) {
    std::uniform_int_distribution<long> num(-bound, bound);
    std::uniform_int_distribution<long> den(1, bound);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Rational random_nonzero_rational(Rng& rng, long bound = 10) {
    Rational r;
    do r = random_rational(rng, bound);
    while (sgn(r) == 0);
    return r;
}

/// Standard complex Gaussian.
inline Complex random_complex(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    return {re, g(rng)};
}

template <Field F>
F random_scalar(Rng& rng) {
    if constexpr (is_exact_v<F>)
        return random_rational(rng);
    else
        return random_complex(rng);
}

template <Field F>
Vector<F> random_vector(Rng& rng, std::size_t n) {
    Vector<F> v(n);
    for (auto& x : v) x = random_scalar<F>(rng);
    return v;
}

}  // namespace resonance

#endif  // RESONANCE_RANDOM_HPP
