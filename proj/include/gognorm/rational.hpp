#pragma once

// Exact arithmetic carriers used throughout the library.  All norm and
// certificate computations are rational; floating point never appears.

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace gognorm {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Accepts "p", "-p", "p/q" with q > 0 after sign normalization.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        return Rational(num) / Rational(den);
    } catch (const std::runtime_error&) {
        throw ParseError("malformed rational literal '" + text + "'");
    }
}

inline std::string rational_to_string(const Rational& r) {
    const Integer num = numerator(r);
    const Integer den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int rational_sign(const Rational& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

inline void hash_combine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline std::size_t hash_integer(const Integer& z) {
    // Stable across runs; the mpz limb sequence is canonical for a given value.
    std::size_t seed = z < 0 ? 0x5851f42d4c957f2dULL : 0;
    const auto* raw = z.backend().data();
    const std::size_t limbs = static_cast<std::size_t>(mpz_size(raw));
    for (std::size_t i = 0; i < limbs; ++i)
        hash_combine(seed, static_cast<std::size_t>(mpz_getlimbn(raw, static_cast<mp_size_t>(i))));
    return seed;
}

}  // namespace gognorm
