#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace tasep {

using Rational = mpq_class;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static Rational from_fraction(long num, long den) {
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    static Rational from_rational(const Rational& r) { return r; }
    static double to_double(const Rational& r) { return r.get_d(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static double from_fraction(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double from_rational(const Rational& r) { return r.get_d(); }
    static double to_double(double v) { return v; }
};

template <class S>
S scalar_from(const Rational& r) {
    return ScalarTraits<S>::from_rational(r);
}

template <class S>
double to_double(const S& v) {
    return ScalarTraits<S>::to_double(v);
}

// Integer power; negative exponents invert.
template <class S>
S ipow(const S& base, long e) {
    if (e < 0) {
        if (base == S(0)) throw std::domain_error("ipow: zero to a negative power");
        return S(1) / ipow(base, -e);
    }
    S result(1);
    S b(base);
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

template <class S>
S sign_power(long e) {
    return (e % 2 == 0) ? S(1) : S(-1);
}

template <class S>
S abs_value(const S& v) {
    return v < S(0) ? S(-v) : v;
}

// Parses "a/b", "a" or a finite decimal "0.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

}  // namespace tasep
