#pragma once

#include <gmpxx.h>

#include <string>

#include "cimp/errors.hpp"

namespace cimp {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (reduced fraction, denominator > 0) as long as arithmetic goes through
// its operators, which is all we ever do.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "a" or "a/b" with optional sign. Throws ParseError on malformed input.
inline Rational parse_rational(const std::string& text) {
    try {
        Rational q(text, 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: '" + text + "'");
    }
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

} // namespace cimp
