#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace painleve {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

// Parses "3", "-2", "3/7", "0.25", "1.5e-2" into an exact rational.
std::optional<Rational> parse_rational(std::string_view text);

// Parses an exact complex value: "1/3", "-2i", "1/2+1/3i", "0.25-i".
// Returns (re, im) on success.
std::optional<std::pair<Rational, Rational>> parse_complex_rational(std::string_view text);

std::string rational_str(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact n-th root helper: returns r with r^2 = q if q is a perfect square in Q.
std::optional<Rational> exact_sqrt(const Rational& q);

}  // namespace painleve
