#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace affdim {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", integers and decimals with optional exponent ("-1.25e-3")
/// exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

}  // namespace affdim
