#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gpipm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// Exact rational representation of the exponents and the shift. Only needed
/// for the encoding-length condition bounds; numerics use the double fields.
struct RationalForm {
  std::vector<RationalVector> exponents;
  RationalVector shift;
};

/// Parses "p/q" or a plain integer string into an exact rational.
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& value);

double to_double(const Rational& value);

/// Binary encoding length of an integer: 1 + ceil(log2(|z| + 1)).
long encoding_length(const BigInt& z);

/// Encoding length of p/q in lowest terms: 1 + ceil(log2(|p|+1)) + ceil(log2(|q|+1)).
long encoding_length(const Rational& value);

/// Entry-wise sum of encoding lengths.
long encoding_length(const RationalVector& values);

/// True if every entry converts to its double value within one ulp.
bool matches_double(const RationalVector& values, const double* doubles, std::size_t count);

}  // namespace gpipm
