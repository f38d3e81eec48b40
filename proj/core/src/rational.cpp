#include "gpipm/rational.hpp"

#include <cmath>
#include <cstdlib>

#include "gpipm/errors.hpp"

namespace gpipm {

namespace {

// ceil(log2(x)) for x >= 1.
long ceil_log2(const BigInt& x) {
  if (x <= 1) return 0;
  const unsigned msb = boost::multiprecision::msb(x);  // floor(log2(x))
  const BigInt pow2 = BigInt(1) << msb;
  return (pow2 == x) ? static_cast<long>(msb) : static_cast<long>(msb) + 1;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator: " + text);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("cannot parse rational value: \"" + text + "\"");
  }
}

std::string rational_to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

long encoding_length(const BigInt& z) {
  return 1 + ceil_log2(boost::multiprecision::abs(z) + 1);
}

long encoding_length(const Rational& value) {
  const BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(value));
  const BigInt den = boost::multiprecision::denominator(value);
  return 1 + ceil_log2(num + 1) + ceil_log2(den + 1);
}

long encoding_length(const RationalVector& values) {
  long total = 0;
  for (const auto& v : values) total += encoding_length(v);
  return total;
}

bool matches_double(const RationalVector& values, const double* doubles, std::size_t count) {
  if (values.size() != count) return false;
  for (std::size_t i = 0; i < count; ++i) {
    const double exact = to_double(values[i]);
    const double stored = doubles[i];
    if (exact == stored) continue;
    const double ulp = std::abs(std::nextafter(stored, exact) - stored);
    if (std::abs(exact - stored) > ulp) return false;
  }
  return true;
}

}  // namespace gpipm
