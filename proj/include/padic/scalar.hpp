#pragma once

// Scalar types for measure masses and weights.  Everything templated on a
// scalar works with `double` and with the exact `Rational`.

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padic {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
concept MassScalar = requires(T a, T b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { a < b } -> std::convertible_to<bool>;
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class Scalar>
Scalar scalar_from_int(long long n) {
  return Scalar(n);
}

/// base^e for integer e (negative e divides).
template <class Scalar>
Scalar int_power(const Scalar& base, long long e) {
  Scalar r(1);
  Scalar b = e < 0 ? Scalar(1) / base : base;
  for (unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e); n;
       n >>= 1) {
    if (n & 1ull) r = r * b;
    if (n > 1) b = b * b;
  }
  return r;
}

/// p^e as a scalar.
template <class Scalar>
Scalar p_power(int p, long long e) {
  return int_power<Scalar>(Scalar(p), e);
}

/// Parses "m/n", "m" or a decimal literal into the scalar.  Decimal literals are
/// only accepted for floating scalars.
template <class Scalar>
Scalar parse_scalar(std::string_view text);

template <>
inline double parse_scalar<double>(std::string_view text) {
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos)
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

template <>
inline Rational parse_scalar<Rational>(std::string_view text) {
  std::string s(text);
  if (s.find_first_of(".eE") != std::string::npos)
    throw std::invalid_argument("exact scalar must be an integer or fraction: '" + s + "'");
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace padic
