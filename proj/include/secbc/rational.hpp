#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace secbc {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// Parses "p/q" or "p"; q must be positive after normalization.
inline Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int p(s.substr(0, slash));
  Int q(s.substr(slash + 1));
  if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(p, q);
}

inline std::string to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Nearest rational with denominator 2^bits.
inline Rat rationalize(double x, unsigned bits = 40) {
  Int den = Int(1) << bits;
  double scaled = x * static_cast<double>(1ULL << (bits >= 63 ? 0 : bits));
  if (bits >= 63) throw std::invalid_argument("rationalize: bits too large");
  Int num(static_cast<long long>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5));
  return Rat(num, den);
}

}  // namespace secbc
