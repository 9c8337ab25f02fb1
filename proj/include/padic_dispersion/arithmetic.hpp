#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "padic_dispersion/errors.hpp"

namespace padic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest modulus the word-level engines accept; leaves headroom for 128-bit products.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// p^k as a machine word; throws ResourceLimit when it would exceed kMaxModulus.
inline std::uint64_t checked_pow(std::uint64_t p, std::int64_t k) {
  if (k < 0) throw InvalidInput("negative exponent in checked_pow");
  std::uint64_t r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (r > kMaxModulus / p) {
      throw ResourceLimit("modulus " + std::to_string(p) + "^" + std::to_string(k) +
                          " exceeds the word-size limit");
    }
    r *= p;
  }
  return r;
}

inline BigInt big_pow(std::uint64_t p, std::int64_t k) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < k; ++i) r *= p;
  return r;
}

/// p^k for any integer k, as an exact rational.
inline Rational rational_pow(std::uint64_t p, std::int64_t k) {
  if (k >= 0) return Rational(big_pow(p, k));
  return Rational(BigInt(1), big_pow(p, -k));
}

/// v_p(a) for nonzero a.
inline std::int64_t valuation_of(BigInt a, std::uint64_t p) {
  if (a == 0) throw InvalidInput("valuation of zero requested");
  std::int64_t v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

/// a mod m in [0, m).
inline std::uint64_t reduce_mod(const BigInt& a, std::uint64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint64_t>();
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;
  return s >= m ? s - m : s;
}

inline std::string to_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string to_string(const BigInt& a) { return a.str(); }

/// Parses "a", "-a" or "a/b" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  auto digits_only = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!digits_only(num, true) || !digits_only(den, false)) {
    throw InvalidInput("not an exact rational: '" + text + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  BigInt d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
  return Rational(BigInt(num), d);
}

}  // namespace padic
