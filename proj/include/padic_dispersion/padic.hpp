#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "padic_dispersion/arithmetic.hpp"

namespace padic {

/// Valuation of zero.
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

/**
 * An element of Q_p of the form unit * p^val, with unit an integer prime to p.
 *
 * Only rationals whose denominator is a power of p are representable; that set is
 * a ring closed under +, -, * and contains every point the engines enumerate.
 */
class PadicRational {
 public:
  explicit PadicRational(std::uint64_t p) : prime_(p), val_(kInfiniteValuation) { check_prime(p); }

  PadicRational(std::uint64_t p, BigInt unit, std::int64_t val) : prime_(p), unit_(std::move(unit)), val_(val) {
    check_prime(p);
    normalize();
  }

  static PadicRational from_integer(const BigInt& a, std::uint64_t p) { return {p, a, 0}; }

  /// num/den with den = ±p^k; any other denominator is rejected.
  static PadicRational from_fraction(const BigInt& num, const BigInt& den, std::uint64_t p) {
    if (den == 0) throw InvalidInput("zero denominator");
    BigInt d = den;
    BigInt n = num;
    if (d < 0) {
      d = -d;
      n = -n;
    }
    // cancel common factors first so that e.g. 6/3 in Q_2 is accepted
    BigInt g = boost::multiprecision::gcd(n == 0 ? BigInt(1) : n, d);
    if (n != 0) {
      n /= g;
      d /= g;
    } else {
      return PadicRational(p);
    }
    std::int64_t k = 0;
    while (d % p == 0) {
      d /= p;
      ++k;
    }
    if (d != 1) {
      throw InvalidInput("denominator of " + num.str() + "/" + den.str() + " is not a power of " +
                         std::to_string(p));
    }
    return {p, n, -k};
  }

  static PadicRational from_rational(const Rational& q, std::uint64_t p) {
    return from_fraction(numerator(q), denominator(q), p);
  }

  static PadicRational parse(const std::string& text, std::uint64_t p) {
    return from_rational(parse_rational(text), p);
  }

  static PadicRational power_of_p(std::int64_t k, std::uint64_t p) { return {p, BigInt(1), k}; }

  std::uint64_t prime() const noexcept { return prime_; }
  bool is_zero() const noexcept { return unit_ == 0; }
  const BigInt& unit() const noexcept { return unit_; }
  /// kInfiniteValuation for zero.
  std::int64_t valuation() const noexcept { return val_; }

  /// |x|_p = p^(-v(x)); zero for x = 0.
  Rational abs() const {
    if (is_zero()) return Rational(0);
    return rational_pow(prime_, -val_);
  }

  Rational to_rational() const {
    if (is_zero()) return Rational(0);
    return Rational(unit_) * rational_pow(prime_, val_);
  }

  bool is_integral() const noexcept { return is_zero() || val_ >= 0; }

  /// Integer value; requires is_integral().
  BigInt to_integer() const {
    if (!is_integral()) throw InvalidInput("value " + to_string() + " is not a p-adic integer");
    if (is_zero()) return 0;
    return unit_ * big_pow(prime_, val_);
  }

  std::string to_string() const { return padic::to_string(to_rational()); }

  PadicRational operator-() const { return {prime_, -unit_, is_zero() ? 0 : val_}; }

  PadicRational& operator+=(const PadicRational& o) {
    same_prime(o);
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const std::int64_t v = std::min(val_, o.val_);
    BigInt s = unit_ * big_pow(prime_, val_ - v) + o.unit_ * big_pow(prime_, o.val_ - v);
    unit_ = std::move(s);
    val_ = v;
    normalize();
    return *this;
  }
  PadicRational& operator-=(const PadicRational& o) { return *this += -o; }
  PadicRational& operator*=(const PadicRational& o) {
    same_prime(o);
    if (is_zero() || o.is_zero()) {
      unit_ = 0;
      val_ = kInfiniteValuation;
      return *this;
    }
    unit_ *= o.unit_;
    val_ += o.val_;
    return *this;
  }

  friend PadicRational operator+(PadicRational a, const PadicRational& b) { return a += b; }
  friend PadicRational operator-(PadicRational a, const PadicRational& b) { return a -= b; }
  friend PadicRational operator*(PadicRational a, const PadicRational& b) { return a *= b; }
  friend bool operator==(const PadicRational& a, const PadicRational& b) {
    return a.prime_ == b.prime_ && a.unit_ == b.unit_ && a.val_ == b.val_;
  }

 private:
  static void check_prime(std::uint64_t p) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  }
  void same_prime(const PadicRational& o) const {
    if (o.prime_ != prime_) throw InvalidInput("mixed primes in p-adic arithmetic");
  }
  void normalize() {
    if (unit_ == 0) {
      val_ = kInfiniteValuation;
      return;
    }
    while (unit_ % prime_ == 0) {
      unit_ /= prime_;
      ++val_;
    }
  }

  std::uint64_t prime_;
  BigInt unit_;
  std::int64_t val_;
};

inline bool is_zero(const PadicRational& x) { return x.is_zero(); }

/// exp(2 pi i r / p^level), kept in lowest terms.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(std::uint64_t p, std::uint64_t r, unsigned level) : prime_(p), r_(r), level_(level) {
    const std::uint64_t mod = checked_pow(p, level);
    r_ %= mod;
    canonicalize();
  }

  std::uint64_t prime() const noexcept { return prime_; }
  std::uint64_t numerator() const noexcept { return r_; }
  unsigned level() const noexcept { return level_; }
  bool is_one() const noexcept { return level_ == 0; }

  std::complex<double> value() const {
    if (level_ == 0) return {1.0, 0.0};
    const long double frac =
        static_cast<long double>(r_) / static_cast<long double>(checked_pow(prime_, level_));
    const long double angle = 2.0L * std::numbers::pi_v<long double> * frac;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }

  RootOfUnity operator*(const RootOfUnity& o) const {
    if (is_one()) return o;
    if (o.is_one()) return *this;
    const unsigned level = std::max(level_, o.level_);
    const std::uint64_t mod = checked_pow(prime_, level);
    const std::uint64_t a = r_ * checked_pow(prime_, level - level_);
    const std::uint64_t b = o.r_ * checked_pow(prime_, level - o.level_);
    return {prime_, add_mod(a % mod, b % mod, mod), level};
  }

  RootOfUnity conj() const {
    if (is_one()) return *this;
    return {prime_, checked_pow(prime_, level_) - r_, level_};
  }

  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
    return a.r_ == b.r_ && a.level_ == b.level_ && (a.level_ == 0 || a.prime_ == b.prime_);
  }

 private:
  void canonicalize() {
    while (level_ > 0 && r_ % prime_ == 0) {
      r_ /= prime_;
      --level_;
    }
    if (level_ == 0) r_ = 0;
  }

  std::uint64_t prime_ = 2;
  std::uint64_t r_ = 0;
  unsigned level_ = 0;
};

/// The standard additive character Psi(x) = exp(2 pi i {x}_p); trivial exactly on Z_p.
inline RootOfUnity character(const PadicRational& x) {
  if (x.is_zero() || x.valuation() >= 0) return RootOfUnity(x.prime(), 0, 0);
  const auto level = static_cast<unsigned>(-x.valuation());
  const std::uint64_t mod = checked_pow(x.prime(), level);
  return RootOfUnity(x.prime(), reduce_mod(x.unit(), mod), level);
}

struct PadicMeta {
  std::int64_t val;  // kInfiniteValuation for zero
  Rational abs;
  BigInt ac;  // angular component mod p^N; 0 for x = 0
};

inline constexpr unsigned kDefaultAcPrecision = 8;

inline PadicMeta padic_meta(const PadicRational& x, unsigned precision = kDefaultAcPrecision) {
  if (precision == 0) throw InvalidInput("angular-component precision must be >= 1");
  if (x.is_zero()) return {kInfiniteValuation, Rational(0), BigInt(0)};
  const BigInt mod = big_pow(x.prime(), precision);
  BigInt ac = x.unit() % mod;
  if (ac < 0) ac += mod;
  return {x.valuation(), x.abs(), ac};
}

inline PadicMeta padic_meta(const Rational& x, std::uint64_t p, unsigned precision = kDefaultAcPrecision) {
  return padic_meta(PadicRational::from_rational(x, p), precision);
}

}  // namespace padic
