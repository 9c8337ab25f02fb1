#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padic_dispersion/arithmetic.hpp"
#include "padic_dispersion/padic.hpp"

namespace padic {

using PadicVector = std::vector<PadicRational>;

inline PadicVector zero_vector(std::size_t n, std::uint64_t p) { return PadicVector(n, PadicRational(p)); }

inline PadicVector operator-(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) throw InvalidInput("vector arity mismatch");
  PadicVector r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

/// [a, b] = sum a_i b_i.
inline PadicRational dot(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size() || a.empty()) throw InvalidInput("vector arity mismatch");
  PadicRational s(a.front().prime());
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// min_i v(x_i), i.e. ||x|| = p^(-result).
inline std::int64_t min_valuation(const PadicVector& x) {
  std::int64_t v = kInfiniteValuation;
  for (const auto& c : x) v = std::min(v, c.valuation());
  return v;
}

/// The ball center + (p^e Z_p)^n.
class Ball {
 public:
  Ball(PadicVector center, std::int64_t radius_exp) : center_(std::move(center)), e_(radius_exp) {
    if (center_.empty()) throw InvalidInput("ball needs dimension >= 1");
    for (const auto& c : center_) {
      if (c.prime() != center_.front().prime()) throw InvalidInput("mixed primes in ball center");
    }
  }

  /// (p^e Z_p)^n.
  static Ball around_zero(std::size_t n, std::int64_t radius_exp, std::uint64_t p) {
    return {zero_vector(n, p), radius_exp};
  }

  std::size_t dim() const noexcept { return center_.size(); }
  std::uint64_t prime() const noexcept { return center_.front().prime(); }
  const PadicVector& center() const noexcept { return center_; }
  std::int64_t radius_exp() const noexcept { return e_; }

  /// vol(Z_p^n) = 1.
  Rational volume() const { return rational_pow(prime(), -static_cast<std::int64_t>(dim()) * e_); }

  bool contains(const PadicVector& x) const {
    if (x.size() != dim()) throw InvalidInput("point arity does not match ball");
    for (std::size_t i = 0; i < dim(); ++i) {
      if ((x[i] - center_[i]).valuation() < e_) return false;
    }
    return true;
  }

  bool contains(const Ball& b) const { return b.e_ >= e_ && contains(b.center_); }

  /// Balls are nested or disjoint.
  bool intersects(const Ball& b) const { return e_ <= b.e_ ? contains(b.center_) : b.contains(center_); }

  std::string to_string() const {
    std::string s = "ball";
    for (const auto& c : center_) s += " " + c.to_string();
    return s + " " + std::to_string(e_);
  }

  friend bool operator==(const Ball& a, const Ball& b) { return a.e_ == b.e_ && a.contains(b.center_); }

 private:
  PadicVector center_;
  std::int64_t e_;
};

inline std::optional<Ball> intersect(const Ball& a, const Ball& b) {
  if (!a.intersects(b)) return std::nullopt;
  return a.radius_exp() >= b.radius_exp() ? a : b;
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// p^(n*k) with a cap check; the cap error names the required count.
inline std::uint64_t checked_point_count(std::uint64_t p, std::size_t n, std::int64_t k, std::uint64_t cap) {
  if (k <= 0) return 1;
  long double approx = 1;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n) * k; ++i) approx *= static_cast<long double>(p);
  if (approx > static_cast<long double>(cap)) {
    throw ResourceLimit("enumeration requires " + std::to_string(p) + "^" +
                        std::to_string(static_cast<std::int64_t>(n) * k) + " points, cap is " + std::to_string(cap));
  }
  return checked_pow(p, static_cast<std::int64_t>(n) * k);
}

/**
 * Representatives of B modulo p^m, i.e. center + p^e k for k in [0, p^(m-e))^n,
 * in lexicographic order of k (first coordinate most significant). When m <= e the
 * ball lies inside one class and the center alone is produced.
 */
inline void for_each_residue(const Ball& b, std::int64_t m, std::uint64_t cap,
                             const std::function<void(const PadicVector&)>& visit) {
  const std::uint64_t p = b.prime();
  const std::int64_t depth = std::max<std::int64_t>(0, m - b.radius_exp());
  const std::uint64_t total = checked_point_count(p, b.dim(), depth, cap);
  const std::uint64_t per_coord = checked_pow(p, depth);
  const PadicRational step = PadicRational::power_of_p(b.radius_exp(), p);
  std::vector<std::uint64_t> digits(b.dim(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    PadicVector x = b.center();
    for (std::size_t i = 0; i < b.dim(); ++i) {
      x[i] += PadicRational::from_integer(digits[i], p) * step;
    }
    visit(x);
    for (std::size_t i = b.dim(); i-- > 0;) {
      if (++digits[i] < per_coord) break;
      digits[i] = 0;
    }
  }
}

inline std::vector<PadicVector> enumerate_residues(const Ball& b, std::int64_t m,
                                                   std::uint64_t cap = kDefaultEnumerationCap) {
  if (m < 0) throw InvalidInput("enumeration level must be >= 0");
  std::vector<PadicVector> out;
  for_each_residue(b, m, cap, [&](const PadicVector& x) { out.push_back(x); });
  return out;
}

}  // namespace padic
