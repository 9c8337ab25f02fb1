#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "padic_dispersion/errors.hpp"

namespace padic {

/// Exact counts N_r for residues r in [0, modulus).
class ResidueHistogram {
 public:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

  explicit ResidueHistogram(std::uint64_t modulus = 1) : modulus_(modulus), dense_mode_(modulus <= kDenseLimit) {
    if (modulus == 0) throw InvalidInput("histogram modulus must be positive");
    if (dense_mode_) dense_.assign(modulus, 0);
  }

  std::uint64_t modulus() const noexcept { return modulus_; }

  void add(std::uint64_t r, std::uint64_t n = 1) {
    if (n == 0) return;
    if (dense_mode_) {
      dense_[r] += n;
    } else {
      sparse_[r] += n;
    }
  }

  std::uint64_t count(std::uint64_t r) const {
    if (dense_mode_) return r < modulus_ ? dense_[r] : 0;
    auto it = sparse_.find(r);
    return it == sparse_.end() ? 0 : it->second;
  }

  void merge(const ResidueHistogram& o) {
    if (o.modulus_ != modulus_) throw InvalidInput("histogram modulus mismatch");
    o.for_each([&](std::uint64_t r, std::uint64_t n) { add(r, n); });
  }

  /// Visits nonzero entries in ascending r.
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (dense_mode_) {
      for (std::uint64_t r = 0; r < modulus_; ++r) {
        if (dense_[r] != 0) fn(r, dense_[r]);
      }
    } else {
      for (const auto& [r, n] : sparse_) {
        if (n != 0) fn(r, n);
      }
    }
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for_each([&](std::uint64_t, std::uint64_t n) { s += n; });
    return s;
  }

  std::vector<std::uint64_t> to_dense() const {
    std::vector<std::uint64_t> out(modulus_, 0);
    for_each([&](std::uint64_t r, std::uint64_t n) { out[r] = n; });
    return out;
  }

  friend bool operator==(const ResidueHistogram& a, const ResidueHistogram& b) {
    if (a.modulus_ != b.modulus_) return false;
    std::map<std::uint64_t, std::uint64_t> ma, mb;
    a.for_each([&](std::uint64_t r, std::uint64_t n) { ma[r] = n; });
    b.for_each([&](std::uint64_t r, std::uint64_t n) { mb[r] = n; });
    return ma == mb;
  }

 private:
  std::uint64_t modulus_;
  bool dense_mode_;
  std::vector<std::uint64_t> dense_;
  std::map<std::uint64_t, std::uint64_t> sparse_;
};

/// Cyclic convolution of two histograms over the same modulus.
inline ResidueHistogram convolve(const ResidueHistogram& a, const ResidueHistogram& b) {
  if (a.modulus() != b.modulus()) throw InvalidInput("histogram modulus mismatch");
  const std::uint64_t m = a.modulus();
  ResidueHistogram out(m);
  a.for_each([&](std::uint64_t ra, std::uint64_t na) {
    b.for_each([&](std::uint64_t rb, std::uint64_t nb) {
      std::uint64_t r = ra + rb;
      if (r >= m) r -= m;
      out.add(r, na * nb);
    });
  });
  return out;
}

}  // namespace padic
