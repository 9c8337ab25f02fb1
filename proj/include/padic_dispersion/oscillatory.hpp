#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "padic_dispersion/arithmetic.hpp"
#include "padic_dispersion/ball.hpp"
#include "padic_dispersion/histogram.hpp"
#include "padic_dispersion/padic.hpp"
#include "padic_dispersion/parallel.hpp"
#include "padic_dispersion/polynomial.hpp"

namespace padic {

struct EngineOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  unsigned threads = default_threads();
  /// Enumerate this many levels finer than necessary (refinement-stability checks).
  unsigned extra_levels = 0;
  /// Factor the integral over independent variable blocks.
  bool split_blocks = true;
};

/// Keeps only the points y with v(poly(y)) >= min_valuation.
struct ValuationConstraint {
  PadicPolynomial poly;
  std::int64_t min_valuation;
};

/**
 * Exact form of an integral  scale * Psi(c) * sum_r N_r exp(2 pi i r / p^level).
 *
 * counts are integer solution counts; the only floating-point step is value(),
 * which sums in ascending r after removing the cyclotomic relations (equal counts
 * along each fibre r + j p^(level-1)), so exactly-vanishing sums evaluate to 0.
 */
class PhaseSum {
 public:
  PhaseSum(std::uint64_t p, unsigned level, ResidueHistogram counts, Rational scale, RootOfUnity phase,
           std::uint64_t enumerated)
      : prime_(p), level_(level), counts_(std::move(counts)), scale_(std::move(scale)), phase_(phase),
        enumerated_(enumerated) {}

  std::uint64_t prime() const noexcept { return prime_; }
  unsigned level() const noexcept { return level_; }
  const ResidueHistogram& counts() const noexcept { return counts_; }
  /// Volume of one enumerated cell (including any change-of-variables factor).
  const Rational& scale() const noexcept { return scale_; }
  /// Character value of the constant part of the phase.
  const RootOfUnity& phase() const noexcept { return phase_; }
  /// Number of residue points visited, before constraints.
  std::uint64_t enumerated() const noexcept { return enumerated_; }
  std::uint64_t total() const { return counts_.total(); }
  /// Measure of the integration domain: scale * sum N_r.
  Rational volume() const { return scale_ * Rational(total()); }

  /// Counts with the cyclotomic relations removed; same complex value.
  ResidueHistogram reduced_counts() const {
    if (level_ == 0) return counts_;
    const std::uint64_t mod = counts_.modulus();
    const std::uint64_t fibre = mod / prime_;
    ResidueHistogram out(mod);
    counts_.for_each([&](std::uint64_t r, std::uint64_t n) {
      const std::uint64_t base = r % fibre;
      std::uint64_t lowest = n;
      for (std::uint64_t j = 0; j < prime_ && lowest > 0; ++j) lowest = std::min(lowest, counts_.count(base + j * fibre));
      out.add(r, n - lowest);
    });
    return out;
  }

  bool is_exact_zero() const { return reduced_counts().total() == 0; }

  std::complex<double> value() const {
    const ResidueHistogram reduced = reduced_counts();
    const long double mod = static_cast<long double>(reduced.modulus());
    long double re = 0, im = 0;
    reduced.for_each([&](std::uint64_t r, std::uint64_t n) {
      const long double angle = 2.0L * std::numbers::pi_v<long double> * (static_cast<long double>(r) / mod);
      re += static_cast<long double>(n) * std::cos(angle);
      im += static_cast<long double>(n) * std::sin(angle);
    });
    const std::complex<double> sum(static_cast<double>(re), static_cast<double>(im));
    return sum * phase_.value() * scale_.convert_to<double>();
  }

  double abs() const { return std::abs(value()); }

 private:
  std::uint64_t prime_;
  unsigned level_;
  ResidueHistogram counts_;
  Rational scale_;
  RootOfUnity phase_;
  std::uint64_t enumerated_;
};

namespace detail {

/// Integer polynomial reduced mod a word-size modulus.
struct ModularPolynomial {
  std::uint64_t modulus = 1;
  std::vector<std::pair<Exponent, std::uint64_t>> terms;
};

/// p^shift * g, reduced mod `modulus`; every scaled coefficient must be integral.
inline ModularPolynomial compile(const PadicPolynomial& g, std::int64_t shift, std::uint64_t modulus) {
  ModularPolynomial out;
  out.modulus = modulus;
  for (const auto& [e, c] : g.terms()) {
    const PadicRational scaled = c * PadicRational::power_of_p(shift, c.prime());
    const std::uint64_t r = reduce_mod(scaled.to_integer(), modulus);
    if (r != 0) out.terms.emplace_back(e, r);
  }
  return out;
}

/// Evaluates several modular polynomials at odometer-ordered points, caching powers.
class PointEvaluator {
 public:
  PointEvaluator(std::size_t nvars, const std::vector<const ModularPolynomial*>& polys) : polys_(polys) {
    maxdeg_.assign(nvars, 0);
    for (const auto* poly : polys_) {
      for (const auto& [e, c] : poly->terms) {
        for (std::size_t i = 0; i < nvars; ++i) maxdeg_[i] = std::max(maxdeg_[i], e[i]);
      }
    }
    powers_.resize(polys_.size());
    for (auto& per_poly : powers_) {
      per_poly.resize(nvars);
      for (std::size_t i = 0; i < nvars; ++i) per_poly[i].assign(maxdeg_[i] + 1, 1);
    }
  }

  /// Refresh cached powers for coordinates >= first_changed.
  void update(const std::vector<std::uint64_t>& y, std::size_t first_changed) {
    for (std::size_t k = 0; k < polys_.size(); ++k) {
      const std::uint64_t mod = polys_[k]->modulus;
      for (std::size_t i = first_changed; i < y.size(); ++i) {
        auto& pw = powers_[k][i];
        const std::uint64_t yi = y[i] % mod;
        for (std::size_t j = 1; j < pw.size(); ++j) pw[j] = mul_mod(pw[j - 1], yi, mod);
      }
    }
  }

  std::uint64_t eval(std::size_t k) const {
    const auto& poly = *polys_[k];
    const auto& pw = powers_[k];
    const std::uint64_t mod = poly.modulus;
    std::uint64_t acc = 0;
    for (const auto& [e, c] : poly.terms) {
      std::uint64_t t = c;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] != 0) t = mul_mod(t, pw[i][e[i]], mod);
      }
      acc = add_mod(acc, t, mod);
    }
    return acc;
  }

 private:
  std::vector<const ModularPolynomial*> polys_;
  std::vector<std::uint32_t> maxdeg_;
  std::vector<std::vector<std::vector<std::uint64_t>>> powers_;
};

/**
 * Histogram of phase(y) mod phase.modulus over y in [0, p^level)^d, keeping only
 * points where every constraint polynomial vanishes mod its modulus.
 */
inline ResidueHistogram enumerate_points(std::uint64_t p, std::size_t d, std::int64_t level,
                                         const ModularPolynomial& phase,
                                         const std::vector<ModularPolynomial>& constraints,
                                         const EngineOptions& opts) {
  const std::uint64_t total = checked_point_count(p, d, level, opts.cap);
  const std::uint64_t per_coord = checked_pow(p, std::max<std::int64_t>(level, 0));
  std::vector<const ModularPolynomial*> polys{&phase};
  for (const auto& c : constraints) polys.push_back(&c);

  std::vector<ResidueHistogram> partial(std::max(1u, opts.threads), ResidueHistogram(phase.modulus));
  parallel_chunks(total, opts.threads, [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return;
    PointEvaluator eval(d, polys);
    std::vector<std::uint64_t> y(d, 0);
    std::uint64_t rest = begin;
    for (std::size_t i = d; i-- > 0;) {
      y[i] = rest % per_coord;
      rest /= per_coord;
    }
    eval.update(y, 0);
    auto& hist = partial[worker];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      bool keep = true;
      for (std::size_t k = 1; k < polys.size() && keep; ++k) keep = eval.eval(k) == 0;
      if (keep) hist.add(eval.eval(0));
      if (idx + 1 == end) break;
      std::size_t i = d;
      while (i-- > 0) {
        if (++y[i] < per_coord) break;
        y[i] = 0;
      }
      eval.update(y, i);
    }
  });
  ResidueHistogram out(phase.modulus);
  for (const auto& h : partial) out.merge(h);
  return out;
}

inline PadicPolynomial restrict_to_variables(const PadicPolynomial& g, const std::vector<std::size_t>& vars) {
  PadicPolynomial out(vars.size());
  for (const auto& [e, c] : g.terms()) {
    Exponent sub(vars.size());
    bool touches = false;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      sub[j] = e[vars[j]];
      touches = touches || sub[j] != 0;
    }
    if (touches) out.add_term(sub, c);
  }
  return out;
}

/// Connected components of variables linked by shared monomials.
inline std::vector<std::vector<std::size_t>> variable_blocks(const PadicPolynomial& g) {
  const std::size_t n = g.nvars();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [e, c] : g.terms()) {
    std::size_t first = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      if (first == n) {
        first = i;
      } else {
        parent[find(i)] = find(first);
      }
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> root_to_block(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_to_block[r] == n) {
      root_to_block[r] = blocks.size();
      blocks.emplace_back();
    }
    blocks[root_to_block[r]].push_back(i);
  }
  return blocks;
}

/// Smallest L >= 0 such that g(y) mod Z_p (nonconstant part) depends only on y mod p^L.
inline std::int64_t phase_level(const PadicPolynomial& g) {
  const std::int64_t v = min_coefficient_valuation(g, true);
  if (v == kInfiniteValuation) return 0;
  return std::max<std::int64_t>(0, -v);
}

struct BlockResult {
  std::int64_t level;
  ResidueHistogram hist;
  std::uint64_t enumerated;
  std::int64_t enum_level;
  std::size_t dim;
};

inline BlockResult integrate_block(std::uint64_t p, const PadicPolynomial& nonconstant,
                                   const std::vector<ValuationConstraint>& constraints, const EngineOptions& opts) {
  const std::size_t d = nonconstant.nvars();
  const std::int64_t level = phase_level(nonconstant);
  std::int64_t enum_level = level;
  std::vector<ModularPolynomial> compiled;
  for (const auto& c : constraints) {
    const std::int64_t vmin_all = min_coefficient_valuation(c.poly, false);
    const std::int64_t vmin_nonconst = min_coefficient_valuation(c.poly, true);
    const std::int64_t shift = std::max<std::int64_t>(0, vmin_all == kInfiniteValuation ? 0 : -vmin_all);
    const std::int64_t mod_exp = c.min_valuation + shift;
    if (mod_exp <= 0) continue;
    if (vmin_nonconst != kInfiniteValuation) {
      enum_level = std::max(enum_level, std::max<std::int64_t>(0, c.min_valuation - vmin_nonconst));
    }
    compiled.push_back(compile(c.poly, shift, checked_pow(p, mod_exp)));
  }
  enum_level += opts.extra_levels;
  const ModularPolynomial phase = compile(nonconstant, level, checked_pow(p, level));
  ResidueHistogram hist = enumerate_points(p, d, enum_level, phase, compiled, opts);
  return {level, std::move(hist), checked_point_count(p, d, enum_level, opts.cap), enum_level, d};
}

}  // namespace detail

/**
 * jacobian * integral over Z_p^d of Psi(phase(y)) * prod_j 1[v(q_j(y)) >= k_j] dy.
 *
 * The enumeration level is derived from the coefficient valuations of the phase:
 * if every nonconstant coefficient has valuation >= -L, then Psi(phase(y)) is
 * constant on cosets of p^L Z_p^d because (y + p^L h)^a - y^a lies in p^L Z_p.
 */
inline PhaseSum integrate_phase(std::uint64_t p, const PadicPolynomial& phase, const Rational& jacobian,
                                std::vector<ValuationConstraint> constraints, const EngineOptions& opts) {
  // drop constraints that hold identically on Z_p^d
  std::vector<ValuationConstraint> active;
  for (auto& c : constraints) {
    if (c.poly.nvars() != phase.nvars()) throw InvalidInput("constraint arity does not match phase");
    if (min_coefficient_valuation(c.poly, false) >= c.min_valuation) continue;
    active.push_back(std::move(c));
  }

  RootOfUnity constant_phase(p, 0, 0);
  if (const auto* c0 = phase.constant_term()) constant_phase = character(*c0);
  const PadicPolynomial nonconstant = phase.without_constant();
  const std::size_t d = phase.nvars();

  std::vector<std::vector<std::size_t>> blocks;
  if (opts.split_blocks && active.empty()) {
    blocks = detail::variable_blocks(nonconstant);
  } else {
    blocks.emplace_back(d);
    std::iota(blocks.front().begin(), blocks.front().end(), 0);
  }

  if (blocks.size() == 1) {
    auto r = detail::integrate_block(p, nonconstant, active, opts);
    Rational scale = jacobian * rational_pow(p, -static_cast<std::int64_t>(d) * r.enum_level);
    return PhaseSum(p, static_cast<unsigned>(r.level), std::move(r.hist), std::move(scale), constant_phase,
                    r.enumerated);
  }

  std::vector<detail::BlockResult> parts;
  std::int64_t level = 0;
  for (const auto& vars : blocks) {
    parts.push_back(detail::integrate_block(p, detail::restrict_to_variables(nonconstant, vars), {}, opts));
    level = std::max(level, parts.back().level);
  }
  const std::uint64_t mod = checked_pow(p, level);
  ResidueHistogram acc(mod);
  acc.add(0);
  Rational scale = jacobian;
  std::uint64_t enumerated = 0;
  for (const auto& part : parts) {
    const std::uint64_t lift = checked_pow(p, level - part.level);
    ResidueHistogram lifted(mod);
    part.hist.for_each([&](std::uint64_t r, std::uint64_t n) { lifted.add(r * lift, n); });
    acc = convolve(acc, lifted);
    scale *= rational_pow(p, -static_cast<std::int64_t>(part.dim) * part.enum_level);
    enumerated += part.enumerated;
  }
  return PhaseSum(p, static_cast<unsigned>(level), std::move(acc), std::move(scale), constant_phase, enumerated);
}

/// integral over the ball B of Psi(phase(x)) * prod_j 1[v(q_j(x)) >= k_j] dx.
inline PhaseSum integrate_over_ball(const PadicPolynomial& phase, const Ball& ball,
                                    const std::vector<ValuationConstraint>& constraints, const EngineOptions& opts) {
  if (phase.nvars() != ball.dim()) throw InvalidInput("phase arity does not match ball dimension");
  const std::uint64_t p = ball.prime();
  std::vector<ValuationConstraint> shifted;
  for (const auto& c : constraints) {
    shifted.push_back({substitute_affine(c.poly, ball.center(), ball.radius_exp(), p), c.min_valuation});
  }
  const PadicPolynomial g = substitute_affine(phase, ball.center(), ball.radius_exp(), p);
  return integrate_phase(p, g, ball.volume(), std::move(shifted), opts);
}

}  // namespace padic
