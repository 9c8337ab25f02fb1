#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "padic_dispersion/newton.hpp"
#include "padic_dispersion/oscillatory.hpp"

namespace padic {

/// E_A(z, f) in exact histogram form.
using ExpSumResult = PhaseSum;

/// E_A(z, f) = integral over A of Psi(z f(x)) dx.
inline ExpSumResult exp_sum(const SparsePolynomial& f, const PadicRational& z, const Ball& A,
                            const EngineOptions& opts = {}) {
  if (z.is_zero()) throw InvalidInput("z = 0: E_A(0, f) is vol(A)");
  if (f.nvars() != A.dim()) throw InvalidInput("polynomial arity does not match ball dimension");
  if (z.prime() != A.prime()) throw InvalidInput("mixed primes");
  return integrate_over_ball(to_padic(f, z.prime()).scaled(z), A, {}, opts);
}

inline ExpSumResult exp_sum(const SparsePolynomial& f, std::int64_t m, const Ball& A, const EngineOptions& opts = {}) {
  return exp_sum(f, PadicRational::power_of_p(-m, A.prime()), A, opts);
}

inline void require_integral_ball(const Ball& A) {
  if (A.radius_exp() < 0 || !std::all_of(A.center().begin(), A.center().end(),
                                         [](const PadicRational& c) { return c.is_integral(); })) {
    throw InvalidInput("ball " + A.to_string() + " is not contained in Z_p^n");
  }
}

/// N_m(c) = #{x mod p^m in A : f(x) = c mod p^m}; A must lie in Z_p^n with radius exponent <= m.
inline ResidueHistogram residue_histogram(const SparsePolynomial& f, std::int64_t m, const Ball& A,
                                          const EngineOptions& opts = {}) {
  require_integral_ball(A);
  if (m < A.radius_exp()) throw InvalidInput("level m must be at least the radius exponent of A");
  if (f.nvars() != A.dim()) throw InvalidInput("polynomial arity does not match ball dimension");
  const std::uint64_t p = A.prime();
  const PadicPolynomial g = substitute_affine(to_padic(f, p), A.center(), A.radius_exp(), p);
  const auto phase = detail::compile(g, 0, checked_pow(p, m));
  return detail::enumerate_points(p, f.nvars(), m - A.radius_exp(), phase, {}, opts);
}

/// p^(-nm) * sum_c N_m(c) e^(2 pi i c / p^m): E_A(p^-m, f) recovered from solution counts.
inline ExpSumResult exp_sum_from_histogram(const ResidueHistogram& counts, std::uint64_t p, std::size_t n,
                                           std::int64_t m) {
  return ExpSumResult(p, static_cast<unsigned>(m), counts, rational_pow(p, -static_cast<std::int64_t>(n) * m),
                      RootOfUnity(p, 0, 0), counts.total());
}

struct StationaryOptions {
  unsigned depth_cap = 12;
  std::int64_t m_max = 6;
  EngineOptions engine;
};

struct StationaryCertificate {
  std::int64_t I;
  /// E_A(z, f) = 0 once |z| > p^threshold_exp.
  std::int64_t threshold_exp;
  /// (m, E_A(p^-m, f)) for m in [threshold_exp + 1, m_max].
  std::vector<std::pair<std::int64_t, ExpSumResult>> checks;
  bool verified;
};

/**
 * I(f, A) = max over A of min_i v(df/dx_i), by breadth-first refinement of residue
 * classes a + p^k Z_p^n. A class is settled once w = min_i v(df/dx_i(a)) < k, since
 * then every partial derivative is constant mod p^k on the class.
 */
inline StationaryCertificate stationary_certificate(const SparsePolynomial& f, const Ball& A,
                                                    const StationaryOptions& opts = {}) {
  require_integral_ball(A);
  if (f.nvars() != A.dim()) throw InvalidInput("polynomial arity does not match ball dimension");
  const std::uint64_t p = A.prime();
  const std::size_t n = f.nvars();
  std::vector<SparsePolynomial> grad;
  for (std::size_t i = 0; i < n; ++i) grad.push_back(partial_derivative(f, i));

  struct Cell {
    std::vector<BigInt> a;
    std::int64_t k;
  };
  auto describe = [&](const Cell& c) {
    std::string s = "ball";
    for (const auto& x : c.a) s += " " + x.str();
    return s + " " + std::to_string(c.k);
  };

  std::deque<Cell> queue;
  {
    Cell root{{}, A.radius_exp()};
    for (const auto& c : A.center()) root.a.push_back(c.to_integer());
    queue.push_back(std::move(root));
  }
  std::int64_t I = 0;
  std::uint64_t visited = 0;
  while (!queue.empty()) {
    Cell cell = std::move(queue.front());
    queue.pop_front();
    if (++visited > opts.engine.cap) throw ResourceLimit("class refinement exceeded the enumeration cap");
    std::int64_t w = kInfiniteValuation;
    for (const auto& g : grad) {
      const BigInt v = evaluate(g, cell.a);
      if (v != 0) w = std::min(w, valuation_of(v, p));
    }
    if (w == kInfiniteValuation) {
      throw CertificateUnavailable("critical point of f in residue class " + describe(cell));
    }
    if (w < cell.k) {
      I = std::max(I, w);
      continue;
    }
    if (cell.k >= static_cast<std::int64_t>(opts.depth_cap)) {
      throw Indeterminate("depth cap " + std::to_string(opts.depth_cap) + " reached in residue class " +
                          describe(cell));
    }
    const BigInt step = big_pow(p, cell.k);
    std::vector<std::uint64_t> digit(n, 0);
    while (true) {
      Cell child{cell.a, cell.k + 1};
      for (std::size_t i = 0; i < n; ++i) child.a[i] += step * digit[i];
      queue.push_back(std::move(child));
      std::size_t i = n;
      while (i-- > 0) {
        if (++digit[i] < p) break;
        digit[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }

  StationaryCertificate cert{I, 2 * I + 1, {}, true};
  for (std::int64_t m = cert.threshold_exp + 1; m <= opts.m_max; ++m) {
    auto e = exp_sum(f, m, A, opts.engine);
    cert.verified = cert.verified && e.is_exact_zero() && e.abs() < 1e-9;
    cert.checks.emplace_back(m, std::move(e));
  }
  return cert;
}

struct DecaySample {
  std::int64_t m;
  double abs;
};

struct DecayFit {
  std::vector<DecaySample> samples;
  double slope = 0;
  double intercept = 0;
  /// Root-mean-square residual of the linear fit.
  double residual = 0;
  /// Fewer than two samples above the zero threshold.
  bool super_polynomial = false;
};

inline constexpr double kZeroThreshold = 1e-12;

/// Least squares of -log_p |E| against m over samples with |E| > kZeroThreshold.
inline DecayFit fit_decay(std::vector<DecaySample> samples, std::uint64_t p) {
  DecayFit fit;
  fit.samples = std::move(samples);
  std::vector<std::pair<double, double>> pts;
  const double logp = std::log(static_cast<double>(p));
  for (const auto& s : fit.samples) {
    if (s.abs > kZeroThreshold) pts.emplace_back(static_cast<double>(s.m), -std::log(s.abs) / logp);
  }
  if (pts.size() < 2) {
    fit.super_polynomial = true;
    return fit;
  }
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double k = static_cast<double>(pts.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

struct DecayReport {
  DecayFit fit;
  Rational beta;
  bool quasi_homogeneous;
  double tolerance;
  bool consistent;
};

struct DecayOptions {
  double qh_tolerance = 0.05;
  /// epsilon allowance for f that is not quasi-homogeneous
  double epsilon_margin = 0.1;
  EngineOptions engine;
};

/// Fitted decay of |E_A(p^-m, f)| over m in [m_lo, m_hi], compared against beta_f.
inline DecayReport decay_fit(const SparsePolynomial& f, const Ball& A, std::int64_t m_lo, std::int64_t m_hi,
                             const DecayOptions& opts = {}) {
  if (m_lo < 1 || m_hi < m_lo) throw InvalidInput("m range must satisfy 1 <= A <= B");
  std::vector<DecaySample> samples;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) samples.push_back({m, exp_sum(f, m, A, opts.engine).abs()});
  DecayReport r{fit_decay(std::move(samples), A.prime()), beta_and_t0(newton_facets(f)).beta, false, 0, false};
  r.quasi_homogeneous = quasi_homogeneous_detect(f).has_value();
  r.tolerance = r.quasi_homogeneous ? opts.qh_tolerance : opts.epsilon_margin;
  // sharp for quasi-homogeneous f, only a lower bound otherwise
  const double beta = r.beta.convert_to<double>();
  r.consistent = r.fit.super_polynomial ||
                 (r.quasi_homogeneous ? std::abs(r.fit.slope - beta) <= r.tolerance : r.fit.slope >= beta - r.tolerance);
  return r;
}

}  // namespace padic
