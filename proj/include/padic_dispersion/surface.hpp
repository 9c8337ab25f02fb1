#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "padic_dispersion/exp_sums.hpp"
#include "padic_dispersion/schwartz_bruhat.hpp"

namespace padic {

/// Y = {x_n = phi(x')} with the measure |dx_1 ... dx_(n-1)| restricted to the window S.
class GraphHypersurface {
 public:
  GraphHypersurface(SparsePolynomial phi, Ball window) : phi_(std::move(phi)), window_(std::move(window)) {
    if (phi_.is_constant()) throw InvalidInput("phi must be nonconstant");
    if (phi_.has_constant_term()) throw InvalidInput("phi must satisfy phi(0) = 0");
    if (window_.dim() != phi_.nvars() + 1) throw InvalidInput("window must live in K^n with n = nvars(phi) + 1");
  }

  const SparsePolynomial& phi() const noexcept { return phi_; }
  const Ball& window() const noexcept { return window_; }
  std::size_t dim() const noexcept { return window_.dim(); }
  std::uint64_t prime() const noexcept { return window_.prime(); }

  /// Projection of the window to K^(n-1).
  Ball projected_window() const {
    PadicVector c(window_.center().begin(), window_.center().end() - 1);
    return {std::move(c), window_.radius_exp()};
  }

  /// v(phi(x') - c_n) >= e: the graph point lies in the window.
  ValuationConstraint window_constraint() const { return height_constraint(window_.center().back(), window_.radius_exp()); }

  /// v(phi(x') - h) >= e.
  ValuationConstraint height_constraint(const PadicRational& h, std::int64_t e) const {
    PadicPolynomial q = to_padic(phi_, prime());
    q.add_term(Exponent(phi_.nvars(), 0), -h);
    return {std::move(q), e};
  }

 private:
  SparsePolynomial phi_;
  Ball window_;
};

/// Psi-phase -[a', x'] - a_n phi(x') of the graph point (x', phi(x')).
inline PadicPolynomial graph_linear_phase(const GraphHypersurface& Y, const PadicVector& a) {
  const std::uint64_t p = Y.prime();
  const std::size_t m = Y.dim() - 1;
  PadicPolynomial g = to_padic(Y.phi(), p).scaled(-a.back());
  for (std::size_t i = 0; i < m; ++i) g.add_term(unit_exponent(m, i), -a[i]);
  return g;
}

/// integral over Y of Psi(-[x, xi]) d mu_{Y,S}(x).
inline PhaseSum surface_ft(const GraphHypersurface& Y, const PadicVector& xi, const EngineOptions& opts = {}) {
  if (xi.size() != Y.dim()) throw InvalidInput("frequency arity does not match surface");
  return integrate_over_ball(graph_linear_phase(Y, xi), Y.projected_window(), {Y.window_constraint()}, opts);
}

struct SurfaceDecayRow {
  std::int64_t k;
  Rational norm;  // ||xi(k)|| = p^k
  double abs;
};

struct SurfaceDecayTable {
  std::vector<SurfaceDecayRow> rows;
  DecayFit fit;
  /// exponent from the diagonal-quadratic ((n-1)/2) or monomial (1/d) family, if phi is in one
  std::optional<Rational> family_exponent;
  /// the two readings of beta_phi: max_j d_j and 1/max_j d_j
  Rational max_degree;
  Rational inverse_max_degree;
  std::optional<double> expected;
  double tolerance = 0.05;
  bool consistent = true;
};

/// (n-1)/2 for sum a_i x_i^2 (all a_i != 0), 1/d for a x^d; nullopt otherwise.
inline std::optional<Rational> family_exponent(const SparsePolynomial& phi) {
  const std::size_t m = phi.nvars();
  if (m == 1 && phi.size() == 1) return Rational(1, phi.terms().begin()->first[0]);
  if (phi.size() != m) return std::nullopt;
  for (std::size_t i = 0; i < m; ++i) {
    Exponent e(m, 0);
    e[i] = 2;
    if (!phi.terms().count(e)) return std::nullopt;
  }
  return Rational(m, 2);
}

/**
 * |surface_ft(Y, xi(k))| for xi(k) = p^(-k) * direction, k in [k_lo, k_hi], with the
 * least-squares slope of -log_p |.| against k. `direction` must have norm 1.
 */
inline SurfaceDecayTable decay_table(const GraphHypersurface& Y, const PadicVector& direction, std::int64_t k_lo,
                                     std::int64_t k_hi, std::optional<double> configured_exponent = std::nullopt,
                                     const EngineOptions& opts = {}) {
  if (k_hi < k_lo) throw InvalidInput("empty k range");
  if (min_valuation(direction) != 0) throw InvalidInput("ray direction must have norm 1");
  const std::uint64_t p = Y.prime();
  SurfaceDecayTable table;
  std::vector<DecaySample> samples;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    PadicVector xi = direction;
    for (auto& c : xi) c *= PadicRational::power_of_p(-k, p);
    const double a = surface_ft(Y, xi, opts).abs();
    table.rows.push_back({k, rational_pow(p, k), a});
    samples.push_back({k, a});
  }
  table.fit = fit_decay(std::move(samples), p);
  std::uint32_t dmax = 0;
  for (std::size_t j = 0; j < Y.phi().nvars(); ++j) dmax = std::max(dmax, Y.phi().degree_in(j));
  table.max_degree = Rational(dmax);
  table.inverse_max_degree = Rational(1, dmax);
  table.family_exponent = family_exponent(Y.phi());
  if (table.family_exponent) {
    table.expected = table.family_exponent->convert_to<double>();
  } else {
    table.expected = configured_exponent;
  }
  if (table.expected && !table.fit.super_polynomial) {
    table.consistent = std::abs(table.fit.slope - *table.expected) <= table.tolerance;
  }
  return table;
}

/// Upper end 2(1 + beta) / (2 + beta) of the restriction range.
inline Rational restriction_exponent_bound(const Rational& beta) { return 2 * (1 + beta) / (2 + beta); }

struct RestrictionResult {
  double ratio;
  double surface_l2;
  double lp;
  /// 1 <= rho <= 2(1 + beta) / (2 + beta)
  bool admissible;
};

/**
 * (integral over Y of |Fg|^2 d mu_{Y,S})^(1/2) / ||g||_rho. |Fg|^2 expands into
 * pairwise products of modulated terms; each product is integrated exactly on the
 * graph over the intersection of the two balls.
 */
inline RestrictionResult restriction_ratio(const SchwartzBruhatFn& g, const GraphHypersurface& Y, double rho,
                                           const Rational& beta, const EngineOptions& opts = {}) {
  if (g.dim() != Y.dim() || g.prime() != Y.prime()) throw InvalidInput("function does not match surface");
  const double lp = lp_norm(g, rho);
  if (lp == 0) throw InvalidInput("||g|| = 0");
  const ModulatedSBFn Fg = fourier_sb(g, FourierSign::forward);
  const Ball window = Y.window();
  Complex total = 0;
  for (const auto& a : Fg.terms()) {
    for (const auto& b : Fg.terms()) {
      const auto ab = intersect(a.ball, b.ball);
      if (!ab) continue;
      const auto cell = intersect(*ab, window);
      if (!cell) continue;
      const GraphHypersurface piece(Y.phi(), *cell);
      const PhaseSum s = integrate_over_ball(graph_linear_phase(piece, a.modulation - b.modulation),
                                             piece.projected_window(), {piece.window_constraint()}, opts);
      total += a.coeff * std::conj(b.coeff) * s.value();
    }
  }
  const double l2 = std::sqrt(std::max(0.0, total.real()));
  const double bound = restriction_exponent_bound(beta).convert_to<double>();
  return {l2 / lp, l2, lp, rho >= 1 && rho <= bound + 1e-15};
}

enum class ZetaMode { closed_form, shell_sum };

/**
 * zeta_z(x) = gamma(z) * integral over p^(e0) Z_p of Psi(x y) |y|^(z-1) dy with
 * gamma(z) = (1 - p^-z) / (1 - p^-1). The closed form is entire in z; the shell sum
 * needs Re z > 0 and truncates once the geometric tail drops below 1e-15.
 */
inline Complex zeta_kernel(Complex z, const PadicRational& x, std::int64_t e0, ZetaMode mode = ZetaMode::closed_form) {
  if (e0 < 1) throw InvalidInput("e0 must be >= 1");
  const double q = static_cast<double>(x.prime());
  // |x| <= q^e0  <=>  v(x) >= -e0
  const bool inner = x.is_zero() || x.valuation() >= -e0;
  if (mode == ZetaMode::closed_form) {
    if (inner) return std::pow(q, -static_cast<double>(e0) * z);
    const double absx = std::pow(q, -static_cast<double>(x.valuation()));
    return (1.0 - std::pow(q, z - 1.0)) / (1.0 - 1.0 / q) * std::pow(absx, -z);
  }
  if (!(z.real() > 0)) throw InvalidInput("shell-sum mode needs Re z > 0");
  const Complex gamma = (1.0 - std::pow(q, -z)) / (1.0 - 1.0 / q);
  // shell v(y) = j: integral of Psi(xy) is q^-j 1[v(x) >= -j] - q^-(j+1) 1[v(x) >= -j-1]
  const std::int64_t vx = x.is_zero() ? std::numeric_limits<std::int64_t>::max() : x.valuation();
  const double ratio = std::pow(q, -z.real());
  Complex sum = 0;
  for (std::int64_t j = e0;; ++j) {
    const double inner_j = vx >= -j ? std::pow(q, -static_cast<double>(j)) : 0.0;
    const double inner_j1 = vx >= -j - 1 ? std::pow(q, -static_cast<double>(j + 1)) : 0.0;
    sum += std::pow(q, -static_cast<double>(j) * (z - 1.0)) * (inner_j - inner_j1);
    const double tail = std::pow(ratio, static_cast<double>(j + 1)) / (1 - ratio);
    if (std::abs(gamma) * tail < 1e-15 && j >= -vx) break;
  }
  return gamma * sum;
}

}  // namespace padic
