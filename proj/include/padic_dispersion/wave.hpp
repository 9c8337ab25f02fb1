#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "padic_dispersion/fft.hpp"
#include "padic_dispersion/oscillatory.hpp"
#include "padic_dispersion/schwartz_bruhat.hpp"

namespace padic {

/**
 * Initial datum f0 and symbol phi of  u(x,t) = integral of Psi(t phi(xi) + [x, xi]) (F f0)(xi) d xi.
 *
 * freq_bound e: supp F f0 lies in ||xi|| <= p^e, so u(., t) is constant on cosets of p^e Z_p^n.
 * phase_bound e': |phi(xi)| <= p^e' there, so u(x, .) is constant on cosets of p^e' Z_p.
 */
struct SolutionSpec {
  SchwartzBruhatFn f0;
  SparsePolynomial phi;
  ModulatedSBFn spectrum;
  std::int64_t freq_bound;
  std::int64_t phase_bound;

  static SolutionSpec make(SchwartzBruhatFn f0, SparsePolynomial phi) {
    if (f0.terms().empty()) throw InvalidInput("initial datum has no terms");
    if (phi.nvars() != f0.dim()) {
      throw InvalidInput("phi has " + std::to_string(phi.nvars()) + " variables but f0 lives in dimension " +
                         std::to_string(f0.dim()));
    }
    if (phi.has_constant_term()) throw InvalidInput("phi must satisfy phi(0) = 0");
    if (phi.is_constant()) throw InvalidInput("phi must be nonconstant");
    std::int64_t e = std::numeric_limits<std::int64_t>::min();
    for (const auto& t : f0.terms()) e = std::max(e, t.ball.radius_exp());
    std::int64_t e_phase = std::numeric_limits<std::int64_t>::min();
    for (const auto& [alpha, c] : phi.terms()) {
      std::int64_t deg = 0;
      for (auto k : alpha) deg += k;
      e_phase = std::max(e_phase, e * deg - valuation_of(c, f0.prime()));
    }
    auto spectrum = fourier_sb(f0, FourierSign::forward);
    return {std::move(f0), std::move(phi), std::move(spectrum), e, e_phase};
  }

  std::size_t dim() const { return f0.dim(); }
  std::uint64_t prime() const { return f0.prime(); }
};

/// u(x, t), exact up to the final complex evaluation.
inline Complex solve_u(const SolutionSpec& spec, const PadicVector& x, const PadicRational& t,
                       const EngineOptions& opts = {}) {
  const std::size_t n = spec.dim();
  const std::uint64_t p = spec.prime();
  if (x.size() != n) throw InvalidInput("point arity does not match dimension");
  const PadicPolynomial tphi = to_padic(spec.phi, p).scaled(t);
  Complex u = 0;
  for (const auto& term : spec.spectrum.terms()) {
    PadicPolynomial phase = tphi;
    for (std::size_t i = 0; i < n; ++i) phase.add_term(unit_exponent(n, i), x[i] - term.modulation[i]);
    u += term.coeff * integrate_over_ball(phase, term.ball, {}, opts).value();
  }
  return u;
}

/**
 * W_R(xi, tau) = integral over ||x|| <= p^R, |t| <= p^R of u(x,t) Psi(-t tau - [x, xi]).
 * The x and t integrals collapse to indicators, leaving
 * p^(R(n+1)) * integral over ||eta - xi|| <= p^-R, |phi(eta) - tau| <= p^-R of (F f0)(eta).
 */
inline Complex windowed_spectrum(const SolutionSpec& spec, const PadicVector& xi, const PadicRational& tau,
                                 std::int64_t R, const EngineOptions& opts = {}) {
  if (R < 0) throw InvalidInput("window exponent R must be >= 0");
  const std::size_t n = spec.dim();
  const std::uint64_t p = spec.prime();
  if (xi.size() != n) throw InvalidInput("frequency arity does not match dimension");
  const Ball window(xi, R);
  PadicPolynomial shifted = to_padic(spec.phi, p);
  shifted.add_term(Exponent(n, 0), -tau);
  const ValuationConstraint on_surface{shifted, R};
  Complex w = 0;
  for (const auto& term : spec.spectrum.terms()) {
    const auto cell = intersect(term.ball, window);
    if (!cell) continue;
    PadicPolynomial phase(n);
    for (std::size_t i = 0; i < n; ++i) phase.add_term(unit_exponent(n, i), -term.modulation[i]);
    w += term.coeff * integrate_over_ball(phase, *cell, {on_surface}, opts).value();
  }
  return w * std::pow(static_cast<double>(p), static_cast<double>(R) * static_cast<double>(n + 1));
}

/**
 * u sampled on the constancy cells of {||x|| <= p^R, |t| <= p^R}.
 *
 * With xi = p^-e eta (eta in Z_p^n), x = p^-R k and t = p^-R tau,
 *   u(k, tau) = p^(ne) sum_eta Psi(t phi(p^-e eta)) (F f0)(p^-e eta) exp(2 pi i [k, eta] / p^D),
 * D = R + e. The eta-sum runs at a level L where the integrand is constant, is folded
 * down to eta mod p^D, and the k-dependence is one FFT per time cell.
 */
class SolutionGrid {
 public:
  SolutionGrid(const SolutionSpec& spec, std::int64_t R, const EngineOptions& opts = {})
      : spec_(spec), R_(R), opts_(opts) {
    if (R < 0) throw InvalidInput("R must be >= 0");
    p_ = spec.prime();
    n_ = spec.dim();
    e_ = spec.freq_bound;
    D_ = std::max<std::int64_t>(0, R + e_);
    Dt_ = std::max<std::int64_t>(0, R + spec.phase_bound);
    // level making every factor of the integrand constant on eta mod p^L
    L_ = std::max<std::int64_t>({D_, R + spec.phase_bound, 0});
    for (const auto& t : spec.spectrum.terms()) {
      L_ = std::max(L_, e_ + t.ball.radius_exp());
      const std::int64_t vb = min_valuation(t.modulation);
      if (vb != kInfiniteValuation) L_ = std::max(L_, e_ - vb);
    }
    const std::uint64_t per_slice = checked_point_count(p_, n_, L_, opts.cap);
    const std::uint64_t slices = checked_pow(p_, Dt_);
    if (static_cast<long double>(per_slice) * slices > static_cast<long double>(opts.cap)) {
      throw ResourceLimit("Strichartz grid requires " + std::to_string(slices) + " x " + std::to_string(per_slice) +
                          " evaluations, cap is " + std::to_string(opts.cap));
    }
    modL_ = checked_pow(p_, L_);
    roots_ = roots_of_unity(modL_, +1);
    if (D_ > 0) fft_.emplace(checked_pow(p_, D_), n_, +1);
    build_spectrum_table();
    build_phase_table();
  }

  std::int64_t R() const noexcept { return R_; }
  /// number of base-p digits of the x- and t-cell indices
  std::int64_t x_digits() const noexcept { return D_; }
  std::int64_t t_digits() const noexcept { return Dt_; }
  std::uint64_t time_cells() const { return checked_pow(p_, Dt_); }

  PadicRational time_of(std::uint64_t tau) const {
    return PadicRational::from_integer(tau, p_) * PadicRational::power_of_p(-R_, p_);
  }
  PadicVector point_of(std::uint64_t index) const {
    const std::uint64_t side = checked_pow(p_, D_);
    PadicVector x(n_, PadicRational(p_));
    for (std::size_t i = n_; i-- > 0;) {
      x[i] = PadicRational::from_integer(index % side, p_) * PadicRational::power_of_p(-R_, p_);
      index /= side;
    }
    return x;
  }

  /// u(x_k, t_tau) for every x-cell index k (row-major, first coordinate most significant).
  std::vector<Complex> slice(std::uint64_t tau) const {
    const std::uint64_t modD = checked_pow(p_, D_);
    const std::uint64_t cube = checked_pow(p_, static_cast<std::int64_t>(n_) * D_);
    std::vector<Complex> H(cube, 0);
    const std::uint64_t tau_mod = tau % modL_;
    std::vector<std::uint64_t> eta(n_, 0);
    for (std::uint64_t idx = 0; idx < spectrum_.size(); ++idx) {
      if (spectrum_[idx] != Complex(0)) {
        const std::uint64_t r = mul_mod(tau_mod, phase_[idx], modL_);
        std::uint64_t folded = 0;
        for (std::size_t i = 0; i < n_; ++i) folded = folded * modD + eta[i] % modD;
        H[folded] += roots_[r] * spectrum_[idx];
      }
      for (std::size_t i = n_; i-- > 0;) {
        if (++eta[i] < modL_) break;
        eta[i] = 0;
      }
    }
    const double scale = std::pow(static_cast<double>(p_), static_cast<double>(n_) * static_cast<double>(e_ - L_));
    for (auto& h : H) h *= scale;
    if (fft_) fft_->execute(H);
    return H;
  }

 private:
  void build_spectrum_table() {
    const std::uint64_t total = checked_pow(p_, static_cast<std::int64_t>(n_) * L_);
    spectrum_.assign(total, 0);
    struct Prepared {
      std::vector<std::uint64_t> linear;  // -b p^(L-e) mod p^L
      std::uint64_t support_mod;         // eta must vanish mod this
      Complex coeff;
    };
    std::vector<Prepared> prepared;
    for (const auto& t : spec_.spectrum.terms()) {
      Prepared pr{{}, checked_pow(p_, e_ + t.ball.radius_exp()), t.coeff};
      for (const auto& b : t.modulation) {
        const PadicRational c = -b * PadicRational::power_of_p(L_ - e_, p_);
        pr.linear.push_back(reduce_mod(c.to_integer(), modL_));
      }
      prepared.push_back(std::move(pr));
    }
    std::vector<std::uint64_t> eta(n_, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Complex s = 0;
      for (const auto& pr : prepared) {
        bool inside = true;
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < n_; ++i) {
          inside = inside && eta[i] % pr.support_mod == 0;
          r = add_mod(r, mul_mod(pr.linear[i], eta[i], modL_), modL_);
        }
        if (inside) s += pr.coeff * roots_[r];
      }
      spectrum_[idx] = s;
      for (std::size_t i = n_; i-- > 0;) {
        if (++eta[i] < modL_) break;
        eta[i] = 0;
      }
    }
  }

  /// p^L * p^-R phi(p^-e eta) mod p^L, so that t phi = tau * phase / p^L.
  void build_phase_table() {
    detail::ModularPolynomial poly;
    poly.modulus = modL_;
    for (const auto& [alpha, c] : spec_.phi.terms()) {
      std::int64_t deg = 0;
      for (auto k : alpha) deg += k;
      const PadicRational scaled = PadicRational::from_integer(c, p_) * PadicRational::power_of_p(L_ - R_ - e_ * deg, p_);
      const std::uint64_t r = reduce_mod(scaled.to_integer(), modL_);
      if (r != 0) poly.terms.emplace_back(alpha, r);
    }
    const std::uint64_t total = spectrum_.size();
    phase_.assign(total, 0);
    detail::PointEvaluator eval(n_, {&poly});
    std::vector<std::uint64_t> eta(n_, 0);
    eval.update(eta, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      phase_[idx] = eval.eval(0);
      std::size_t i = n_;
      while (i-- > 0) {
        if (++eta[i] < modL_) break;
        eta[i] = 0;
      }
      if (i != static_cast<std::size_t>(-1)) eval.update(eta, i);
    }
  }

  const SolutionSpec& spec_;
  std::int64_t R_;
  EngineOptions opts_;
  std::uint64_t p_;
  std::size_t n_;
  std::int64_t e_, D_, Dt_, L_;
  std::uint64_t modL_;
  std::vector<Complex> roots_;
  std::optional<DftPlan> fft_;
  std::vector<Complex> spectrum_;
  std::vector<std::uint64_t> phase_;
};

/// ||u||_{L^sigma} over {||x|| <= p^r, |t| <= p^r} for every r in [0, R], from one grid at R.
inline std::vector<double> truncated_norms(const SolutionSpec& spec, double sigma, std::int64_t R,
                                           const EngineOptions& opts = {}) {
  if (!(sigma >= 1)) throw InvalidInput("sigma must be >= 1");
  const SolutionGrid grid(spec, R, opts);
  const std::uint64_t p = spec.prime();
  const std::size_t n = spec.dim();
  const std::int64_t e = spec.freq_bound, ep = spec.phase_bound;
  const std::uint64_t slices = grid.time_cells();
  const bool sup = std::isinf(sigma);

  // per time cell and per r: sum over x-cells of |u|^sigma (or max)
  auto per_slice = parallel_map<std::vector<double>>(slices, opts.threads, [&](std::uint64_t tau) {
    std::vector<double> acc(R + 1, 0.0);
    const auto u = grid.slice(tau);
    const std::uint64_t side = checked_pow(p, grid.x_digits());
    for (std::uint64_t k = 0; k < u.size(); ++k) {
      // finest r for which x_k = p^-R k lies in p^-r Z_p^n
      std::int64_t r_min = 0;
      std::uint64_t rest = k;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t c = rest % side;
        rest /= side;
        std::int64_t v = grid.x_digits();
        if (c != 0) {
          v = 0;
          while (c % p == 0) {
            c /= p;
            ++v;
          }
        }
        r_min = std::max(r_min, R - v);
      }
      const double a = std::abs(u[k]);
      const double w = sup ? a : std::pow(a, sigma);
      for (std::int64_t r = std::max<std::int64_t>(r_min, 0); r <= R; ++r) {
        const double vol = std::pow(static_cast<double>(p), -static_cast<double>(n) * std::max<double>(e, -r));
        acc[r] = sup ? std::max(acc[r], w) : acc[r] + w * vol;
      }
    }
    return acc;
  });

  std::vector<double> total(R + 1, 0.0);
  for (std::uint64_t tau = 0; tau < slices; ++tau) {
    std::int64_t v = grid.t_digits();
    if (tau != 0) {
      v = 0;
      for (std::uint64_t c = tau; c % p == 0; c /= p) ++v;
    }
    for (std::int64_t r = std::max<std::int64_t>(R - v, 0); r <= R; ++r) {
      const double vol = std::pow(static_cast<double>(p), -std::max<double>(ep, -r));
      total[r] = sup ? std::max(total[r], per_slice[tau][r]) : total[r] + per_slice[tau][r] * vol;
    }
  }
  if (!sup) {
    for (auto& s : total) s = std::pow(s, 1 / sigma);
  }
  return total;
}

inline double strichartz_truncated(const SolutionSpec& spec, double sigma, std::int64_t R,
                                   const EngineOptions& opts = {}) {
  return truncated_norms(spec, sigma, R, opts).back();
}

struct StrichartzRow {
  std::int64_t R;
  double norm;
  double ratio;
  /// norm(R)^sigma - norm(R-1)^sigma; absent for R = 0
  std::optional<double> increment;
};

struct StrichartzReport {
  std::vector<StrichartzRow> rows;
  double f0_l2;
  /// increments non-increasing over the whole reported tail (R >= 1)
  bool monotone_increments;
  /// increments failed to shrink somewhere in the last three steps
  bool diverging;
  double constant;
};

inline StrichartzReport strichartz_report(const SolutionSpec& spec, double sigma, std::int64_t R_max,
                                          const EngineOptions& opts = {}) {
  if (std::isinf(sigma)) throw InvalidInput("the report needs a finite sigma");
  const auto norms = truncated_norms(spec, sigma, R_max, opts);
  StrichartzReport rep{{}, l2_norm(spec.f0), true, false, 0};
  std::vector<double> inc;
  for (std::int64_t r = 0; r <= R_max; ++r) {
    StrichartzRow row{r, norms[r], norms[r] / rep.f0_l2, std::nullopt};
    if (r > 0) {
      row.increment = std::pow(norms[r], sigma) - std::pow(norms[r - 1], sigma);
      inc.push_back(*row.increment);
    }
    rep.rows.push_back(row);
  }
  const double scale = std::pow(norms.back(), sigma);
  for (std::size_t i = 1; i < inc.size(); ++i) {
    if (inc[i] > inc[i - 1] + 1e-12 * scale) rep.monotone_increments = false;
  }
  for (std::size_t i = inc.size() >= 4 ? inc.size() - 3 : 1; i < inc.size(); ++i) {
    const bool negligible = inc[i] <= 1e-12 * scale;
    if (!negligible && inc[i] >= inc[i - 1] * (1 - 1e-9)) rep.diverging = true;
  }
  rep.constant = rep.rows.back().ratio;
  return rep;
}

}  // namespace padic
