#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padic_dispersion/ball.hpp"
#include "padic_dispersion/padic.hpp"

namespace padic {

using Complex = std::complex<double>;

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double v = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw InvalidInput("not a number: '" + text + "'");
  return v;
}

inline std::string format_complex(Complex c) {
  return "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
}

/// Psi(-[b, x]) as a complex number.
inline Complex psi_minus_dot(const PadicVector& b, const PadicVector& x) { return character(-dot(b, x)).value(); }

/// x mod p^e Z_p, represented by a rational in [0, p^e).
inline PadicRational reduce_center(const PadicRational& x, std::int64_t e) {
  const std::uint64_t p = x.prime();
  if (x.is_zero() || x.valuation() >= e) return PadicRational(p);
  const std::int64_t level = e - x.valuation();
  const std::uint64_t r = reduce_mod(x.unit(), checked_pow(p, level));
  return PadicRational(p, BigInt(r), x.valuation());
}

inline Ball canonical_ball(const Ball& b) {
  PadicVector c;
  for (const auto& x : b.center()) c.push_back(reduce_center(x, b.radius_exp()));
  return {std::move(c), b.radius_exp()};
}

struct SBTerm {
  Ball ball;
  Complex coeff;
};

/// Finite sum of coeff * 1_ball over pairwise disjoint balls in K^n.
class SchwartzBruhatFn {
 public:
  SchwartzBruhatFn(std::size_t n, std::uint64_t p) : n_(n), p_(p) {
    if (n == 0) throw InvalidInput("dimension must be >= 1");
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  }

  SchwartzBruhatFn(std::size_t n, std::uint64_t p, std::vector<SBTerm> terms) : SchwartzBruhatFn(n, p) {
    for (auto& t : terms) add(std::move(t.ball), t.coeff);
  }

  void add(Ball ball, Complex coeff) {
    if (ball.dim() != n_ || ball.prime() != p_) throw InvalidInput("ball does not match function domain");
    for (const auto& t : terms_) {
      if (t.ball.intersects(ball)) {
        throw InvalidInput("balls " + t.ball.to_string() + " and " + ball.to_string() + " overlap");
      }
    }
    terms_.push_back({canonical_ball(ball), coeff});
  }

  std::size_t dim() const noexcept { return n_; }
  std::uint64_t prime() const noexcept { return p_; }
  const std::vector<SBTerm>& terms() const noexcept { return terms_; }

  Complex operator()(const PadicVector& x) const {
    for (const auto& t : terms_) {
      if (t.ball.contains(x)) return t.coeff;
    }
    return 0;
  }

  SchwartzBruhatFn scaled(Complex c) const {
    SchwartzBruhatFn g(n_, p_);
    for (const auto& t : terms_) g.terms_.push_back({t.ball, t.coeff * c});
    return g;
  }

  /// x -> g(x - a).
  SchwartzBruhatFn translated(const PadicVector& a) const {
    SchwartzBruhatFn g(n_, p_);
    for (const auto& t : terms_) {
      PadicVector c = t.ball.center();
      for (std::size_t i = 0; i < n_; ++i) c[i] += a.at(i);
      g.terms_.push_back({canonical_ball(Ball(std::move(c), t.ball.radius_exp())), t.coeff});
    }
    return g;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += "; ";
      s += t.ball.to_string() + " " + format_complex(t.coeff);
    }
    return s;
  }

 private:
  std::size_t n_;
  std::uint64_t p_;
  std::vector<SBTerm> terms_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum |c|^rho vol(ball))^(1/rho); rho = infinity gives max |c|.
inline double lp_norm(const SchwartzBruhatFn& g, double rho) {
  if (!(rho >= 1)) throw InvalidInput("norm exponent must be >= 1");
  if (std::isinf(rho)) {
    double m = 0;
    for (const auto& t : g.terms()) m = std::max(m, std::abs(t.coeff));
    return m;
  }
  double s = 0;
  for (const auto& t : g.terms()) s += std::pow(std::abs(t.coeff), rho) * t.ball.volume().convert_to<double>();
  return std::pow(s, 1 / rho);
}

inline double l2_norm(const SchwartzBruhatFn& g) { return lp_norm(g, 2); }

/**
 * Parses "ball c_1 ... c_n e [coeff]" terms, coeff either a real or "(re,im)", separated by ';'. Centers are exact
 * rationals with p-power denominators; the coefficient defaults to 1.
 */
inline SchwartzBruhatFn parse_ball_list(const std::string& text, std::uint64_t p, std::size_t n) {
  SchwartzBruhatFn g(n, p);
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t semi = std::min(text.find(';', start), text.size());
    const std::string item = text.substr(start, semi - start);
    std::istringstream in(item);
    std::vector<std::string> tok;
    for (std::string w; in >> w;) tok.push_back(w);
    if (tok.empty()) {
      if (semi == text.size() && start != 0) break;
      throw ParseError("empty ball term", start);
    }
    if (tok[0] != "ball") throw ParseError("expected 'ball'", start + item.find_first_not_of(" \t"));
    Complex coeff = 1;
    if (tok.size() == n + 3) {
      const std::string c = tok.back();
      if (c.front() == '(') {
        const auto comma = c.find(',');
        if (c.back() != ')' || comma == std::string::npos) throw ParseError("malformed coefficient '" + c + "'", start);
        coeff = {parse_double(c.substr(1, comma - 1)), parse_double(c.substr(comma + 1, c.size() - comma - 2))};
      } else {
        coeff = parse_double(c);
      }
      tok.pop_back();
    }
    if (tok.size() != n + 2) {
      throw ParseError("ball term needs " + std::to_string(n) + " center components and a radius exponent", start);
    }
    PadicVector center;
    for (std::size_t i = 0; i < n; ++i) center.push_back(PadicRational::parse(tok[1 + i], p));
    std::int64_t e = 0;
    try {
      std::size_t used = 0;
      e = std::stoll(tok[n + 1], &used);
      if (used != tok[n + 1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("radius exponent must be an integer", start);
    }
    g.add(Ball(std::move(center), e), coeff);
    start = semi + 1;
  }
  if (g.terms().empty()) throw ParseError("no ball terms", 0);
  return g;
}

struct RandomSBOptions {
  std::size_t max_terms = 4;
  std::int64_t e_lo = -2;
  std::int64_t e_hi = 2;
  /// centers have denominators dividing p^max_denominator_exp
  std::int64_t max_denominator_exp = 2;
};

/// Seeded random Schwartz-Bruhat function with disjoint balls and coefficients in [-1,1]^2.
inline SchwartzBruhatFn random_schwartz_bruhat(std::uint64_t p, std::size_t n, const RandomSBOptions& opts,
                                               std::mt19937_64& rng) {
  SchwartzBruhatFn g(n, p);
  const std::size_t want = 1 + rng() % opts.max_terms;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; g.terms().size() < want && attempt < 200; ++attempt) {
    const std::int64_t e = opts.e_lo + static_cast<std::int64_t>(rng() % (opts.e_hi - opts.e_lo + 1));
    PadicVector center;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t k = static_cast<std::int64_t>(rng() % (opts.max_denominator_exp + 1));
      const std::uint64_t span = checked_pow(p, k + std::max<std::int64_t>(e, 0) + 1);
      center.push_back(PadicRational(p, BigInt(rng() % span), -k));
    }
    Ball b(std::move(center), e);
    const bool clash = std::any_of(g.terms().begin(), g.terms().end(),
                                   [&](const SBTerm& t) { return t.ball.intersects(b); });
    if (clash) continue;
    Complex c(unit(rng), unit(rng));
    if (std::abs(c) < 1e-3) c = 1;
    g.add(std::move(b), c);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Modulated functions and the Fourier transform

/// coeff * Psi(-[modulation, xi]) * 1_ball(xi).
struct ModulatedTerm {
  Ball ball;
  PadicVector modulation;
  Complex coeff;
};

/**
 * Finite sum of modulated ball indicators. Unlike SchwartzBruhatFn the balls may
 * overlap: transforms of disjoint balls are nested balls around the origin.
 */
class ModulatedSBFn {
 public:
  ModulatedSBFn(std::size_t n, std::uint64_t p) : n_(n), p_(p) {}

  void add(ModulatedTerm t) {
    if (t.ball.dim() != n_ || t.modulation.size() != n_) throw InvalidInput("term does not match dimension");
    terms_.push_back(std::move(t));
  }

  std::size_t dim() const noexcept { return n_; }
  std::uint64_t prime() const noexcept { return p_; }
  const std::vector<ModulatedTerm>& terms() const noexcept { return terms_; }

  Complex operator()(const PadicVector& xi) const {
    Complex s = 0;
    for (const auto& t : terms_) {
      if (t.ball.contains(xi)) s += t.coeff * psi_minus_dot(t.modulation, xi);
    }
    return s;
  }

 private:
  std::size_t n_;
  std::uint64_t p_;
  std::vector<ModulatedTerm> terms_;
};

enum class FourierSign { forward = -1, inverse = +1 };

/**
 * x -> integral of Psi(s [xi, x]) T(xi) d xi for one term T = c Psi(-[b, xi]) 1_{c0 + p^E Z_p^n}:
 * c p^(-nE) Psi(-[b, c0]) Psi(-[-s c0, x]) 1[x in s b + p^(-E) Z_p^n].
 */
inline ModulatedTerm fourier_term(const ModulatedTerm& t, FourierSign sign) {
  const std::uint64_t p = t.ball.prime();
  const std::size_t n = t.ball.dim();
  const bool fwd = sign == FourierSign::forward;
  const std::int64_t E = t.ball.radius_exp();
  PadicVector center = t.modulation;
  PadicVector modulation = t.ball.center();
  for (std::size_t i = 0; i < n; ++i) {
    if (fwd) {
      center[i] = -center[i];
    } else {
      modulation[i] = -modulation[i];
    }
  }
  const Complex coeff = t.coeff * std::pow(static_cast<double>(p), -static_cast<double>(n) * static_cast<double>(E)) *
                        psi_minus_dot(t.modulation, t.ball.center());
  return {canonical_ball(Ball(std::move(center), -E)), std::move(modulation), coeff};
}

inline ModulatedSBFn fourier(const ModulatedSBFn& g, FourierSign sign) {
  ModulatedSBFn out(g.dim(), g.prime());
  for (const auto& t : g.terms()) out.add(fourier_term(t, sign));
  return out;
}

inline ModulatedSBFn as_modulated(const SchwartzBruhatFn& g) {
  ModulatedSBFn out(g.dim(), g.prime());
  for (const auto& t : g.terms()) out.add({t.ball, zero_vector(g.dim(), g.prime()), t.coeff});
  return out;
}

/// Forward (Psi(-[x, xi])) or inverse (Psi(+[x, xi])) transform of g.
inline ModulatedSBFn fourier_sb(const SchwartzBruhatFn& g, FourierSign sign = FourierSign::forward) {
  return fourier(as_modulated(g), sign);
}

/// Exact L^2 norm via pairwise ball intersections.
inline double l2_norm(const ModulatedSBFn& g) {
  const std::size_t n = g.dim();
  const double p = static_cast<double>(g.prime());
  Complex s = 0;
  for (const auto& a : g.terms()) {
    for (const auto& b : g.terms()) {
      const auto both = intersect(a.ball, b.ball);
      if (!both) continue;
      // Psi(-[a.mod - b.mod, xi]) integrated over the intersection
      const PadicVector db = a.modulation - b.modulation;
      if (min_valuation(db) < -both->radius_exp()) continue;
      s += a.coeff * std::conj(b.coeff) * psi_minus_dot(db, both->center()) *
           std::pow(p, -static_cast<double>(n) * static_cast<double>(both->radius_exp()));
    }
  }
  return std::sqrt(std::max(0.0, s.real()));
}

}  // namespace padic
