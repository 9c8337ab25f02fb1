#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "padic_dispersion/wave.hpp"

using namespace padic;

namespace {

PadicRational q(const std::string& s, std::uint64_t p) { return PadicRational::parse(s, p); }
PadicRational pw(std::int64_t k, std::uint64_t p) { return PadicRational::power_of_p(k, p); }

SolutionSpec unit_spec(std::uint64_t p, const char* phi) {
  SchwartzBruhatFn f0(1, p);
  f0.add(Ball::around_zero(1, 0, p), 1);
  return SolutionSpec::make(std::move(f0), parse_polynomial(phi));
}

PadicRational random_rational(std::mt19937_64& rng, std::uint64_t p, int d, int k) {
  return PadicRational::from_integer(rng() % checked_pow(p, d + k), p) * pw(-d, p);
}

RandomSBOptions small_data() {
  RandomSBOptions o;
  o.max_terms = 3;
  o.e_lo = -1;
  o.e_hi = 1;
  o.max_denominator_exp = 1;
  return o;
}

// u(x,t) by midpoint quadrature of Psi(t phi(xi) + x xi) (F f0)(xi) over xi = p^-e eta,
// eta mod p^M; F f0 is evaluated pointwise.
Complex quadrature_u(const SolutionSpec& s, const PadicRational& x, const PadicRational& t, std::int64_t M) {
  const std::uint64_t p = s.prime();
  Complex acc = 0;
  const std::uint64_t N = checked_pow(p, M);
  for (std::uint64_t k = 0; k < N; ++k) {
    const auto xi = PadicRational::from_integer(k, p) * pw(-s.freq_bound, p);
    const Complex F = s.spectrum({xi});
    if (F == Complex(0)) continue;
    PadicRational ph = x * xi;
    for (const auto& [alpha, c] : s.phi.terms()) {
      PadicRational mono = PadicRational::from_integer(c, p);
      for (std::uint32_t j = 0; j < alpha[0]; ++j) mono *= xi;
      ph += t * mono;
    }
    acc += F * character(ph).value();
  }
  return acc * std::pow(static_cast<double>(p), static_cast<double>(s.freq_bound - M));
}

}  // namespace

TEST(SolutionSpec, Bounds) {
  const auto s = unit_spec(3, "x^2");
  EXPECT_EQ(s.freq_bound, 0);
  EXPECT_EQ(s.phase_bound, 0);
  SchwartzBruhatFn f0(1, 3);
  f0.add(Ball::around_zero(1, 2, 3), 1);  // spectrum ||xi|| <= 9
  const auto s2 = SolutionSpec::make(f0, parse_polynomial("3*x^3 + x"));
  EXPECT_EQ(s2.freq_bound, 2);
  EXPECT_EQ(s2.phase_bound, 5);
  EXPECT_THROW(SolutionSpec::make(f0, parse_polynomial("x^2 + 1")), InvalidInput);
  EXPECT_THROW(SolutionSpec::make(SchwartzBruhatFn(1, 3), parse_polynomial("x^2")), InvalidInput);
  EXPECT_THROW(SolutionSpec::make(f0, parse_polynomial("x1^2 + x2^2")), InvalidInput);
}

TEST(SolveU, Examples) {
  const auto s = unit_spec(3, "x^2");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto x = random_rational(rng, 3, 0, 4);
    const auto t = random_rational(rng, 3, 0, 4);
    EXPECT_EQ(solve_u(s, {x}, t), Complex(1, 0));
  }
  for (std::int64_t m = 1; m <= 5; ++m) {
    EXPECT_NEAR(std::abs(solve_u(s, {PadicRational(3)}, pw(-m, 3))), std::pow(3.0, -m / 2.0), 1e-12);
    EXPECT_NEAR(std::abs(solve_u(s, {PadicRational(3)}, q("2", 3) * pw(-m, 3))), std::pow(3.0, -m / 2.0), 1e-12);
  }
  for (const char* x : {"1/3", "2/3", "5/3"}) {
    EXPECT_EQ(solve_u(s, {q(x, 3)}, q("4", 3)), Complex(0, 0));
  }
}

TEST(SolveU, InitialCondition) {
  std::mt19937_64 rng(100);
  for (std::uint64_t p : {2, 3, 5}) {
    for (std::size_t n : {1, 2}) {
      const auto f0 = random_schwartz_bruhat(p, n, {}, rng);
      SparsePolynomial phi(n);
      for (std::size_t i = 0; i < n; ++i) {
        Exponent e(n, 0);
        e[i] = 2;
        phi.add_term(e, 1);
      }
      const auto s = SolutionSpec::make(f0, phi);
      // half the points at ball centers, where f0 is nonzero
      for (int k = 0; k < 100; ++k) {
        PadicVector x;
        if (k % 2 == 0) {
          x = f0.terms()[k % f0.terms().size()].ball.center();
          for (auto& c : x) c += PadicRational::from_integer(p * p * p * (rng() % 9), p);
        } else {
          for (std::size_t i = 0; i < n; ++i) x.push_back(random_rational(rng, p, 3, 3));
        }
        EXPECT_NEAR(std::abs(solve_u(s, x, PadicRational(p)) - f0(x)), 0, 1e-12);
      }
    }
  }
}

TEST(SolveU, MatchesQuadrature) {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {2, 3}) {
    for (const char* phi : {"x^2", "x^3", "2*x^2 + x^3"}) {
      const auto s = SolutionSpec::make(random_schwartz_bruhat(p, 1, small_data(), rng), parse_polynomial(phi));
      for (int k = 0; k < 5; ++k) {
        const auto x = random_rational(rng, p, 2, 2);
        const auto t = random_rational(rng, p, 2, 2);
        EXPECT_NEAR(std::abs(solve_u(s, {x}, t) - quadrature_u(s, x, t, 9)), 0, 1e-10) << phi;
      }
    }
  }
}

TEST(SolveU, RefinementStable) {
  std::mt19937_64 rng(8);
  EngineOptions fine;
  fine.extra_levels = 1;
  for (int k = 0; k < 20; ++k) {
    const auto s = SolutionSpec::make(random_schwartz_bruhat(3, 1, small_data(), rng), parse_polynomial("x^3 + x^2"));
    const auto x = random_rational(rng, 3, 2, 2);
    const auto t = random_rational(rng, 3, 3, 1);
    EXPECT_NEAR(std::abs(solve_u(s, {x}, t) - solve_u(s, {x}, t, fine)), 0, 1e-12);
  }
}

TEST(SolveU, LocalConstancy) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t p = k % 2 ? 2 : 3;
    const auto s = SolutionSpec::make(random_schwartz_bruhat(p, 1, small_data(), rng), parse_polynomial("x^2"));
    const auto x = random_rational(rng, p, 2, 1);
    const auto t = random_rational(rng, p, 2, 1);
    const Complex u = solve_u(s, {x}, t);
    for (std::uint64_t j = 0; j < p * p; ++j) {
      const auto h = PadicRational::from_integer(j, p) * pw(s.freq_bound, p);
      const auto d = PadicRational::from_integer(j, p) * pw(s.phase_bound, p);
      EXPECT_NEAR(std::abs(solve_u(s, {x + h}, t) - u), 0, 1e-12);
      EXPECT_NEAR(std::abs(solve_u(s, {x}, t + d) - u), 0, 1e-12);
    }
  }
}

TEST(WindowedSpectrum, Examples) {
  const auto s = unit_spec(3, "x^2");
  EXPECT_EQ(windowed_spectrum(s, {PadicRational(3)}, q("1/3", 3), 1), Complex(0));
  EXPECT_NEAR(std::abs(windowed_spectrum(s, {PadicRational(3)}, PadicRational(3), 0) - Complex(1)), 0, 1e-15);
  EXPECT_EQ(windowed_spectrum(s, {q("1/27", 3)}, PadicRational(3), 1), Complex(0));
  EXPECT_THROW(windowed_spectrum(s, {PadicRational(3)}, PadicRational(3), -1), InvalidInput);
}

TEST(WindowedSpectrum, VanishesOffHypersurface) {
  const auto s = unit_spec(3, "x^2");
  for (const char* xi : {"0", "1", "2", "1/3", "4/9"}) {
    for (const char* tau : {"1/3", "2/3", "1/9", "5/9", "1/27"}) {
      EXPECT_NEAR(std::abs(windowed_spectrum(s, {q(xi, 3)}, q(tau, 3), 1)), 0, 1e-12) << xi << " " << tau;
    }
  }
}

TEST(WindowedSpectrum, MatchesSpaceTimeSum) {
  // integral over ||x||, |t| <= p^R of u(x,t) Psi(-t tau - x xi): for integral (xi, tau)
  // the integrand is constant on Z_p-cosets of x and t
  std::mt19937_64 rng(11);
  const std::uint64_t p = 3;
  for (int k = 0; k < 6; ++k) {
    const auto s = unit_spec(p, k % 2 ? "x^2" : "x^3 + x^2");
    const std::int64_t R = 1 + k % 2;
    const auto xi = random_rational(rng, p, 0, 2);
    const auto tau = random_rational(rng, p, 0, 2);
    const std::uint64_t N = checked_pow(p, R);
    Complex direct = 0;
    for (std::uint64_t a = 0; a < N; ++a) {
      for (std::uint64_t b = 0; b < N; ++b) {
        const auto x = PadicRational::from_integer(a, p) * pw(-R, p);
        const auto t = PadicRational::from_integer(b, p) * pw(-R, p);
        direct += solve_u(s, {x}, t) * character(-(t * tau) - x * xi).value();
      }
    }
    EXPECT_NEAR(std::abs(windowed_spectrum(s, {xi}, tau, R) - direct), 0, 1e-10);
  }
}

TEST(SolutionGrid, SlicesMatchSolveU) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 8; ++k) {
    const std::uint64_t p = k % 2 ? 2 : 3;
    const std::size_t n = k < 6 ? 1 : 2;
    const auto phi = n == 1 ? parse_polynomial(k % 3 ? "x^2" : "x^3 + 2*x^2") : parse_polynomial("x1^2 + x2^2");
    const auto s = SolutionSpec::make(random_schwartz_bruhat(p, n, small_data(), rng), phi);
    const SolutionGrid grid(s, 2);
    for (std::uint64_t tau = 0; tau < grid.time_cells(); tau += 1 + rng() % 3) {
      const auto u = grid.slice(tau);
      for (std::uint64_t j = 0; j < u.size(); j += 1 + rng() % 2) {
        EXPECT_NEAR(std::abs(u[j] - solve_u(s, grid.point_of(j), grid.time_of(tau))), 0, 1e-11);
      }
    }
  }
}

TEST(Strichartz, Examples) {
  const auto s = unit_spec(3, "x^2");
  EXPECT_NEAR(strichartz_truncated(s, 6, 0), 1, 1e-14);
  const auto norms = truncated_norms(s, 6, 4);
  for (std::size_t r = 1; r < norms.size(); ++r) EXPECT_GE(norms[r], norms[r - 1]);

  SchwartzBruhatFn f0(1, 3);
  f0.add(Ball::around_zero(1, 0, 3), {0, -3});
  const auto scaled = SolutionSpec::make(f0, parse_polynomial("x^2"));
  EXPECT_NEAR(strichartz_truncated(scaled, 6, 3), 3 * norms[3], 1e-12);
  EXPECT_NEAR(strichartz_truncated(s, kInfinity, 3), 1, 1e-14);
  EXPECT_THROW(strichartz_truncated(s, 0.5, 1), InvalidInput);
}

TEST(Strichartz, MatchesBruteForce) {
  // sum of |u|^sigma over all constancy cells, with u from the histogram engine
  std::mt19937_64 rng(13);
  for (int k = 0; k < 4; ++k) {
    const std::uint64_t p = k % 2 ? 2 : 3;
    const auto s = SolutionSpec::make(random_schwartz_bruhat(p, 1, small_data(), rng), parse_polynomial("x^2"));
    const double sigma = 4 + k;
    for (std::int64_t R = 0; R <= 2; ++R) {
      const std::int64_t cx = std::max(s.freq_bound, -R), ct = std::max(s.phase_bound, -R);
      const std::uint64_t nx = checked_pow(p, R + cx), nt = checked_pow(p, R + ct);
      double acc = 0;
      for (std::uint64_t a = 0; a < nx; ++a) {
        for (std::uint64_t b = 0; b < nt; ++b) {
          const auto x = PadicRational::from_integer(a, p) * pw(-R, p);
          const auto t = PadicRational::from_integer(b, p) * pw(-R, p);
          acc += std::pow(std::abs(solve_u(s, {x}, t)), sigma);
        }
      }
      acc *= std::pow(static_cast<double>(p), static_cast<double>(-cx - ct));
      EXPECT_NEAR(strichartz_truncated(s, sigma, R), std::pow(acc, 1 / sigma), 1e-10) << "R=" << R;
    }
  }
}

TEST(Strichartz, ReportConvergesAndDiverges) {
  const auto quad = strichartz_report(unit_spec(3, "x^2"), 6, 5);
  EXPECT_TRUE(quad.monotone_increments);
  EXPECT_FALSE(quad.diverging);
  EXPECT_EQ(quad.rows.size(), 6u);
  EXPECT_FALSE(quad.rows[0].increment);
  EXPECT_NEAR(quad.f0_l2, 1, 1e-15);

  const auto cubic = strichartz_report(unit_spec(5, "x^3"), 8, 4);
  EXPECT_TRUE(cubic.monotone_increments);
  EXPECT_FALSE(cubic.diverging);

  const auto low = strichartz_report(unit_spec(3, "x^2"), 2, 5);
  EXPECT_TRUE(low.diverging);
}

TEST(Strichartz, ThreadCountInvariant) {
  std::mt19937_64 rng(14);
  const auto s = SolutionSpec::make(random_schwartz_bruhat(3, 1, small_data(), rng), parse_polynomial("x^2"));
  EngineOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = truncated_norms(s, 6, 3, one);
  const auto b = truncated_norms(s, 6, 3, four);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(L2Norm, Examples) {
  SchwartzBruhatFn a(1, 5);
  a.add(Ball::around_zero(1, 0, 5), 1);
  EXPECT_DOUBLE_EQ(l2_norm(a), 1);
  SchwartzBruhatFn b(1, 3);
  b.add(Ball::around_zero(1, 1, 3), 2);
  EXPECT_NEAR(l2_norm(b), 2 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(l2_norm(fourier_sb(b)), l2_norm(b), 1e-12);
}
