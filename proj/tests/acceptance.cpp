// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "padic_dispersion.hpp"

using namespace padic;

namespace {

// tolerances and pins
constexpr double kGaussTol = 1e-9;
constexpr double kGaussSeconds = 5;
constexpr double kDecayTol = 0.05;
constexpr double kDecaySeconds = 60;
constexpr double kVanishTol = 1e-9;
constexpr double kSlopeExactTol = 1e-9;
constexpr double kZetaTol = 1e-9;
constexpr double kFourierTol = 1e-12;
constexpr double kSolutionTol = 1e-12;
constexpr double kScaleTol = 1e-12;
constexpr double kUniformBound = 1.25;
constexpr std::int64_t kStrichartzRmax = 5;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

Ball zp(std::size_t n, std::uint64_t p) { return Ball::around_zero(n, 0, p); }

// 1 -------------------------------------------------------------------------
Verdict gauss_sums() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  const auto f = parse_polynomial("x^2");
  for (std::uint64_t p : {3, 5, 7}) {
    for (std::int64_t m = 1; m <= 6; ++m) {
      const double a = exp_sum(f, m, zp(1, p)).abs();
      worst = std::max(worst, std::abs(a - std::pow(static_cast<double>(p), -m / 2.0)));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= kGaussTol && t < kGaussSeconds, "max |err| " + fmt(worst) + ", " + fmt(t) + " s"};
}

// 2 -------------------------------------------------------------------------
// beta_f = min over non-negative integer a with m(a) > 0 of sigma(a) / m(a): every such
// a gives a supporting half-space of the polyhedron, and the facet through T0 attains it.
Rational beta_oracle(const SparsePolynomial& f, std::int64_t bound) {
  const std::size_t n = f.nvars();
  std::vector<Exponent> supp;
  for (const auto& [e, c] : f.terms()) supp.push_back(e);
  std::optional<Rational> best;
  std::vector<std::int64_t> a(n, 0);
  while (true) {
    std::size_t i = 0;
    while (i < n && ++a[i] > bound) a[i++] = 0;
    if (i == n) break;
    std::int64_t m = std::numeric_limits<std::int64_t>::max(), sigma = 0;
    for (auto x : a) sigma += x;
    for (const auto& l : supp) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a[j] * static_cast<std::int64_t>(l[j]);
      m = std::min(m, s);
    }
    if (m > 0) {
      const Rational r(sigma, m);
      if (!best || r < *best) best = r;
    }
  }
  return *best;
}

Verdict newton_exponents() {
  std::vector<std::pair<std::string, Rational>> cases = {{"x1^2 + x2^2", Rational(1)}, {"x1^2 + x2^3", Rational(5, 6)}};
  for (int d = 2; d <= 5; ++d) cases.push_back({"x^" + std::to_string(d), Rational(1, d)});
  bool ok = true;
  std::string bad;
  for (const auto& [text, expect] : cases) {
    const auto f = parse_polynomial(text);
    const auto got = beta_and_t0(newton_facets(f));
    const auto oracle = beta_oracle(f, 8);
    bool t0_ok = true;
    for (const auto& t : got.t0) t0_ok = t0_ok && t == 1 / got.beta;
    if (got.beta != expect || oracle != expect || !t0_ok) {
      ok = false;
      bad += " " + text;
    }
  }
  // quasi-homogeneous consistency on every detected witness
  std::size_t witnesses = 0;
  for (const char* text : {"x1^2 + x2^2", "x1^2 + x2^3", "x^2", "x^5", "x1^3 + x2^4", "x1^2 + x2^2 + x3^5", "x1*x2",
                           "x1^2*x2 + x2^3", "x1^4 + x2^6"}) {
    const auto f = parse_polynomial(text);
    const auto w = quasi_homogeneous_detect(f);
    if (!w) continue;
    ++witnesses;
    std::int64_t s = 0;
    for (auto a : w->alpha) s += a;
    if (beta_and_t0(newton_facets(f)).beta != Rational(s, w->degree)) {
      ok = false;
      bad += std::string(" qh:") + text;
    }
  }
  return {ok, std::to_string(cases.size()) + " exponents exact, " + std::to_string(witnesses) +
                  " quasi-homogeneous witnesses consistent" + (bad.empty() ? "" : "; mismatches:" + bad)};
}

// 3 -------------------------------------------------------------------------
Verdict decay_fits() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::uint64_t>> cases = {
      {"x^2", 3}, {"x^3", 7}, {"x1^2 + x2^2", 3}, {"x1^2 + x2^3", 5}};
  bool ok = true;
  std::string detail;
  for (const auto& [text, p] : cases) {
    const auto f = parse_polynomial(text);
    const auto r = decay_fit(f, zp(f.nvars(), p), 2, 6);
    const double err = std::abs(r.fit.slope - r.beta.convert_to<double>());
    ok = ok && !r.fit.super_polynomial && err <= kDecayTol;
    detail += (detail.empty() ? "" : ", ") + text + " " + fmt(r.fit.slope);
  }
  const double t = seconds_since(t0);
  ok = ok && t < kDecaySeconds;
  return {ok, "slopes " + detail + "; " + fmt(t) + " s"};
}

// 4 -------------------------------------------------------------------------
Verdict stationary_phase() {
  const std::vector<std::pair<std::string, Ball>> cases = {
      {"x^2 + x + 1", Ball({PadicRational(3)}, 1)}, {"x^2", Ball({PadicRational::from_integer(1, 3)}, 1)}};
  bool ok = true;
  double worst = 0;
  for (const auto& [text, A] : cases) {
    const auto f = parse_polynomial(text);
    const auto cert = stationary_certificate(f, A);
    ok = ok && cert.I == 0 && cert.threshold_exp == 1;
    for (std::int64_t m = 2; m <= 6; ++m) worst = std::max(worst, exp_sum(f, m, A).abs());
  }
  ok = ok && worst <= kVanishTol;
  return {ok, "I = 0 for both, max |E| over m = 2..6: " + fmt(worst)};
}

// 5 -------------------------------------------------------------------------
Verdict surface_decay() {
  auto vec = [](std::vector<std::int64_t> v, std::uint64_t p) {
    PadicVector out;
    for (auto x : v) out.push_back(PadicRational::from_integer(x, p));
    return out;
  };
  const auto a = decay_table(GraphHypersurface(parse_polynomial("x^2"), zp(2, 3)), vec({0, 1}, 3), 1, 6);
  const auto b = decay_table(GraphHypersurface(parse_polynomial("x^3"), zp(2, 7)), vec({0, 1}, 7), 1, 6);
  const auto c = decay_table(GraphHypersurface(parse_polynomial("x1^2 + x2^2"), zp(3, 3)), vec({0, 0, 1}, 3), 1, 6);
  const bool ok = std::abs(a.fit.slope - 0.5) <= kSlopeExactTol && std::abs(b.fit.slope - 1.0 / 3) <= kDecayTol &&
                  std::abs(c.fit.slope - 1.0) <= kDecayTol;
  return {ok, "slopes " + fmt(a.fit.slope) + ", " + fmt(b.fit.slope) + ", " + fmt(c.fit.slope)};
}

// 6 -------------------------------------------------------------------------
Verdict zeta_kernel_check() {
  double worst = 0, zeta0 = 0;
  std::size_t points = 0;
  for (std::uint64_t p : {2, 3, 5}) {
    for (std::int64_t e0 : {1, 2}) {
      for (int i = 1; i <= 20; ++i) {
        const Complex z(0.1 * i, 0.37 * (i % 7) - 1.1);
        for (std::int64_t v : {1, 0, -1, -2}) {
          const auto x = PadicRational::power_of_p(v, p);
          worst = std::max(worst, std::abs(zeta_kernel(z, x, e0) - zeta_kernel(z, x, e0, ZetaMode::shell_sum)));
          zeta0 = std::max(zeta0, std::abs(zeta_kernel(0, x, e0) - Complex(1)));
          ++points;
        }
      }
    }
  }
  const double branch = std::abs(zeta_kernel(1, PadicRational::from_fraction(1, 3, 3), 1) - Complex(1.0 / 3));
  const bool ok = worst <= kZetaTol && zeta0 <= kZetaTol && branch <= kZetaTol;
  return {ok, std::to_string(points) + " points, max |closed - shell| " + fmt(worst) + ", max |zeta_0 - 1| " +
                  fmt(zeta0) + ", q^-e0z branch err " + fmt(branch)};
}

// 7 -------------------------------------------------------------------------
Verdict fourier_identities() {
  std::mt19937_64 rng(7);
  double round_trip = 0, parseval = 0;
  for (std::uint64_t p : {2, 3, 5}) {
    for (int i = 0; i < 20; ++i) {
      const std::size_t n = 1 + i % 2;
      const auto g = random_schwartz_bruhat(p, n, {}, rng);
      const auto Fg = fourier_sb(g, FourierSign::forward);
      const auto back = fourier(Fg, FourierSign::inverse);
      parseval = std::max(parseval, std::abs(l2_norm(Fg) - l2_norm(g)) / l2_norm(g));
      std::vector<PadicVector> pts;
      for (const auto& t : g.terms()) pts.push_back(t.ball.center());
      for (int s = 0; s < 30; ++s) {
        PadicVector x;
        for (std::size_t k = 0; k < n; ++k) {
          x.push_back(PadicRational::from_integer(rng() % checked_pow(p, 6), p) * PadicRational::power_of_p(-3, p));
        }
        pts.push_back(x);
      }
      for (const auto& x : pts) round_trip = std::max(round_trip, std::abs(back(x) - g(x)));
    }
  }
  const bool ok = round_trip <= kFourierTol && parseval <= kFourierTol;
  return {ok, "60 functions, max round-trip err " + fmt(round_trip) + ", max Parseval rel err " + fmt(parseval)};
}

// 8 -------------------------------------------------------------------------
Verdict solution_correctness() {
  std::mt19937_64 rng(8);
  double init = 0;
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t p = k % 2 ? 2 : 3;
    const auto f0 = random_schwartz_bruhat(p, 1, {}, rng);
    const auto s = SolutionSpec::make(f0, parse_polynomial(k % 3 ? "x^2" : "x^3"));
    PadicVector x = k % 2 ? f0.terms()[0].ball.center() : PadicVector{};
    if (x.empty()) x.push_back(PadicRational::from_integer(rng() % 729, p) * PadicRational::power_of_p(-3, p));
    init = std::max(init, std::abs(solve_u(s, x, PadicRational(p)) - f0(x)));
  }
  SchwartzBruhatFn unit(1, 3);
  unit.add(zp(1, 3), 1);
  const auto s = SolutionSpec::make(unit, parse_polynomial("x^2"));
  double gauss = 0;
  for (std::int64_t m = 1; m <= 5; ++m) {
    const double a = std::abs(solve_u(s, {PadicRational(3)}, PadicRational::power_of_p(-m, 3)));
    gauss = std::max(gauss, std::abs(a - std::pow(3.0, -m / 2.0)));
  }
  double window = 0;
  for (const char* xi : {"0", "1", "2", "1/3", "4/9"}) {
    for (const char* tau : {"1/3", "2/3", "1/9", "5/9", "1/27"}) {
      window = std::max(window, std::abs(windowed_spectrum(s, {PadicRational::parse(xi, 3)},
                                                           PadicRational::parse(tau, 3), 1)));
    }
  }
  const bool ok = init <= kSolutionTol && gauss <= kSolutionTol && window <= kSolutionTol;
  return {ok, "u(x,0) err " + fmt(init) + ", |u(0,t)| err " + fmt(gauss) + ", off-surface |W| " + fmt(window)};
}

// 9 -------------------------------------------------------------------------
Verdict strichartz() {
  struct Case {
    std::uint64_t p;
    const char* phi;
    double sigma;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : {Case{3, "x^2", 6}, Case{5, "x^3", 8}}) {
    SchwartzBruhatFn unit(1, c.p);
    unit.add(zp(1, c.p), 1);
    const auto phi = parse_polynomial(c.phi);
    const auto base = strichartz_report(SolutionSpec::make(unit, phi), c.sigma, kStrichartzRmax);
    // increments norm(R+1)^sigma - norm(R)^sigma for R = 1..4
    bool mono = true;
    for (std::int64_t R = 2; R < kStrichartzRmax; ++R) {
      mono = mono && *base.rows[R + 1].increment <= *base.rows[R].increment;
    }
    const auto scaled = strichartz_report(SolutionSpec::make(unit.scaled({-2.5, 1.5}), phi), c.sigma, kStrichartzRmax);
    const double scale_err = std::abs(scaled.constant - base.constant) / base.constant;

    std::mt19937_64 rng(c.p * 1000 + 9);
    RandomSBOptions o;
    o.max_terms = 3;
    o.e_lo = 0;
    o.e_hi = 0;
    o.max_denominator_exp = 1;
    double sup = 0;
    for (int i = 0; i < 10; ++i) {
      const auto r = strichartz_report(SolutionSpec::make(random_schwartz_bruhat(c.p, 1, o, rng), phi), c.sigma,
                                       kStrichartzRmax);
      sup = std::max(sup, r.constant);
    }
    ok = ok && mono && !base.diverging && scale_err <= kScaleTol && sup <= kUniformBound;
    detail += std::string(c.phi) + " sigma " + fmt(c.sigma) + ": C " + fmt(base.constant) + ", increments " +
              (mono ? "non-increasing" : "NOT monotone") + ", scale err " + fmt(scale_err) + ", sup over 10 " +
              fmt(sup) + "; ";
  }
  SchwartzBruhatFn unit(1, 3);
  unit.add(zp(1, 3), 1);
  const bool flag = strichartz_report(SolutionSpec::make(unit, parse_polynomial("x^2")), 2, kStrichartzRmax).diverging;
  ok = ok && flag;
  return {ok, detail + "sigma 2 divergence flag " + (flag ? "set" : "NOT set")};
}

// 10 ------------------------------------------------------------------------
std::string capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return out + "\n<exit " + std::to_string(status) + ">";
}

Verdict determinism() {
  const std::string cli = PADIC_CLI_PATH;
  const std::vector<std::string> jobs = {
      "expsum --prime 3 --poly 'x^2' --m 1..6",
      "expsum --prime 5 --poly 'x^2' --m 1..6 --format csv",
      "expsum --prime 7 --poly 'x^2' --m 1..6",
      "newton --prime 3 --poly 'x1^2 + x2^2'",
      "newton --prime 5 --poly 'x1^2 + x2^3'",
      "newton --prime 3 --poly 'x^5'",
      "expsum --prime 7 --poly 'x^3' --m 2..6",
      "expsum --prime 3 --poly 'x1^2 + x2^2' --m 2..6 --format csv",
      "expsum --prime 5 --poly 'x1^2 + x2^3' --m 2..6",
      "expsum --prime 3 --poly 'x^2 + x + 1' --ball 'ball 0 1' --m 2..6 --require-certificate",
      "expsum --prime 3 --poly 'x^2' --ball 'ball 1 1' --m 2..6 --require-certificate",
      "surface --prime 3 --phi 'x^2' --k 1..6 --rho 1.2 --seed 50",
      "surface --prime 7 --phi 'x^3' --k 1..6 --format csv",
      "surface --prime 3 --phi 'x1^2 + x2^2' --k 1..6",
      "solve --prime 3 --phi 'x^2' --f0 'ball 0 0' --rmax 1",
      "solve --prime 3 --phi 'x^2' --f0 'ball 0 0; ball 1/3 1 (0.5,-1)' --rmax 2 --format csv",
      "strichartz --prime 3 --phi 'x^2' --sigma 6 --rmax 5 --f0 'ball 0 0'",
      "strichartz --prime 5 --phi 'x^3' --sigma 8 --rmax 5 --f0 'ball 0 0' --format csv",
      "strichartz --prime 3 --phi 'x^2' --sigma 2 --rmax 5 --f0 'ball 0 0'",
  };
  std::size_t same = 0;
  std::string bad;
  for (const auto& job : jobs) {
    const auto a = capture(cli + " " + job + " --threads 1 2>&1");
    const auto b = capture(cli + " " + job + " --threads 4 2>&1");
    const auto c = capture("PADIC_THREADS=3 " + cli + " " + job + " 2>&1");
    if (a == b && a == c && a.find("<exit 0>") != std::string::npos) {
      ++same;
    } else {
      bad += " [" + job + "]";
    }
  }
  return {same == jobs.size(),
          std::to_string(same) + "/" + std::to_string(jobs.size()) + " jobs byte-identical at 1, 4 and 3 (env) threads" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"gauss-sum exactness", gauss_sums},
      {"newton exponents", newton_exponents},
      {"decay fits", decay_fits},
      {"stationary phase", stationary_phase},
      {"surface decay", surface_decay},
      {"zeta kernel", zeta_kernel_check},
      {"fourier identities", fourier_identities},
      {"solution correctness", solution_correctness},
      {"strichartz truncated convergence", strichartz},
      {"cli determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
