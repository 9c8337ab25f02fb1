#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padic_dispersion/exp_sums.hpp"
#include "padic_dispersion/newton.hpp"
#include "padic_dispersion/surface.hpp"
#include "padic_dispersion/wave.hpp"

namespace padic::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kResource = 3, kCertificate = 4 };

inline const std::vector<std::string> kCommands = {"newton", "expsum", "surface", "solve", "strichartz"};

struct IntRange {
  std::int64_t lo;
  std::int64_t hi;
  bool operator==(const IntRange&) const = default;
};

/// "A..B" with A <= B.
inline IntRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InvalidInput("range '" + text + "' must look like A..B");
  IntRange r{};
  try {
    std::size_t used = 0;
    r.lo = std::stoll(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument("lo");
    const std::string hi = text.substr(dots + 2);
    r.hi = std::stoll(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("hi");
  } catch (const std::logic_error&) {
    throw InvalidInput("range '" + text + "' must look like A..B with integers A, B");
  }
  if (r.hi < r.lo) throw InvalidInput("range '" + text + "' is empty");
  return r;
}

inline std::string to_string(const IntRange& r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); }

struct JobConfig {
  std::string command;
  std::uint64_t prime = 0;
  std::optional<std::string> poly;
  std::optional<std::string> phi;
  std::optional<std::string> f0;
  std::optional<std::string> ball;
  std::optional<std::string> direction;
  std::optional<IntRange> m;
  std::optional<IntRange> k;
  std::optional<std::int64_t> rmax;
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<std::uint64_t> seed;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::optional<unsigned> threads;
  std::string format = "json";
  std::optional<std::string> out;
  bool require_certificate = false;

  bool operator==(const JobConfig&) const = default;
};

struct HelpRequested {
  std::string text;
};

inline void validate(const JobConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw InvalidInput("unknown command '" + c.command + "'");
  }
  if (c.prime < 2 || !is_prime(c.prime)) throw InvalidInput("--prime must be a prime >= 2, got " + std::to_string(c.prime));
  if (c.cap == 0) throw InvalidInput("--cap must be positive");
  if (c.threads && *c.threads == 0) throw InvalidInput("--threads must be positive");
  if (c.format != "json" && c.format != "csv") throw InvalidInput("--format must be json or csv");
  if (c.sigma && !(*c.sigma >= 1)) throw InvalidInput("--sigma must be >= 1");
  if (c.rho && !(*c.rho >= 1)) throw InvalidInput("--rho must be >= 1");
  if (c.rmax && *c.rmax < 0) throw InvalidInput("--rmax must be >= 0");
  if (c.m && c.m->lo < 1) throw InvalidInput("--m range must start at 1 or later");
  auto need = [&](const auto& field, const char* flag) {
    if (!field) throw InvalidInput("'" + c.command + "' requires " + flag);
  };
  if (c.command == "newton" || c.command == "expsum") need(c.poly, "--poly");
  if (c.command == "surface" || c.command == "solve" || c.command == "strichartz") need(c.phi, "--phi");
  if (c.command == "solve" || c.command == "strichartz") need(c.f0, "--f0");
  if (c.command == "strichartz") need(c.sigma, "--sigma");
  if (c.command == "surface" && c.rho) need(c.seed, "--seed (random test functions for --rho)");
}

inline JobConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Exact p-adic oscillatory integrals, surface measures and dispersive estimates", "padic-dispersion"};
  JobConfig c;
  std::string m, k, sigma, rho, ball, direction, poly, phi, f0, out;
  std::int64_t rmax = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("command", c.command, "newton | expsum | surface | solve | strichartz")->required();
  app.add_option("--prime", c.prime, "prime p")->required();
  auto* o_poly = app.add_option("--poly", poly, "polynomial f, e.g. \"x1^2 + x2^3\"");
  auto* o_phi = app.add_option("--phi", phi, "symbol / graph function phi");
  auto* o_f0 = app.add_option("--f0", f0, "initial datum: \"ball c_1 .. c_n e [coeff]; ...\"");
  auto* o_ball = app.add_option("--ball", ball, "domain ball A or window S: \"ball c_1 .. c_n e\"");
  auto* o_dir = app.add_option("--direction", direction, "ray direction of norm 1, comma separated");
  auto* o_m = app.add_option("--m", m, "m range A..B");
  auto* o_k = app.add_option("--k", k, "k range A..B");
  auto* o_rmax = app.add_option("--rmax", rmax, "window exponent R (max R for strichartz)");
  auto* o_sigma = app.add_option("--sigma", sigma, "L^sigma exponent (inf allowed)");
  auto* o_rho = app.add_option("--rho", rho, "L^rho exponent for restriction ratios");
  auto* o_seed = app.add_option("--seed", seed, "seed for random test functions");
  app.add_option("--cap", c.cap, "enumeration cap");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (default PADIC_THREADS or hardware)");
  app.add_option("--format", c.format, "json | csv");
  auto* o_out = app.add_option("--out", out, "output path (default stdout)");
  app.add_flag("--require-certificate", c.require_certificate, "exit 4 unless the stationary certificate verifies");

  std::vector<std::string> storage{"padic-dispersion"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw InvalidInput(e.what());
  }
  if (*o_poly) c.poly = poly;
  if (*o_phi) c.phi = phi;
  if (*o_f0) c.f0 = f0;
  if (*o_ball) c.ball = ball;
  if (*o_dir) c.direction = direction;
  if (*o_m) c.m = parse_range(m);
  if (*o_k) c.k = parse_range(k);
  if (*o_rmax) c.rmax = rmax;
  if (*o_sigma) c.sigma = parse_double(sigma);
  if (*o_rho) c.rho = parse_double(rho);
  if (*o_seed) c.seed = seed;
  if (*o_threads) c.threads = threads;
  if (*o_out) c.out = out;
  validate(c);
  return c;
}

/// Inverse of parse_args: parse_args(to_args(c)) == c for every valid c.
inline std::vector<std::string> to_args(const JobConfig& c) {
  std::vector<std::string> a{c.command, "--prime=" + std::to_string(c.prime)};
  auto opt = [&](const char* flag, const std::optional<std::string>& v) {
    if (v) a.push_back(std::string(flag) + "=" + *v);
  };
  opt("--poly", c.poly);
  opt("--phi", c.phi);
  opt("--f0", c.f0);
  opt("--ball", c.ball);
  opt("--direction", c.direction);
  if (c.m) a.push_back("--m=" + to_string(*c.m));
  if (c.k) a.push_back("--k=" + to_string(*c.k));
  if (c.rmax) a.push_back("--rmax=" + std::to_string(*c.rmax));
  if (c.sigma) a.push_back("--sigma=" + format_double(*c.sigma));
  if (c.rho) a.push_back("--rho=" + format_double(*c.rho));
  if (c.seed) a.push_back("--seed=" + std::to_string(*c.seed));
  a.push_back("--cap=" + std::to_string(c.cap));
  if (c.threads) a.push_back("--threads=" + std::to_string(*c.threads));
  a.push_back("--format=" + c.format);
  opt("--out", c.out);
  if (c.require_certificate) a.push_back("--require-certificate");
  return a;
}

// ---------------------------------------------------------------------------
// Serialization

/// Always "num/den", integers included.
inline std::string fraction(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}
inline std::string fraction(const PadicRational& x) { return fraction(x.to_rational()); }

inline Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Json vector_json(const PadicVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(fraction(x));
  return a;
}

/// The configuration minus the fields that must not influence output bytes.
inline Json config_json(const JobConfig& c) {
  Json j;
  j["command"] = c.command;
  j["prime"] = c.prime;
  auto opt = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  opt("poly", c.poly);
  opt("phi", c.phi);
  opt("f0", c.f0);
  opt("ball", c.ball);
  opt("direction", c.direction);
  if (c.m) j["m"] = to_string(*c.m);
  if (c.k) j["k"] = to_string(*c.k);
  opt("rmax", c.rmax);
  if (c.sigma) j["sigma"] = format_double(*c.sigma);
  if (c.rho) j["rho"] = format_double(*c.rho);
  opt("seed", c.seed);
  j["cap"] = c.cap;
  j["require_certificate"] = c.require_certificate;
  return j;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline std::string emit_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_cell(cells[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

struct Output {
  Json result = Json::object();
  Table table;
  /// set when --require-certificate was given and the certificate did not verify
  std::optional<std::string> certificate_failure;
};

// ---------------------------------------------------------------------------
// Commands

inline EngineOptions engine_options(const JobConfig& c) {
  EngineOptions o;
  o.cap = c.cap;
  o.threads = c.threads ? *c.threads : default_threads();
  return o;
}

inline Ball single_ball(const std::string& text, std::uint64_t p, std::size_t n) {
  const auto g = parse_ball_list(text, p, n);
  if (g.terms().size() != 1) throw InvalidInput("expected exactly one ball, got " + std::to_string(g.terms().size()));
  return g.terms()[0].ball;
}

inline PadicVector parse_direction(const std::string& text, std::uint64_t p, std::size_t n) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  PadicVector v;
  for (std::string w; in >> w;) v.push_back(PadicRational::parse(w, p));
  if (v.size() != n) throw InvalidInput("direction needs " + std::to_string(n) + " components");
  return v;
}

inline Json int_vector_json(const std::vector<std::int64_t>& v) { return Json(v); }
inline Json exponent_json(const Exponent& e) { return Json(std::vector<std::int64_t>(e.begin(), e.end())); }

inline Output run_newton(const JobConfig& c) {
  const auto f = parse_polynomial(*c.poly);
  const auto P = newton_facets(f);
  Output o;
  o.table.header = {"normal", "support_value", "weight", "ratio"};
  Json facets = Json::array();
  for (const auto& fc : P.facets) {
    Json pts = Json::array();
    for (const auto& l : fc.points) pts.push_back(exponent_json(l));
    facets.push_back(
        {{"normal", int_vector_json(fc.normal)}, {"support_value", fc.support_value}, {"weight", fc.weight}, {"points", pts}});
    std::string normal;
    for (std::size_t i = 0; i < fc.normal.size(); ++i) normal += (i ? " " : "") + std::to_string(fc.normal[i]);
    o.table.rows.push_back({normal, std::to_string(fc.support_value), std::to_string(fc.weight),
                            fc.support_value ? fraction(Rational(fc.weight, fc.support_value)) : ""});
  }
  const auto bt = beta_and_t0(P);
  o.result["nvars"] = f.nvars();
  o.result["facets"] = facets;
  o.result["beta"] = fraction(bt.beta);
  Json t0 = Json::array();
  for (const auto& x : bt.t0) t0.push_back(fraction(x));
  o.result["t0"] = t0;
  if (const auto w = quasi_homogeneous_detect(f)) {
    std::int64_t s = 0;
    for (auto a : w->alpha) s += a;
    o.result["quasi_homogeneous"] = {
        {"alpha", int_vector_json(w->alpha)}, {"degree", w->degree}, {"beta", fraction(Rational(s, w->degree))}};
  } else {
    o.result["quasi_homogeneous"] = nullptr;
  }
  o.result["nondegeneracy_mod_p"] = to_string(nondegeneracy_mod_p(f, c.prime, c.cap));
  return o;
}

inline Output run_expsum(const JobConfig& c) {
  const auto f = parse_polynomial(*c.poly);
  const std::uint64_t p = c.prime;
  const std::size_t n = f.nvars();
  const Ball A = c.ball ? single_ball(*c.ball, p, n) : Ball::around_zero(n, 0, p);
  const IntRange m = c.m.value_or(IntRange{1, 6});
  const auto eng = engine_options(c);
  Output o;

  Json rows = Json::array();
  std::vector<DecaySample> samples;
  std::vector<Complex> values;
  for (std::int64_t k = m.lo; k <= m.hi; ++k) {
    const auto e = exp_sum(f, k, A, eng);
    values.push_back(e.value());
    samples.push_back({k, e.abs()});
    rows.push_back({{"m", k}, {"value", complex_json(e.value())}, {"abs", e.abs()}, {"exact_zero", e.is_exact_zero()}});
  }
  const auto fit = fit_decay(samples, p);
  o.result["ball"] = A.to_string();
  o.result["sums"] = rows;

  Json decay;
  decay["slope"] = fit.slope;
  decay["intercept"] = fit.intercept;
  decay["residual"] = fit.residual;
  decay["super_polynomial"] = fit.super_polynomial;
  // a constant term only rotates E, so the exponent is that of f - f(0)
  const auto f1 = f.without_constant();
  const auto beta = beta_and_t0(newton_facets(f1)).beta;
  const bool qh = quasi_homogeneous_detect(f1).has_value();
  const DecayOptions dopts;
  const double tol = qh ? dopts.qh_tolerance : dopts.epsilon_margin;
  const double b = beta.convert_to<double>();
  decay["beta"] = fraction(beta);
  decay["quasi_homogeneous"] = qh;
  decay["tolerance"] = tol;
  decay["consistent"] =
      fit.super_polynomial || (qh ? std::abs(fit.slope - b) <= tol : fit.slope >= b - tol);
  o.result["decay"] = decay;

  try {
    const auto h = residue_histogram(f, m.lo, A, eng);
    Json counts = Json::array();
    h.for_each([&](std::uint64_t r, std::uint64_t cnt) { counts.push_back({r, cnt}); });
    o.result["histogram"] = {{"m", m.lo}, {"modulus", h.modulus()}, {"counts", counts}};
  } catch (const InvalidInput&) {
    // non-integral ball or m below its radius exponent
    o.result["histogram"] = nullptr;
  }

  Json cert;
  try {
    StationaryOptions so;
    so.engine = eng;
    const auto sc = stationary_certificate(f, A, so);
    cert["status"] = sc.verified ? "verified" : "failed";
    cert["I"] = sc.I;
    cert["threshold_exp"] = sc.threshold_exp;
    Json checks = Json::array();
    for (const auto& [mm, e] : sc.checks) {
      checks.push_back({{"m", mm}, {"value", complex_json(e.value())}, {"exact_zero", e.is_exact_zero()}});
    }
    cert["checks"] = checks;
    if (!sc.verified) o.certificate_failure = "stationary certificate failed verification";
  } catch (const Indeterminate& e) {
    cert["status"] = "indeterminate";
    cert["reason"] = e.what();
    o.certificate_failure = e.what();
  } catch (const CertificateUnavailable& e) {
    cert["status"] = "unavailable";
    cert["reason"] = e.what();
    o.certificate_failure = e.what();
  } catch (const ResourceLimit&) {
    throw;
  } catch (const InvalidInput& e) {
    cert["status"] = "unavailable";
    cert["reason"] = e.what();
    o.certificate_failure = e.what();
  }
  o.result["certificate"] = cert;

  o.table.header = {"m", "abs_value", "re", "im", "fitted_slope"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    o.table.rows.push_back({std::to_string(samples[i].m), format_double(samples[i].abs), format_double(values[i].real()),
                            format_double(values[i].imag()), format_double(fit.slope)});
  }
  return o;
}

inline Output run_surface(const JobConfig& c) {
  const std::uint64_t p = c.prime;
  const auto phi = parse_polynomial(*c.phi);
  const std::size_t n = phi.nvars() + 1;
  const Ball window = c.ball ? single_ball(*c.ball, p, n) : Ball::around_zero(n, 0, p);
  const GraphHypersurface Y(phi, window);
  PadicVector dir = zero_vector(n, p);
  dir.back() = PadicRational::from_integer(1, p);
  if (c.direction) dir = parse_direction(*c.direction, p, n);
  const IntRange k = c.k.value_or(IntRange{1, 6});
  const auto eng = engine_options(c);
  Output o;

  const auto t = decay_table(Y, dir, k.lo, k.hi, std::nullopt, eng);
  Json rows = Json::array();
  o.table.header = {"k", "abs_value", "fitted_slope"};
  for (const auto& r : t.rows) {
    rows.push_back({{"k", r.k}, {"norm", fraction(r.norm)}, {"abs", r.abs}});
    o.table.rows.push_back({std::to_string(r.k), format_double(r.abs), format_double(t.fit.slope)});
  }
  o.result["window"] = window.to_string();
  o.result["direction"] = vector_json(dir);
  o.result["decay"] = {{"rows", rows},
                       {"slope", t.fit.slope},
                       {"residual", t.fit.residual},
                       {"super_polynomial", t.fit.super_polynomial},
                       {"family_exponent", t.family_exponent ? Json(fraction(*t.family_exponent)) : Json(nullptr)},
                       {"max_degree", fraction(t.max_degree)},
                       {"inverse_max_degree", fraction(t.inverse_max_degree)},
                       {"consistent", t.consistent}};

  // closed form against the shell sum
  double max_diff = 0, zeta0_dev = 0;
  std::size_t points = 0;
  for (int i = 1; i <= 20; ++i) {
    const Complex z(0.1 * i, 0.37 * (i % 7) - 1.1);
    for (std::int64_t v : {std::int64_t{1}, std::int64_t{0}, std::int64_t{-1}, std::int64_t{-2}}) {
      const auto x = PadicRational::power_of_p(v, p);
      max_diff = std::max(max_diff, std::abs(zeta_kernel(z, x, 1) - zeta_kernel(z, x, 1, ZetaMode::shell_sum)));
      zeta0_dev = std::max(zeta0_dev, std::abs(zeta_kernel(0, x, 1) - Complex(1)));
      ++points;
    }
  }
  o.result["zeta_check"] = {{"points", points}, {"max_abs_diff", max_diff}, {"zeta0_max_dev", zeta0_dev}};

  if (c.rho) {
    const Rational beta = t.family_exponent.value_or(t.inverse_max_degree);
    std::mt19937_64 rng(*c.seed);
    Json ratios = Json::array();
    double sup = 0;
    bool admissible = true;
    for (int i = 0; i < 50; ++i) {
      const auto g = random_schwartz_bruhat(p, n, {}, rng);
      const auto r = restriction_ratio(g, Y, *c.rho, beta, eng);
      admissible = r.admissible;
      ratios.push_back(r.ratio);
      sup = std::max(sup, r.ratio);
    }
    o.result["restriction"] = {{"rho", format_double(*c.rho)},
                               {"beta", fraction(beta)},
                               {"rho_bound", fraction(restriction_exponent_bound(beta))},
                               {"admissible", admissible},
                               {"samples", ratios.size()},
                               {"sup_ratio", sup},
                               {"ratios", ratios}};
  }
  return o;
}

inline SolutionSpec solution_spec(const JobConfig& c) {
  const auto phi = parse_polynomial(*c.phi);
  return SolutionSpec::make(parse_ball_list(*c.f0, c.prime, phi.nvars()), phi);
}

inline Output run_solve(const JobConfig& c) {
  const std::uint64_t p = c.prime;
  const auto spec = solution_spec(c);
  const std::size_t n = spec.dim();
  const std::int64_t R = c.rmax.value_or(1);
  const auto eng = engine_options(c);
  Output o;
  o.table.header = {"kind", "a", "b", "re", "im", "abs"};

  // x = a p^-R e_1, t = b p^-R
  const std::uint64_t side = std::min<std::uint64_t>(checked_pow(p, R), 16);
  Json samples = Json::array();
  for (std::uint64_t a = 0; a < side; ++a) {
    for (std::uint64_t b = 0; b < side; ++b) {
      PadicVector x = zero_vector(n, p);
      x[0] = PadicRational::from_integer(a, p) * PadicRational::power_of_p(-R, p);
      const auto t = PadicRational::from_integer(b, p) * PadicRational::power_of_p(-R, p);
      const Complex u = solve_u(spec, x, t, eng);
      samples.push_back({{"x", vector_json(x)}, {"t", fraction(t)}, {"u", complex_json(u)}});
      o.table.rows.push_back({"u", fraction(x[0]), fraction(t), format_double(u.real()), format_double(u.imag()),
                              format_double(std::abs(u))});
    }
  }
  // xi = j/p e_1, tau = l/p
  Json grid = Json::array();
  for (std::uint64_t j = 0; j < 5; ++j) {
    for (std::uint64_t l = 0; l < 5; ++l) {
      PadicVector xi = zero_vector(n, p);
      xi[0] = PadicRational::from_fraction(j, p, p);
      const auto tau = PadicRational::from_fraction(l, p, p);
      const Complex w = windowed_spectrum(spec, xi, tau, R, eng);
      grid.push_back({{"xi", vector_json(xi)}, {"tau", fraction(tau)}, {"W", complex_json(w)}});
      o.table.rows.push_back({"W", fraction(xi[0]), fraction(tau), format_double(w.real()), format_double(w.imag()),
                              format_double(std::abs(w))});
    }
  }
  o.result["freq_bound"] = spec.freq_bound;
  o.result["phase_bound"] = spec.phase_bound;
  o.result["R"] = R;
  o.result["u_samples"] = samples;
  o.result["windowed_spectrum"] = grid;
  return o;
}

inline Output run_strichartz(const JobConfig& c) {
  const auto spec = solution_spec(c);
  const std::int64_t R = c.rmax.value_or(4);
  const auto rep = strichartz_report(spec, *c.sigma, R, engine_options(c));
  Output o;
  o.table.header = {"R", "norm", "ratio", "increment"};
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"R", r.R}, {"norm", r.norm}, {"ratio", r.ratio}, {"increment", r.increment ? Json(*r.increment) : Json(nullptr)}});
    o.table.rows.push_back(
        {std::to_string(r.R), format_double(r.norm), format_double(r.ratio), r.increment ? format_double(*r.increment) : ""});
  }
  o.result["freq_bound"] = spec.freq_bound;
  o.result["phase_bound"] = spec.phase_bound;
  o.result["f0_l2"] = rep.f0_l2;
  o.result["rows"] = rows;
  o.result["monotone_increments"] = rep.monotone_increments;
  o.result["diverging"] = rep.diverging;
  o.result["constant"] = rep.constant;
  return o;
}

inline Output execute(const JobConfig& c) {
  if (c.command == "newton") return run_newton(c);
  if (c.command == "expsum") return run_expsum(c);
  if (c.command == "surface") return run_surface(c);
  if (c.command == "solve") return run_solve(c);
  return run_strichartz(c);
}

inline std::string emit(const JobConfig& c, const Output& o) {
  if (c.format == "csv") return emit_csv(o.table);
  Json doc;
  doc["command"] = c.command;
  doc["config"] = config_json(c);
  doc["result"] = o.result;
  return doc.dump(2) + "\n";
}

/// Runs a validated config; returns the exit code.
inline int run(const JobConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const Output o = execute(c);
    const std::string bytes = emit(c, o);
    if (c.out) {
      std::ofstream f(*c.out, std::ios::binary);
      if (!f || !(f << bytes) || !f.flush()) {
        err << "error: cannot write " << *c.out << "\n";
        return kFailure;
      }
    } else {
      out << bytes;
    }
    if (c.require_certificate && o.certificate_failure) {
      err << "certificate: " << *o.certificate_failure << "\n";
      return kCertificate;
    }
    return kOk;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const CertificateUnavailable& e) {
    err << "certificate: " << e.what() << "\n";
    return kCertificate;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

inline int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  JobConfig c;
  try {
    c = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return run(c, out, err);
}

}  // namespace padic::cli
