#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "padic_dispersion/arithmetic.hpp"
#include "padic_dispersion/padic.hpp"

namespace padic {

using Exponent = std::vector<std::uint32_t>;

inline bool is_zero(const BigInt& c) { return c == 0; }

/**
 * Sparse multivariate polynomial: exponent vector -> nonzero coefficient.
 *
 * Terms are kept in a std::map so iteration order (and hence every printed or
 * hashed form) is canonical.
 */
template <class Coeff>
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Coeff>;

  explicit Polynomial(std::size_t nvars = 1) : nvars_(nvars) {
    if (nvars == 0) throw InvalidInput("polynomial needs at least one variable");
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  void add_term(const Exponent& e, const Coeff& c) {
    if (e.size() != nvars_) throw InvalidInput("exponent arity does not match polynomial");
    if (padic::is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (padic::is_zero(it->second)) terms_.erase(it);
  }

  bool has_constant_term() const { return terms_.count(Exponent(nvars_, 0)) != 0; }

  const Coeff* constant_term() const {
    auto it = terms_.find(Exponent(nvars_, 0));
    return it == terms_.end() ? nullptr : &it->second;
  }

  bool is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
      return std::all_of(t.first.begin(), t.first.end(), [](std::uint32_t k) { return k == 0; });
    });
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
      std::uint32_t s = 0;
      for (auto k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return d;
  }

  Polynomial without_constant() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (std::any_of(e.begin(), e.end(), [](std::uint32_t k) { return k != 0; })) r.terms_.emplace(e, c);
    }
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.nvars_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  Polynomial scaled(const Coeff& s) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw InvalidInput("polynomial arity mismatch");
  }

  std::size_t nvars_;
  TermMap terms_;
};

/// Integer-coefficient polynomial; the f of an exponential sum and the phi of a symbol.
using SparsePolynomial = Polynomial<BigInt>;
/// Polynomial with coefficients in the p-power-denominator subring of Q_p.
using PadicPolynomial = Polynomial<PadicRational>;

inline Exponent unit_exponent(std::size_t nvars, std::size_t var) {
  Exponent e(nvars, 0);
  e.at(var) = 1;
  return e;
}

inline SparsePolynomial partial_derivative(const SparsePolynomial& f, std::size_t var) {
  SparsePolynomial r(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e.at(var) == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

inline BigInt evaluate(const SparsePolynomial& f, const std::vector<BigInt>& x) {
  if (x.size() != f.nvars()) throw InvalidInput("point arity does not match polynomial");
  BigInt sum = 0;
  for (const auto& [e, c] : f.terms()) {
    BigInt t = c;
    for (std::size_t i = 0; i < e.size(); ++i) t *= boost::multiprecision::pow(x[i], e[i]);
    sum += t;
  }
  return sum;
}

/// f(x) reduced into [0, p^m).
inline std::uint64_t poly_eval_mod(const SparsePolynomial& f, const std::vector<BigInt>& x, std::uint64_t p,
                                   unsigned m) {
  if (m == 0) throw InvalidInput("poly_eval_mod needs level m >= 1");
  const std::uint64_t mod = checked_pow(p, m);
  if (x.size() != f.nvars()) throw InvalidInput("point arity does not match polynomial");
  std::uint64_t acc = 0;
  for (const auto& [e, c] : f.terms()) {
    std::uint64_t t = reduce_mod(c, mod);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::uint64_t xi = reduce_mod(x[i], mod);
      for (std::uint32_t k = 0; k < e[i]; ++k) t = mul_mod(t, xi, mod);
    }
    acc = add_mod(acc, t, mod);
  }
  return acc;
}

inline PadicPolynomial to_padic(const SparsePolynomial& f, std::uint64_t p) {
  PadicPolynomial r(f.nvars());
  for (const auto& [e, c] : f.terms()) r.add_term(e, PadicRational::from_integer(c, p));
  return r;
}

/// Minimum coefficient valuation over the given terms (kInfiniteValuation if none).
inline std::int64_t min_coefficient_valuation(const PadicPolynomial& f, bool skip_constant) {
  std::int64_t v = kInfiniteValuation;
  for (const auto& [e, c] : f.terms()) {
    if (skip_constant && std::all_of(e.begin(), e.end(), [](std::uint32_t k) { return k == 0; })) continue;
    v = std::min(v, c.valuation());
  }
  return v;
}

/**
 * g(y) = f(center + p^e y), expanded.
 *
 * Each factor (c_i + p^e y_i)^k is expanded by the binomial theorem once per
 * variable and exponent, then products are formed term by term.
 */
inline PadicPolynomial substitute_affine(const PadicPolynomial& f, const std::vector<PadicRational>& center,
                                         std::int64_t e, std::uint64_t p) {
  const std::size_t n = f.nvars();
  if (center.size() != n) throw InvalidInput("center arity does not match polynomial");
  const PadicRational scale = PadicRational::power_of_p(e, p);
  // powers[i][k] = coefficients in y_i of (c_i + p^e y_i)^k
  std::vector<std::vector<std::vector<PadicRational>>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t dmax = f.degree_in(i);
    auto& pw = powers[i];
    pw.push_back({PadicRational::from_integer(1, p)});
    for (std::uint32_t k = 1; k <= dmax; ++k) {
      const auto& prev = pw.back();
      std::vector<PadicRational> next(prev.size() + 1, PadicRational(p));
      for (std::size_t j = 0; j < prev.size(); ++j) {
        next[j] += prev[j] * center[i];
        next[j + 1] += prev[j] * scale;
      }
      pw.push_back(std::move(next));
    }
  }
  PadicPolynomial out(n);
  for (const auto& [exp, coeff] : f.terms()) {
    PadicPolynomial prod(n);
    prod.add_term(Exponent(n, 0), coeff);
    for (std::size_t i = 0; i < n; ++i) {
      if (exp[i] == 0) continue;
      PadicPolynomial factor(n);
      const auto& coeffs = powers[i][exp[i]];
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        Exponent ej(n, 0);
        ej[i] = static_cast<std::uint32_t>(j);
        factor.add_term(ej, coeffs[j]);
      }
      prod = prod * factor;
    }
    out = out + prod;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

class PolynomialParser {
 public:
  explicit PolynomialParser(const std::string& text) : text_(text) {}

  struct RawTerm {
    BigInt coeff;
    std::map<std::size_t, std::uint32_t> powers;  // 0-based variable -> exponent
  };

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      skip_ws();
      terms.push_back(parse_term(sign));
      first = false;
      skip_ws();
    }
    return terms;
  }

 private:
  RawTerm parse_term(int sign) {
    RawTerm t;
    t.coeff = sign;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::size_t start = pos_;
      t.coeff *= parse_integer();
      skip_ws();
      if (peek() == '.' || peek() == '/') throw ParseError("non-integer coefficient", start);
      if (peek() != '*') return t;  // bare integer constant
      ++pos_;
      skip_ws();
    }
    parse_factor(t);
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      skip_ws();
      parse_factor(t);
      skip_ws();
    }
    return t;
  }

  void parse_factor(RawTerm& t) {
    if (peek() != 'x') throw ParseError("expected variable 'x'", pos_);
    ++pos_;
    std::size_t var = 0;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::size_t start = pos_;
      const BigInt idx = parse_integer();
      if (idx < 1 || idx > 64) throw ParseError("variable index out of range", start);
      var = idx.convert_to<std::size_t>() - 1;
    }
    std::uint32_t power = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected exponent", pos_);
      const BigInt k = parse_integer();
      if (k < 1 || k > 1000) throw ParseError("exponent must be a positive integer", start);
      power = k.convert_to<std::uint32_t>();
    }
    t.powers[var] += power;
  }

  BigInt parse_integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw ParseError("expected integer", pos_);
    return BigInt(text_.substr(start, pos_ - start));
  }

  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses e.g. "2*x1*x2^3 - x1^4"; bare "x" means x1. nvars is at least min_nvars.
inline SparsePolynomial parse_polynomial(const std::string& text, std::size_t min_nvars = 1) {
  const auto raw = detail::PolynomialParser(text).parse();
  std::size_t nvars = std::max<std::size_t>(min_nvars, 1);
  for (const auto& t : raw) {
    for (const auto& [v, k] : t.powers) nvars = std::max(nvars, v + 1);
  }
  SparsePolynomial f(nvars);
  for (const auto& t : raw) {
    Exponent e(nvars, 0);
    for (const auto& [v, k] : t.powers) e[v] = k;
    f.add_term(e, t.coeff);
  }
  if (f.is_zero()) throw InvalidInput("polynomial '" + text + "' is identically zero");
  return f;
}

/// Canonical text form, parseable by parse_polynomial.
inline std::string to_string(const SparsePolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  // highest total degree first reads naturally; ties by reverse-lex exponent
  std::vector<std::pair<Exponent, BigInt>> terms(f.terms().rbegin(), f.terms().rend());
  bool first = true;
  for (const auto& [e, c] : terms) {
    BigInt a = c;
    if (first) {
      if (a < 0) out += "-";
    } else {
      out += a < 0 ? " - " : " + ";
    }
    if (a < 0) a = -a;
    const bool constant = std::all_of(e.begin(), e.end(), [](std::uint32_t k) { return k == 0; });
    std::string factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(i + 1);
      if (e[i] > 1) factors += "^" + std::to_string(e[i]);
    }
    if (constant) {
      out += a.str();
    } else if (a == 1) {
      out += factors;
    } else {
      out += a.str() + "*" + factors;
    }
    first = false;
  }
  return out;
}

}  // namespace padic
