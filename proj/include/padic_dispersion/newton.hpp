#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "padic_dispersion/arithmetic.hpp"
#include "padic_dispersion/ball.hpp"
#include "padic_dispersion/polynomial.hpp"

namespace padic {

using IntVector = std::vector<std::int64_t>;

/// Facet of the Newton polyhedron: <normal, x> >= support_value, with equality on the facet.
struct Facet {
  IntVector normal;            // primitive, non-negative
  std::int64_t support_value;  // m(a) = min over the support of <a, l>
  std::int64_t weight;         // sigma(a) = sum of normal components
  std::vector<Exponent> points;  // support points on the facet
};

struct NewtonPolyhedron {
  std::size_t dim = 0;
  std::vector<Facet> facets;
  std::vector<Exponent> support;
};

struct QuasiHomogeneityWitness {
  IntVector alpha;
  std::int64_t degree;
};

struct Face {
  std::vector<Exponent> points;
  std::vector<std::size_t> facets;  // indices into NewtonPolyhedron::facets containing the face
  SparsePolynomial poly;
};

enum class NondegeneracyVerdict { certified, degenerate_mod_p, indeterminate };

inline std::string to_string(NondegeneracyVerdict v) {
  switch (v) {
    case NondegeneracyVerdict::certified:
      return "certified";
    case NondegeneracyVerdict::degenerate_mod_p:
      return "degenerate-mod-p";
    case NondegeneracyVerdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

inline constexpr std::size_t kMaxNewtonVariables = 4;

namespace detail {

inline std::int64_t dot(const IntVector& a, const Exponent& l) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<std::int64_t>(l[i]);
  return s;
}

inline std::int64_t determinant(std::vector<IntVector> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  std::int64_t det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<IntVector> minor;
    for (std::size_t r = 1; r < n; ++r) {
      IntVector row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const std::int64_t term = m[0][col] * determinant(std::move(minor));
    det += (col % 2 == 0) ? term : -term;
  }
  return det;
}

/// Vector orthogonal to the (dim-1) rows, by cofactor expansion; zero when rows are dependent.
inline IntVector orthogonal_complement(const std::vector<IntVector>& rows, std::size_t dim) {
  IntVector a(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<IntVector> minor;
    for (const auto& r : rows) {
      IntVector row;
      for (std::size_t c = 0; c < dim; ++c) {
        if (c != j) row.push_back(r[c]);
      }
      minor.push_back(std::move(row));
    }
    const std::int64_t d = determinant(std::move(minor));
    a[j] = (j % 2 == 0) ? d : -d;
  }
  return a;
}

/// Exact rank over Q by fraction-free elimination.
inline std::size_t rank(std::vector<std::vector<BigInt>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const BigInt a = m[r][c], b = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] = m[i][k] * a - m[r][k] * b;
    }
    ++r;
  }
  return r;
}

/// Normalize to a primitive non-negative vector; nullopt when signs are mixed or all zero.
inline std::optional<IntVector> primitive_nonnegative(IntVector a) {
  const bool any_pos = std::any_of(a.begin(), a.end(), [](std::int64_t x) { return x > 0; });
  const bool any_neg = std::any_of(a.begin(), a.end(), [](std::int64_t x) { return x < 0; });
  if (any_pos == any_neg) return std::nullopt;  // mixed signs or zero vector
  if (any_neg) {
    for (auto& x : a) x = -x;
  }
  std::int64_t g = 0;
  for (auto x : a) g = std::gcd(g, x);
  for (auto& x : a) x /= g;
  return a;
}

}  // namespace detail

/// Builds the facet data for a candidate normal when the face it cuts out has codimension one.
inline std::optional<Facet> facet_for_normal(const IntVector& normal, const std::vector<Exponent>& support) {
  const std::size_t dim = normal.size();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& l : support) best = std::min(best, detail::dot(normal, l));
  Facet f{normal, best, std::accumulate(normal.begin(), normal.end(), std::int64_t{0}), {}};
  for (const auto& l : support) {
    if (detail::dot(normal, l) == best) f.points.push_back(l);
  }
  // affine hull of the face = on-facet points plus recession directions e_i with a_i = 0
  std::vector<std::vector<BigInt>> span;
  for (std::size_t k = 1; k < f.points.size(); ++k) {
    std::vector<BigInt> row(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      row[i] = static_cast<std::int64_t>(f.points[k][i]) - static_cast<std::int64_t>(f.points[0][i]);
    }
    span.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (normal[i] != 0) continue;
    std::vector<BigInt> row(dim, 0);
    row[i] = 1;
    span.push_back(std::move(row));
  }
  if (detail::rank(std::move(span)) != dim - 1) return std::nullopt;
  return f;
}

inline std::vector<Exponent> support(const SparsePolynomial& f) {
  if (f.is_constant()) throw InvalidInput("support requires a nonconstant polynomial");
  if (f.has_constant_term()) throw InvalidInput("support requires f(0) = 0");
  std::vector<Exponent> s;
  for (const auto& [e, c] : f.terms()) s.push_back(e);
  return s;
}

/**
 * Facets of conv(supp f) + R_+^m.
 *
 * A facet hyperplane passes through k affinely independent support points and
 * contains m-k recession directions e_j; every such choice gives a candidate
 * normal (a generalized cross product), which is kept when it is non-negative
 * and cuts out a face of dimension m-1.
 */
inline NewtonPolyhedron newton_facets(const SparsePolynomial& f) {
  const auto pts = support(f);
  const std::size_t m = f.nvars();
  if (m > kMaxNewtonVariables) {
    throw InvalidInput("facet enumeration supports at most " + std::to_string(kMaxNewtonVariables) + " variables");
  }
  std::set<IntVector> seen;
  NewtonPolyhedron poly{m, {}, pts};

  std::vector<std::size_t> point_idx;
  std::vector<std::size_t> dir_idx;
  auto try_candidate = [&] {
    std::vector<IntVector> rows;
    const Exponent& base = pts[point_idx[0]];
    for (std::size_t k = 1; k < point_idx.size(); ++k) {
      IntVector row(m);
      for (std::size_t i = 0; i < m; ++i) {
        row[i] = static_cast<std::int64_t>(pts[point_idx[k]][i]) - static_cast<std::int64_t>(base[i]);
      }
      rows.push_back(std::move(row));
    }
    for (auto j : dir_idx) {
      IntVector row(m, 0);
      row[j] = 1;
      rows.push_back(std::move(row));
    }
    auto normal = detail::primitive_nonnegative(detail::orthogonal_complement(rows, m));
    if (!normal || seen.count(*normal)) return;
    if (auto facet = facet_for_normal(*normal, pts)) {
      seen.insert(*normal);
      poly.facets.push_back(std::move(*facet));
    }
  };

  // choose k points and m-k directions
  std::function<void(std::size_t, std::size_t, std::size_t)> choose_dirs = [&](std::size_t start, std::size_t left,
                                                                                std::size_t) {
    if (left == 0) {
      try_candidate();
      return;
    }
    for (std::size_t j = start; j < m; ++j) {
      dir_idx.push_back(j);
      choose_dirs(j + 1, left - 1, 0);
      dir_idx.pop_back();
    }
  };
  std::function<void(std::size_t, std::size_t)> choose_points = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      choose_dirs(0, m - point_idx.size(), 0);
      return;
    }
    for (std::size_t i = start; i < pts.size(); ++i) {
      point_idx.push_back(i);
      choose_points(i + 1, left - 1);
      point_idx.pop_back();
    }
  };
  for (std::size_t k = 1; k <= m; ++k) choose_points(0, k);

  std::sort(poly.facets.begin(), poly.facets.end(),
            [](const Facet& a, const Facet& b) { return a.normal < b.normal; });
  return poly;
}

struct DecayExponent {
  Rational beta;
  std::vector<Rational> t0;
};

/// beta_f = min sigma(a)/m(a) over facets with m(a) != 0; T0 = (1/beta, ..., 1/beta).
inline DecayExponent beta_and_t0(const NewtonPolyhedron& P) {
  std::optional<Rational> beta;
  for (const auto& f : P.facets) {
    if (f.support_value == 0) continue;
    const Rational r(f.weight, f.support_value);
    if (!beta || r < *beta) beta = r;
  }
  if (!beta) throw InvalidInput("Newton polyhedron has no facet with nonzero supporting value");
  return {*beta, std::vector<Rational>(P.dim, 1 / *beta)};
}

/**
 * Minimal (d, alpha) in lexicographic order with <alpha, l> = d on the whole support,
 * alpha ranging over [1, bound]^m.
 */
inline std::optional<QuasiHomogeneityWitness> quasi_homogeneous_detect(const SparsePolynomial& f,
                                                                       std::int64_t bound = 32) {
  const auto pts = support(f);
  const std::size_t m = f.nvars();
  std::optional<QuasiHomogeneityWitness> best;
  IntVector alpha(m, 1);
  while (true) {
    const std::int64_t d = detail::dot(alpha, pts[0]);
    bool ok = d > 0;
    for (std::size_t k = 1; k < pts.size() && ok; ++k) ok = detail::dot(alpha, pts[k]) == d;
    if (ok && (!best || d < best->degree || (d == best->degree && alpha < best->alpha))) best = {alpha, d};
    std::size_t i = m;
    while (i-- > 0) {
      if (++alpha[i] <= bound) break;
      alpha[i] = 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

inline SparsePolynomial restrict_to_points(const SparsePolynomial& f, const std::vector<Exponent>& points) {
  SparsePolynomial g(f.nvars());
  for (const auto& l : points) g.add_term(l, f.terms().at(l));
  return g;
}

/// Every proper face carrying support points, with its face polynomial f_gamma.
inline std::vector<Face> face_polynomials(const SparsePolynomial& f, const NewtonPolyhedron& P) {
  std::set<std::vector<Exponent>> known;
  std::vector<std::vector<Exponent>> frontier;
  for (const auto& facet : P.facets) {
    auto pts = facet.points;
    std::sort(pts.begin(), pts.end());
    if (known.insert(pts).second) frontier.push_back(pts);
  }
  // close under pairwise intersection: faces of a polyhedron are intersections of facets
  while (!frontier.empty()) {
    std::vector<std::vector<Exponent>> next;
    const std::vector<std::vector<Exponent>> current(known.begin(), known.end());
    for (const auto& a : frontier) {
      for (const auto& b : current) {
        std::vector<Exponent> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        if (!c.empty() && known.insert(c).second) next.push_back(c);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Face> faces;
  for (const auto& pts : known) {
    Face face{pts, {}, restrict_to_points(f, pts)};
    for (std::size_t i = 0; i < P.facets.size(); ++i) {
      const auto& fp = P.facets[i].points;
      if (std::all_of(pts.begin(), pts.end(),
                      [&](const Exponent& l) { return std::find(fp.begin(), fp.end(), l) != fp.end(); })) {
        face.facets.push_back(i);
      }
    }
    faces.push_back(std::move(face));
  }
  return faces;
}

namespace detail {

/// Reduction mod p as word-size coefficients; zero coefficients dropped.
inline std::vector<std::pair<Exponent, std::uint64_t>> reduce_poly(const SparsePolynomial& f, std::uint64_t p) {
  std::vector<std::pair<Exponent, std::uint64_t>> out;
  for (const auto& [e, c] : f.terms()) {
    const std::uint64_t r = reduce_mod(c, p);
    if (r != 0) out.emplace_back(e, r);
  }
  return out;
}

inline std::uint64_t eval_mod_p(const std::vector<std::pair<Exponent, std::uint64_t>>& f,
                                const std::vector<std::uint64_t>& x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (const auto& [e, c] : f) {
    std::uint64_t t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) t = mul_mod(t, x[i], p);
    }
    acc = add_mod(acc, t, p);
  }
  return acc;
}

/// Visits F_p^m (or its torus) until fn returns true; reports whether it did.
template <class Fn>
bool any_point_mod_p(std::size_t m, std::uint64_t p, bool torus_only, std::uint64_t cap, Fn&& fn) {
  checked_point_count(p, m, 1, cap);
  std::vector<std::uint64_t> x(m, torus_only ? 1 : 0);
  const std::uint64_t lo = torus_only ? 1 : 0;
  while (true) {
    if (fn(x)) return true;
    std::size_t i = m;
    while (i-- > 0) {
      if (++x[i] < p) break;
      x[i] = lo;
    }
    if (i == static_cast<std::size_t>(-1)) return false;
  }
}

}  // namespace detail

/**
 * Sufficient mod-p criterion for non-degeneracy: (i) the reduced gradient has no
 * nonzero common zero over F_p, (ii) no face polynomial has a singular zero on the
 * torus (F_p^x)^m. Reductions whose gradient vanishes identically are indeterminate.
 */
inline NondegeneracyVerdict nondegeneracy_mod_p(const SparsePolynomial& f, std::uint64_t p,
                                                std::uint64_t cap = kDefaultEnumerationCap) {
  if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  const std::size_t m = f.nvars();
  const NewtonPolyhedron P = newton_facets(f);

  auto reduced_gradient = [&](const SparsePolynomial& g) {
    std::vector<std::vector<std::pair<Exponent, std::uint64_t>>> grad;
    for (std::size_t i = 0; i < m; ++i) grad.push_back(detail::reduce_poly(partial_derivative(g, i), p));
    return grad;
  };
  auto identically_zero = [](const auto& grad) {
    return std::all_of(grad.begin(), grad.end(), [](const auto& g) { return g.empty(); });
  };

  const auto grad = reduced_gradient(f);
  if (identically_zero(grad)) return NondegeneracyVerdict::indeterminate;
  const bool critical = detail::any_point_mod_p(m, p, false, cap, [&](const std::vector<std::uint64_t>& x) {
    if (std::all_of(x.begin(), x.end(), [](std::uint64_t v) { return v == 0; })) return false;
    return std::all_of(grad.begin(), grad.end(), [&](const auto& g) { return detail::eval_mod_p(g, x, p) == 0; });
  });
  if (critical) return NondegeneracyVerdict::degenerate_mod_p;

  bool degenerate_face = false;
  for (const auto& face : face_polynomials(f, P)) {
    const auto fg = detail::reduce_poly(face.poly, p);
    const auto gg = reduced_gradient(face.poly);
    if (fg.empty() || identically_zero(gg)) return NondegeneracyVerdict::indeterminate;
    degenerate_face = degenerate_face ||
                      detail::any_point_mod_p(m, p, true, cap, [&](const std::vector<std::uint64_t>& x) {
                        if (detail::eval_mod_p(fg, x, p) != 0) return false;
                        return std::all_of(gg.begin(), gg.end(),
                                           [&](const auto& g) { return detail::eval_mod_p(g, x, p) == 0; });
                      });
  }
  return degenerate_face ? NondegeneracyVerdict::degenerate_mod_p : NondegeneracyVerdict::certified;
}

}  // namespace padic
