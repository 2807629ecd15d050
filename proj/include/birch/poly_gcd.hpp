#ifndef BIRCH_POLY_GCD_HPP
#define BIRCH_POLY_GCD_HPP

#include <optional>
#include <utility>
#include <vector>

#include "birch/polynomial.hpp"

namespace birch {

using QPoly = Polynomial<Rational>;

/// Multivariate division by leading terms; returns (quotient, remainder).
template <FieldScalar K>
std::pair<Polynomial<K>, Polynomial<K>> divide(const Polynomial<K>& a, const Polynomial<K>& b) {
  if (b.is_zero()) throw ContractViolation("polynomial division by zero");
  const std::size_t n = a.num_vars();
  Polynomial<K> q(n), r(n), rest = a;
  const Monomial& lb = b.leading_monomial();
  const K& cb = b.leading_coefficient();
  while (!rest.is_zero()) {
    Monomial lm = rest.leading_monomial();
    K lc = rest.leading_coefficient();
    if (lb.divides(lm)) {
      Polynomial<K> t = Polynomial<K>::term(n, lb.quotient_of(lm), K(lc / cb));
      q += t;
      rest -= t * b;
    } else {
      r.add_term(lm, lc);
      rest.add_term(lm, K(-lc));
    }
  }
  return {q, r};
}

template <FieldScalar K>
std::optional<Polynomial<K>> divide_exact(const Polynomial<K>& a, const Polynomial<K>& b) {
  auto [q, r] = divide(a, b);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

namespace detail {

inline int highest_variable(const QPoly& f) {
  int best = -1;
  for (const auto& [m, c] : f.terms())
    for (std::size_t i = 0; i < m.support_size(); ++i)
      if (m[i] > 0) best = std::max(best, static_cast<int>(i));
  return best;
}

inline unsigned degree_in(const QPoly& f, std::size_t k) {
  unsigned d = 0;
  for (const auto& [m, c] : f.terms()) d = std::max(d, m[k]);
  return d;
}

/// Coefficients of f viewed as a univariate polynomial in x_k.
inline std::vector<QPoly> coefficients_in(const QPoly& f, std::size_t k) {
  std::vector<QPoly> out(degree_in(f, k) + 1, QPoly(f.num_vars()));
  for (const auto& [m, c] : f.terms()) {
    auto e = m.exponents();
    unsigned j = m[k];
    if (k < e.size()) e[k] = 0;
    out[j].add_term(Monomial(e), c);
  }
  return out;
}

inline QPoly monic(const QPoly& f) {
  if (f.is_zero()) return f;
  return f.scaled(Rational(1) / f.leading_coefficient());
}

inline QPoly gcd_impl(const QPoly& a, const QPoly& b);

inline QPoly content_in(const QPoly& f, std::size_t k) {
  QPoly g(f.num_vars());
  for (const auto& c : coefficients_in(f, k)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? monic(c) : gcd_impl(g, c);
    if (g.total_degree() == 0) break;
  }
  return g;
}

inline QPoly gcd_impl(const QPoly& a, const QPoly& b) {
  const std::size_t n = a.num_vars();
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  int ka = highest_variable(a), kb = highest_variable(b);
  int k = std::max(ka, kb);
  if (k < 0) return QPoly::constant(n, Rational(1));
  const auto kk = static_cast<std::size_t>(k);
  QPoly ca = content_in(a, kk), cb = content_in(b, kk);
  QPoly cont = gcd_impl(ca, cb);
  QPoly A = divide(a, ca).first, B = divide(b, cb).first;
  if (degree_in(A, kk) < degree_in(B, kk)) std::swap(A, B);
  while (true) {
    if (B.is_zero()) break;
    if (degree_in(B, kk) == 0) {
      A = QPoly::constant(n, Rational(1));
      break;
    }
    // pseudo-remainder of A by B in x_k
    QPoly R = A;
    const unsigned db = degree_in(B, kk);
    QPoly lcb = coefficients_in(B, kk).back();
    while (!R.is_zero() && degree_in(R, kk) >= db) {
      unsigned dr = degree_in(R, kk);
      QPoly lcr = coefficients_in(R, kk).back();
      QPoly shift = QPoly::term(n, Monomial::variable(kk, dr - db), Rational(1));
      R = lcb * R - lcr * shift * B;
    }
    A = B;
    if (R.is_zero()) break;
    QPoly cr = content_in(R, kk);
    B = divide(R, cr).first;
  }
  QPoly g = A;
  if (degree_in(g, kk) > 0) g = divide(g, content_in(g, kk)).first;
  return monic(cont * g);
}

}  // namespace detail

/// Monic greatest common divisor over Q.
inline QPoly gcd(const QPoly& a, const QPoly& b) {
  if (a.num_vars() != b.num_vars()) throw ContractViolation("gcd: context mismatch");
  if (a.is_zero() && b.is_zero()) return QPoly(a.num_vars());
  return detail::gcd_impl(a, b);
}

/// Returns g with g^d == f when f is a perfect d-th power over Q (graded leading-term recursion).
template <FieldScalar K>
std::optional<Polynomial<K>> polynomial_root(const Polynomial<K>& f, unsigned d,
                                             std::optional<K> (*scalar_root)(const K&, unsigned)) {
  const std::size_t n = f.num_vars();
  if (f.is_zero()) return f;
  if (d == 1) return f;
  const Monomial& lm = f.leading_monomial();
  std::vector<unsigned> e;
  for (auto x : lm.exponents()) {
    if (x % d != 0) return std::nullopt;
    e.push_back(x / d);
  }
  auto lc = scalar_root(f.leading_coefficient(), d);
  if (!lc) return std::nullopt;
  Monomial lead_root(e);
  Polynomial<K> g = Polynomial<K>::term(n, lead_root, *lc);
  // derivative factor d * lt(g)^{d-1}
  Polynomial<K> denom = Polynomial<K>::term(n, Monomial{}, K(Rational(d))) * Polynomial<K>::term(n, lead_root, *lc).pow(d - 1);
  for (std::size_t guard = 0; guard <= f.num_terms() * 4 + 8; ++guard) {
    Polynomial<K> rem = f - g.pow(d);
    if (rem.is_zero()) return g;
    const Monomial& rm = rem.leading_monomial();
    const Monomial& dm = denom.leading_monomial();
    if (!dm.divides(rm)) return std::nullopt;
    Monomial next = dm.quotient_of(rm);
    if (!GradedLexLess{}(next, lead_root)) return std::nullopt;
    g.add_term(next, K(rem.leading_coefficient() / denom.leading_coefficient()));
  }
  return std::nullopt;
}

inline std::optional<Rational> rational_root_fn(const Rational& q, unsigned d) { return exact_root(q, d); }

}  // namespace birch

#endif  // BIRCH_POLY_GCD_HPP
