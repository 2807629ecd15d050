#ifndef BIRCH_TSEN_HPP
#define BIRCH_TSEN_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "birch/fields.hpp"
#include "birch/rational_function.hpp"

namespace birch {

/// Smallest s >= 0 with n * C(s+p, p) > C(r + d s + p, p). For n > d^p such an s always exists;
/// otherwise the leading terms never cross and only small s can work, so the search stops at
/// kExpansionSearchCap.
inline constexpr unsigned long kExpansionSearchCap = 4096;

inline unsigned choose_expansion_degree(unsigned long n, unsigned long r, unsigned long d, unsigned long p) {
  if (p == 0 || d == 0) throw ContractViolation("choose_expansion_degree: d and p must be positive");
  const bool unbounded = Integer(n) > ipow(Integer(d), p);
  for (unsigned long s = 0; unbounded || s <= kExpansionSearchCap; ++s)
    if (Integer(n) * binomial(s + p, p) > binomial(r + d * s + p, p)) return static_cast<unsigned>(s);
  throw UnsupportedInstance("no expansion degree gives more unknowns than equations for n = " + std::to_string(n) + ", r = " +
                            std::to_string(r) + "; over R(t1..tp) n >= d^p + 1 always suffices");
}

/// All exponent vectors of length p with total degree <= s, in graded order.
inline std::vector<std::vector<unsigned>> multi_indices_up_to(std::size_t p, unsigned s) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(p, 0);
  for (unsigned total = 0; total <= s; ++total) {
    std::vector<std::vector<unsigned>> level;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
      if (i + 1 == p) {
        cur[i] = left;
        level.push_back(cur);
        return;
      }
      for (unsigned e = left + 1; e-- > 0;) {
        cur[i] = e;
        rec(i + 1, left - e);
      }
    };
    rec(0, total);
    std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return GradedLexLess{}(Monomial(a), Monomial(b)); });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

struct TsenReduction {
  unsigned s = 0;
  std::size_t n = 0, p = 0;
  /// fresh variable k stands for y_{i,a}: variable_map[k] = (i, a)
  std::vector<std::pair<std::size_t, std::vector<unsigned>>> variable_map;
  /// nonzero forms f_a in the y variables, keyed by t-exponent a
  std::vector<std::vector<unsigned>> equation_index;
  std::vector<QPoly> real_system;
  Integer equation_count = 0;  // C(r + d s + p, p), zero forms included

  std::size_t num_fresh() const { return variable_map.size(); }

  /// x_i(t) = sum_a y_{i,a} t^a for a given assignment of the fresh variables.
  template <Scalar T>
  std::vector<Polynomial<T>> lift(const std::vector<T>& y) const {
    std::vector<Polynomial<T>> x(n, Polynomial<T>(p));
    for (std::size_t k = 0; k < variable_map.size(); ++k) {
      const auto& [i, a] = variable_map[k];
      x[i].add_term(Monomial(a), y[k]);
    }
    return x;
  }
};

/// Substitutes x_i = sum_{|a| <= s} y_{i,a} t^a into a form with polynomial coefficients in t and
/// collects t-monomials.
inline TsenReduction tsen_reduce(const Polynomial<RationalFunction>& f, std::size_t p, unsigned s) {
  auto deg = f.homogeneous_degree();
  if (!deg) throw ContractViolation("tsen_reduce: form must be homogeneous");
  TsenReduction red;
  red.s = s;
  red.n = f.num_vars();
  red.p = p;
  unsigned r = 0;
  for (const auto& [m, c] : f.terms()) {
    if (!c.is_polynomial()) throw ContractViolation("tsen_reduce: clear denominators first");
    if (c.num_params() > p) throw ContractViolation("tsen_reduce: coefficient uses more parameters than the field");
    r = std::max<unsigned>(r, static_cast<unsigned>(std::max(0, c.numerator().total_degree())));
  }
  const auto indices = multi_indices_up_to(p, s);
  for (std::size_t i = 0; i < red.n; ++i)
    for (const auto& a : indices) red.variable_map.emplace_back(i, a);
  const std::size_t N = red.variable_map.size();
  red.equation_count = binomial(r + *deg * s + p, p);

  // ring: y_0..y_{N-1}, t_1..t_p
  std::vector<QPoly> images(red.n, QPoly(N + p));
  for (std::size_t k = 0; k < N; ++k) {
    const auto& [i, a] = red.variable_map[k];
    std::vector<unsigned> e(N + p, 0);
    e[k] = 1;
    for (std::size_t j = 0; j < p; ++j) e[N + j] = a[j];
    images[i].add_term(Monomial(e), Rational(1));
  }
  std::vector<std::size_t> t_positions(p);
  for (std::size_t j = 0; j < p; ++j) t_positions[j] = N + j;
  QPoly total(N + p);
  for (const auto& [m, c] : f.terms()) {
    QPoly coeff = reindex(c.numerator().widened(p), t_positions, N + p);
    QPoly mono = QPoly::constant(N + p, Rational(1));
    for (std::size_t i = 0; i < m.support_size(); ++i)
      if (m[i] > 0) mono *= images[i].pow(m[i]);
    total += coeff * mono;
  }
  std::map<Monomial, QPoly, GradedLexLess> by_t;
  for (const auto& [m, c] : total.terms()) {
    std::vector<unsigned> ye(N, 0), te(p, 0);
    for (std::size_t k = 0; k < N; ++k) ye[k] = m[k];
    for (std::size_t j = 0; j < p; ++j) te[j] = m[N + j];
    auto it = by_t.try_emplace(Monomial(te), QPoly(N)).first;
    it->second.add_term(Monomial(ye), c);
  }
  for (auto& [tm, form] : by_t) {
    if (form.is_zero()) continue;
    std::vector<unsigned> a(p, 0);
    for (std::size_t j = 0; j < p; ++j) a[j] = tm[j];
    red.equation_index.push_back(a);
    red.real_system.push_back(form);
  }
  return red;
}

}  // namespace birch

#endif  // BIRCH_TSEN_HPP
