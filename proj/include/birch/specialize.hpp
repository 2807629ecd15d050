#ifndef BIRCH_SPECIALIZE_HPP
#define BIRCH_SPECIALIZE_HPP

#include <string>
#include <vector>

#include "birch/diagonal.hpp"
#include "birch/multihomogeneous.hpp"

namespace birch {

inline RealRadical ipow_radical(const RealRadical& x, unsigned e) {
  RealRadical r(1);
  for (unsigned k = 0; k < e; ++k) r = r * x;
  return r;
}

/// f^1..f^d on K^r x K^r (alpha = variables 0..r-1, beta = r..2r-1), f^j of bidegree (d-j, j).
struct BihomSystem {
  unsigned d = 0;
  std::size_t r = 0;
  std::vector<RPoly> forms;          // forms[j-1] = f^j
  std::vector<Rational> c_last;      // c_{i,m}
  std::vector<RealRadical> u_last;   // u_{i,m}
  std::vector<std::size_t> last;     // position used as m in each block (after the permutation)
};

/// f^j(alpha, beta) = C(d,j) sum_i c_{i,m} u_{i,m}^{d-j} alpha_i^{d-j} beta_i^j, where m is the last
/// position of block i with u_{i,m} != 0.
inline BihomSystem build_bihomogeneous_system(const std::vector<std::vector<Rational>>& c, const std::vector<RVec>& u,
                                              unsigned d) {
  if (c.size() != u.size() || c.empty()) throw ContractViolation("build_bihomogeneous_system: one null vector per block");
  if (d == 0) throw ContractViolation("build_bihomogeneous_system: degree must be positive");
  BihomSystem sys;
  sys.d = d;
  sys.r = c.size();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].size() != u[i].size()) throw ContractViolation("block " + std::to_string(i) + ": coefficient/vector size mismatch");
    RealRadical acc(0);
    for (std::size_t j = 0; j < c[i].size(); ++j) acc += RealRadical(c[i][j]) * ipow_radical(u[i][j], d);
    if (!acc.is_zero()) throw ContractViolation("block " + std::to_string(i) + ": u is not a zero of the block form");
    std::size_t m = u[i].size();
    while (m > 0 && u[i][m - 1].is_zero()) --m;
    if (m == 0) throw ContractViolation("block " + std::to_string(i) + ": null vector is zero");
    sys.last.push_back(m - 1);
    sys.c_last.push_back(c[i][m - 1]);
    sys.u_last.push_back(u[i][m - 1]);
  }
  const std::size_t r = sys.r;
  for (unsigned j = 1; j <= d; ++j) {
    RPoly f(2 * r);
    Rational binom(binomial(d, j));
    for (std::size_t i = 0; i < r; ++i) {
      RealRadical coeff = RealRadical(binom * sys.c_last[i]) * ipow_radical(sys.u_last[i], d - j);
      std::vector<unsigned> e(2 * r, 0);
      e[i] = d - j;
      e[r + i] = j;
      f.add_term(Monomial(e), coeff);
    }
    sys.forms.push_back(f);
  }
  return sys;
}

struct DiagonalSpecialization {
  RVec v, w;
  RealRadical a;
  std::size_t blocks = 0;
  std::string method;
};

struct DiagonalNormalization {
  RVec v, w, u;
  RealRadical a, b;
};

inline RPoly diagonal_form(const std::vector<Rational>& c, unsigned d) {
  RPoly f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f.add_term(Monomial::variable(i, d), RealRadical(c[i]));
  return f;
}

/// Exact check of f(x v + y w) = x y^{d-1} + a y^d in the ring K[x, y].
inline bool check_specialization(const std::vector<Rational>& c, unsigned d, const DiagonalSpecialization& s) {
  RPoly lhs = substitute_linear(diagonal_form(c, d), std::vector<RVec>{s.v, s.w});
  RPoly rhs(2);
  rhs.add_term(Monomial({1, d - 1}), RealRadical(1));
  rhs.add_term(Monomial({0, d}), s.a);
  return lhs == rhs;
}

inline bool check_normalization(const std::vector<Rational>& c, unsigned d, const DiagonalNormalization& s) {
  RPoly lhs = substitute_linear(diagonal_form(c, d), std::vector<RVec>{s.v, s.w, s.u});
  RPoly rhs(3);
  rhs.add_term(Monomial({1, d - 1}), RealRadical(1));
  rhs.add_term(Monomial({0, d}), s.a);
  rhs.add_term(Monomial({0, 0, d}), s.b);
  return lhs == rhs && !s.b.is_zero();
}

namespace detail {

/// Null vector of the block form normalized so the last nonzero entry is 1.
inline std::optional<RVec> block_null_vector(const std::vector<Rational>& c, unsigned d, const BirchField& field,
                                             const SolverBudget& budget) {
  DiagonalEquation<Rational> eq{c, d};
  RVec u;
  if (field.kind == FieldKind::RealClosed) {
    u = solve_diagonal_real(eq);
  } else {
    auto x = solve_diagonal_rational(eq, budget);
    if (!x) return std::nullopt;
    u = to_real_vector(*x);
  }
  std::size_t m = u.size();
  while (m > 0 && u[m - 1].is_zero()) --m;
  RealRadical inv = RealRadical(1) / u[m - 1];
  for (auto& x : u) x = x * inv;
  return u;
}

}  // namespace detail

/// (v, w, a) with f(x v + y w) = x y^{d-1} + a y^d for f = sum c_i x_i^d. Coordinates are cut into
/// blocks of `block_size` (default: the field's diagonal bound, 3 over Q); a null vector u_i per
/// block turns f(xv + yw) into the bihomogeneous system, whose f^1..f^{d-2} must vanish with
/// f^{d-1} != 0. For d = 3 this is one linear equation in beta after fixing alpha. For d >= 5 the
/// ansatz beta_i = lambda_i alpha_i makes f^j = C(d,j) sum gamma_i lambda_i^j with
/// gamma_i = c_{i,m} alpha_i^d, so the conditions are a Vandermonde nullspace in gamma.
inline DiagonalSpecialization specialize_diagonal(const std::vector<Rational>& c, unsigned d, const BirchField& field,
                                                  const SolverBudget& budget, std::size_t block_size = 0) {
  budget.validate();
  for (const auto& x : c)
    if (sgn(x) == 0) throw ContractViolation("specialize_diagonal: coefficients must be nonzero");
  if (d % 2 == 0) throw ContractViolation("specialize_diagonal: degree must be odd");
  if (field.kind == FieldKind::RealFunctionField)
    throw UnsupportedInstance("specialize_diagonal over " + field.to_string() + " is not supported; use solve_diagonal");
  const std::size_t n = c.size();
  DiagonalSpecialization out;
  if (d == 1) {
    if (n < 2) throw UnsupportedInstance("specialize_diagonal: need at least 2 variables");
    out.v.assign(n, RealRadical(0));
    out.w.assign(n, RealRadical(0));
    out.v[0] = RealRadical(Rational(1) / c[0]);
    out.w[1] = RealRadical(1);
    out.a = RealRadical(c[1]);
    out.method = "linear";
    return out;
  }
  const std::size_t m = block_size ? block_size : (field.nk_bound(d) ? field.nk_bound(d)->get_ui() : 3);
  const std::size_t r = n / m;
  const std::size_t needed = d == 3 ? 2 : d - 1;
  if (r < needed)
    throw BudgetExhausted("specialize_diagonal: " + std::to_string(r) + " block(s) of size " + std::to_string(m) +
                          " cannot make f^1..f^" + std::to_string(d - 2) + " vanish with f^" + std::to_string(d - 1) +
                          " != 0; need " + std::to_string(needed));
  std::vector<std::vector<Rational>> bc;
  std::vector<RVec> bu;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Rational> block(c.begin() + static_cast<long>(i * m), c.begin() + static_cast<long>((i + 1) * m));
    auto u = detail::block_null_vector(block, d, field, budget);
    if (!u) throw BudgetExhausted("specialize_diagonal: no zero found for block " + std::to_string(i));
    bc.push_back(block);
    bu.push_back(*u);
  }
  BihomSystem sys = build_bihomogeneous_system(bc, bu, d);
  RVec alpha(r), beta(r);
  Rng rng(budget.seed, 0x5bec);
  if (d == 3) {
    QPoly f1(2 * r), f2(2 * r);
    for (const auto& [mono, coeff] : sys.forms[0].terms()) f1.add_term(mono, coeff.rational_value());
    for (const auto& [mono, coeff] : sys.forms[1].terms()) f2.add_term(mono, coeff.rational_value());
    auto sol = solve_multihomogeneous({f1}, BlockGrading::contiguous({r, r}), {1}, f2, field, budget);
    for (std::size_t i = 0; i < r; ++i) {
      alpha[i] = sol.point[i];
      beta[i] = sol.point[r + i];
    }
    out.method = "bihomogeneous:" + sol.method;
  } else {
    bool found = false;
    for (unsigned attempt = 0; attempt < budget.restarts && !found; ++attempt) {
      std::vector<Rational> lambda;
      while (lambda.size() < r) {
        Rational l(rng.integer(-3 * static_cast<long>(r), 3 * static_cast<long>(r)));
        if (sgn(l) != 0 && std::find(lambda.begin(), lambda.end(), l) == lambda.end()) lambda.push_back(l);
      }
      Matrix<Rational> rows;
      for (unsigned j = 1; j + 2 <= d; ++j) {
        std::vector<Rational> row;
        for (const auto& l : lambda) row.push_back(pow(l, j));
        rows.push_back(row);
      }
      auto kernel = nullspace(rows, r);
      if (kernel.empty()) continue;
      std::vector<Rational> gamma(r, Rational(0));
      for (const auto& k : kernel) {
        Rational t(rng.integer(-3, 3));
        for (std::size_t i = 0; i < r; ++i) gamma[i] += t * k[i];
      }
      Rational top = 0;
      for (std::size_t i = 0; i < r; ++i) top += gamma[i] * pow(lambda[i], d - 1);
      if (sgn(top) == 0) continue;
      if (field.kind == FieldKind::Rationals) {
        bool rational = true;
        for (std::size_t i = 0; i < r && rational; ++i) rational = sgn(gamma[i]) == 0 || exact_root(Rational(gamma[i] / sys.c_last[i]), d).has_value();
        if (!rational) continue;
      }
      for (std::size_t i = 0; i < r; ++i) {
        alpha[i] = RealRadical::root(gamma[i] / sys.c_last[i], d);
        beta[i] = RealRadical(lambda[i]) * alpha[i];
      }
      found = true;
      out.method = "bihomogeneous:power-moments";
    }
    if (!found) throw BudgetExhausted("specialize_diagonal: no admissible moment vector within budget");
  }
  // alpha <- alpha / f^{d-1}(alpha, beta); f^{d-1} is linear in alpha
  RVec ab(alpha);
  ab.insert(ab.end(), beta.begin(), beta.end());
  RealRadical s = evaluate(sys.forms[d - 2], ab);
  if (s.is_zero()) throw BudgetExhausted("specialize_diagonal: f^{d-1} vanished at the solution");
  RealRadical inv = RealRadical(1) / s;
  for (auto& x : alpha) x = x * inv;
  ab.assign(alpha.begin(), alpha.end());
  ab.insert(ab.end(), beta.begin(), beta.end());
  out.a = evaluate(sys.forms[d - 1], ab);
  out.v.assign(n, RealRadical(0));
  out.w.assign(n, RealRadical(0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < m; ++j) out.v[i * m + j] = alpha[i] * bu[i][j];
    out.w[i * m + sys.last[i]] = beta[i];
  }
  out.blocks = r;
  if (!check_specialization(c, d, out)) throw ContractViolation("specialize_diagonal: internal identity check failed");
  if (rank(Matrix<RealRadical>{out.v, out.w}) != 2) throw BudgetExhausted("specialize_diagonal: v and w are dependent");
  return out;
}

/// Specializes on the first n-1 coordinates and adds u = e_n, b = c_n.
inline DiagonalNormalization add_diagonal_term(const std::vector<Rational>& c, unsigned d, const DiagonalSpecialization& s) {
  const std::size_t n = c.size();
  if (s.v.size() + 1 != n || s.w.size() + 1 != n)
    throw ContractViolation("add_diagonal_term: specialization must cover the first n-1 coordinates");
  DiagonalNormalization out;
  out.v = s.v;
  out.w = s.w;
  out.v.push_back(RealRadical(0));
  out.w.push_back(RealRadical(0));
  out.u.assign(n, RealRadical(0));
  out.u[n - 1] = RealRadical(1);
  out.a = s.a;
  out.b = RealRadical(c[n - 1]);
  if (!check_normalization(c, d, out)) throw ContractViolation("add_diagonal_term: identity check failed");
  return out;
}

inline DiagonalNormalization normalize_diagonal(const std::vector<Rational>& c, unsigned d, const BirchField& field,
                                                const SolverBudget& budget) {
  if (c.size() < 2) throw UnsupportedInstance("normalize_diagonal: need at least 2 variables");
  std::vector<Rational> head(c.begin(), c.end() - 1);
  return add_diagonal_term(c, d, specialize_diagonal(head, d, field, budget));
}

}  // namespace birch

#endif  // BIRCH_SPECIALIZE_HPP
