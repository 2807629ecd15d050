#ifndef BIRCH_MULTIHOMOGENEOUS_HPP
#define BIRCH_MULTIHOMOGENEOUS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birch/fields.hpp"
#include "birch/linalg.hpp"
#include "birch/radical.hpp"
#include "birch/real_solver.hpp"

namespace birch {

using RPoly = Polynomial<RealRadical>;
using RVec = std::vector<RealRadical>;

struct MultihomogeneousSolution {
  RVec point;
  std::string method;
  unsigned restart = 0;
};

namespace detail {

inline RVec to_real_vector(const std::vector<Rational>& v) { return RVec(v.begin(), v.end()); }

inline bool all_rational(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const RealRadical& x) { return x.is_rational(); });
}

inline bool is_nonzero_vector(const RVec& v) {
  return std::any_of(v.begin(), v.end(), [](const RealRadical& x) { return !x.is_zero(); });
}

inline RVec random_rational_vector(std::size_t n, Rng& rng, long h) {
  RVec v(n);
  do {
    for (auto& x : v) x = RealRadical(Rational(rng.integer(-h, h)));
  } while (!is_nonzero_vector(v));
  return v;
}

/// Random nonzero combination of a basis.
inline RVec random_combination(const std::vector<RVec>& basis, std::size_t n, Rng& rng, long h) {
  while (true) {
    RVec v(n, RealRadical(0));
    for (const auto& b : basis) {
      RealRadical c(Rational(rng.integer(-h, h)));
      if (c.is_zero()) continue;
      for (std::size_t i = 0; i < n; ++i) v[i] += c * b[i];
    }
    if (is_nonzero_vector(v)) return v;
  }
}

inline bool is_linear_form(const RPoly& f) {
  for (const auto& [m, c] : f.terms())
    if (m.degree() != 1) return false;
  return true;
}

/// Every term a pure power x_i^e with the same e.
inline std::optional<unsigned> common_diagonal_degree(const std::vector<RPoly>& forms) {
  std::optional<unsigned> e;
  for (const auto& f : forms)
    for (const auto& [m, c] : f.terms()) {
      std::size_t nz = 0;
      for (std::size_t i = 0; i < m.support_size(); ++i) nz += m[i] > 0;
      if (nz != 1 || (e && *e != m.degree())) return std::nullopt;
      e = m.degree();
    }
  return e;
}

/// Exact nonzero zero of forms over the real radical field. Linear forms are eliminated exactly;
/// diagonal forms of a common odd degree are linear in the powers; rational systems fall back to
/// the real solver and are accepted only when they reconstruct exactly.
inline std::optional<RVec> exact_leaf(std::vector<RPoly> forms, std::size_t n, Rng& rng, const SolverBudget& budget,
                                      std::string& method) {
  std::erase_if(forms, [](const RPoly& f) { return f.is_zero(); });
  if (forms.empty()) {
    method += "free";
    return random_rational_vector(n, rng, 3);
  }
  std::vector<RPoly> linear, rest;
  for (const auto& f : forms) (is_linear_form(f) ? linear : rest).push_back(f);
  if (!linear.empty()) {
    Matrix<RealRadical> rows;
    for (const auto& f : linear) {
      RVec row(n, RealRadical(0));
      for (const auto& [m, c] : f.terms())
        for (std::size_t i = 0; i < m.support_size(); ++i)
          if (m[i] == 1) row[i] = c;
      rows.push_back(row);
    }
    auto kernel = nullspace(rows, n);
    if (kernel.empty()) return std::nullopt;
    method += "linear;";
    if (rest.empty()) return random_combination(kernel, n, rng, 3);
    std::vector<RPoly> reduced;
    for (const auto& f : rest) reduced.push_back(substitute_linear(f, kernel));
    auto t = exact_leaf(reduced, kernel.size(), rng, budget, method);
    if (!t) return std::nullopt;
    RVec x(n, RealRadical(0));
    for (std::size_t j = 0; j < kernel.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += (*t)[j] * kernel[j][i];
    if (!is_nonzero_vector(x)) return std::nullopt;
    return x;
  }
  if (auto e = common_diagonal_degree(rest); e && *e % 2 == 1) {
    Matrix<RealRadical> rows;
    for (const auto& f : rest) {
      RVec row(n, RealRadical(0));
      for (const auto& [m, c] : f.terms())
        for (std::size_t i = 0; i < m.support_size(); ++i)
          if (m[i] == *e) row[i] = c;
      rows.push_back(row);
    }
    auto kernel = nullspace(rows, n);
    if (kernel.empty()) return std::nullopt;
    RVec powers = random_combination(kernel, n, rng, 3);
    RVec x;
    for (const auto& p : powers) {
      auto r = p.root(*e);
      if (!r) return std::nullopt;
      x.push_back(*r);
    }
    method += "linear-in-powers";
    return x;
  }
  std::vector<QPoly> rational;
  for (const auto& f : rest) {
    QPoly q(n);
    for (const auto& [m, c] : f.terms()) {
      if (!c.is_rational()) return std::nullopt;
      q.add_term(m, c.rational_value());
    }
    rational.push_back(q);
  }
  try {
    auto sol = solve_real_odd_system(rational, budget);
    if (!sol.exact) return std::nullopt;
    method += sol.method;
    return to_real_vector(*sol.exact);
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
}

struct MultihomProblem {
  std::vector<QPoly> forms;
  std::vector<std::size_t> block_of;  // variable -> block
  std::size_t num_blocks = 0;
  std::vector<std::size_t> designated;
};

inline std::vector<std::size_t> vars_of_block(const MultihomProblem& p, std::size_t b) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < p.block_of.size(); ++i)
    if (p.block_of[i] == b) v.push_back(i);
  return v;
}

/// The block recursion: forms designated on the last designated block B are kept for a leaf in
/// x in K^L after replacing B by sum_k x_k w_k; the others must vanish identically in x, which is
/// a smaller problem in the remaining blocks and the w_k.
inline std::optional<RVec> solve_multihom_rec(const MultihomProblem& p, Rng& rng, const SolverBudget& budget,
                                              std::string& method, unsigned depth) {
  const std::size_t n = p.block_of.size();
  if (p.forms.empty()) return random_rational_vector(n, rng, 3);
  const std::size_t B = *std::max_element(p.designated.begin(), p.designated.end());
  const auto bvars = vars_of_block(p, B);
  std::vector<QPoly> FB, Fother;
  std::vector<std::size_t> other_designation;
  for (std::size_t k = 0; k < p.forms.size(); ++k) {
    if (p.designated[k] == B)
      FB.push_back(p.forms[k]);
    else {
      Fother.push_back(p.forms[k]);
      other_designation.push_back(p.designated[k]);
    }
  }
  if (Fother.empty()) {
    // sample every other block, leaf in B
    RVec x(n, RealRadical(0));
    std::vector<RPoly> images(n, RPoly(bvars.size()));
    for (std::size_t b = 0; b < p.num_blocks; ++b) {
      if (b == B) continue;
      auto vars = vars_of_block(p, b);
      RVec val = random_rational_vector(vars.size(), rng, budget.height_bound.get_si() > 4 ? 4 : budget.height_bound.get_si());
      for (std::size_t j = 0; j < vars.size(); ++j) {
        x[vars[j]] = val[j];
        images[vars[j]] = RPoly::constant(bvars.size(), val[j]);
      }
    }
    for (std::size_t j = 0; j < bvars.size(); ++j) images[bvars[j]] = RPoly::variable(bvars.size(), j);
    std::vector<RPoly> leaf;
    for (const auto& f : FB) leaf.push_back(substitute(f, images, bvars.size()));
    method += "leaf[" + std::to_string(depth) + "]:";
    auto y = exact_leaf(leaf, bvars.size(), rng, budget, method);
    if (!y) return std::nullopt;
    for (std::size_t j = 0; j < bvars.size(); ++j) x[bvars[j]] = (*y)[j];
    return x;
  }
  // new layout: variables outside B keep their order, then L copies of B
  const std::size_t L = FB.size() + 1;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (p.block_of[i] != B) keep.push_back(i);
  const std::size_t m = bvars.size();
  const std::size_t N = keep.size() + L * m;
  // ring for expansion: N new variables followed by x_1..x_L
  std::vector<QPoly> images(n, QPoly(N + L));
  for (std::size_t j = 0; j < keep.size(); ++j) images[keep[j]] = QPoly::variable(N + L, j);
  for (std::size_t j = 0; j < m; ++j) {
    QPoly img(N + L);
    for (std::size_t k = 0; k < L; ++k)
      img += QPoly::variable(N + L, keep.size() + k * m + j) * QPoly::variable(N + L, N + k);
    images[bvars[j]] = img;
  }
  // block ids: blocks other than B compacted, then one block per w_k
  std::vector<std::size_t> block_map(p.num_blocks, 0);
  std::size_t next = 0;
  for (std::size_t b = 0; b < p.num_blocks; ++b)
    if (b != B) block_map[b] = next++;
  MultihomProblem sub;
  for (auto i : keep) sub.block_of.push_back(block_map[p.block_of[i]]);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t j = 0; j < m; ++j) sub.block_of.push_back(next + k);
  sub.num_blocks = next + L;
  for (std::size_t k = 0; k < Fother.size(); ++k) {
    QPoly expanded = substitute(Fother[k], images, N + L);
    std::map<Monomial, QPoly, GradedLexLess> by_x;
    for (const auto& [mono, c] : expanded.terms()) {
      std::vector<unsigned> xe(L), ye(N);
      for (std::size_t t = 0; t < L; ++t) xe[t] = mono[N + t];
      for (std::size_t t = 0; t < N; ++t) ye[t] = mono[t];
      by_x.try_emplace(Monomial(xe), QPoly(N)).first->second.add_term(Monomial(ye), c);
    }
    for (auto& [xm, form] : by_x) {
      sub.forms.push_back(form);
      sub.designated.push_back(block_map[other_designation[k]]);
    }
  }
  auto sol = solve_multihom_rec(sub, rng, budget, method, depth + 1);
  if (!sol) return std::nullopt;
  // leaf: F_B(v, sum x_k w_k) in x
  std::vector<RPoly> leaf_images(n, RPoly(L));
  for (std::size_t j = 0; j < keep.size(); ++j) leaf_images[keep[j]] = RPoly::constant(L, (*sol)[j]);
  for (std::size_t j = 0; j < m; ++j) {
    RPoly img(L);
    for (std::size_t k = 0; k < L; ++k) img.add_term(Monomial::variable(k), (*sol)[keep.size() + k * m + j]);
    leaf_images[bvars[j]] = img;
  }
  std::vector<RPoly> leaf;
  for (const auto& f : FB) leaf.push_back(substitute(f, leaf_images, L));
  method += ";leaf[" + std::to_string(depth) + "]:";
  auto y = exact_leaf(leaf, L, rng, budget, method);
  if (!y) return std::nullopt;
  RVec x(n, RealRadical(0));
  for (std::size_t j = 0; j < keep.size(); ++j) x[keep[j]] = (*sol)[j];
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < L; ++k) x[bvars[j]] += (*y)[k] * (*sol)[keep.size() + k * m + j];
  return x;
}

}  // namespace detail

/// Common zero of forms, each homogeneous of odd degree in its designated block, with avoid(point) != 0.
/// Exact over the real radical field; over Q only rational points are returned.
inline MultihomogeneousSolution solve_multihomogeneous(const std::vector<QPoly>& forms, const BlockGrading& grading,
                                                       const std::vector<std::size_t>& designated,
                                                       const std::optional<QPoly>& avoid, const BirchField& field,
                                                       const SolverBudget& budget) {
  budget.validate();
  if (field.kind == FieldKind::RealFunctionField)
    throw UnsupportedInstance("multi-homogeneous solving over " + field.to_string() + " is not supported");
  if (designated.size() != forms.size()) throw ContractViolation("solve_multihomogeneous: one designated block per form");
  const std::size_t n = grading.num_vars();
  for (std::size_t k = 0; k < forms.size(); ++k) {
    if (forms[k].num_vars() != n) throw ContractViolation("solve_multihomogeneous: form " + std::to_string(k) + " has the wrong context");
    if (designated[k] >= grading.num_blocks()) throw ContractViolation("solve_multihomogeneous: designated block out of range");
    if (forms[k].is_zero()) continue;
    std::set<unsigned> degrees;
    for (const auto& [m, c] : forms[k].terms()) degrees.insert(grading.multidegree(m)[designated[k]]);
    if (degrees.size() != 1) throw ContractViolation("form " + std::to_string(k) + " is not homogeneous in its designated block");
    unsigned e = *degrees.begin();
    if (e % 2 == 0) throw ContractViolation("form " + std::to_string(k) + " has even degree " + std::to_string(e) + " in its designated block");
  }
  if (avoid && avoid->num_vars() != n) throw ContractViolation("solve_multihomogeneous: avoid polynomial has the wrong context");
  detail::MultihomProblem p;
  for (const auto& f : forms)
    if (!f.is_zero()) p.forms.push_back(f);
  for (std::size_t k = 0; k < forms.size(); ++k)
    if (!forms[k].is_zero()) p.designated.push_back(designated[k]);
  for (std::size_t i = 0; i < n; ++i) p.block_of.push_back(grading.block_of(i));
  p.num_blocks = grading.num_blocks();
  Rng rng(budget.seed, 0x3017);
  const RPoly g = avoid ? convert<RealRadical>(*avoid) : RPoly::constant(n, RealRadical(1));
  for (unsigned attempt = 0; attempt < budget.restarts; ++attempt) {
    std::string method;
    auto x = detail::solve_multihom_rec(p, rng, budget, method, 0);
    if (!x || !detail::is_nonzero_vector(*x)) continue;
    if (field.kind == FieldKind::Rationals && !detail::all_rational(*x)) continue;
    if (evaluate(g, *x).is_zero()) continue;
    bool ok = true;
    for (const auto& f : p.forms) ok = ok && evaluate(convert<RealRadical>(f), *x).is_zero();
    if (!ok) continue;
    return {*x, method, attempt};
  }
  throw BudgetExhausted("no common zero found within " + std::to_string(budget.restarts) + " restarts");
}

}  // namespace birch

#endif  // BIRCH_MULTIHOMOGENEOUS_HPP
