#ifndef BIRCH_ORTHOGONAL_HPP
#define BIRCH_ORTHOGONAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "birch/multihomogeneous.hpp"
#include "birch/strength.hpp"

namespace birch {

struct OrthogonalityCheck {
  bool ok = false;
  RPoly restricted;  // f(sum x_i v_i)
  RPoly expected;    // sum f(v_i) x_i^d
};

/// f(sum x_i v_i) == sum f(v_i) x_i^d as polynomials.
inline OrthogonalityCheck is_orthogonal(const QPoly& f, const std::vector<RVec>& vectors) {
  auto d = f.homogeneous_degree();
  if (!d && !f.is_zero()) throw ContractViolation("is_orthogonal: form must be homogeneous");
  for (const auto& v : vectors)
    if (v.size() != f.num_vars()) throw ContractViolation("is_orthogonal: vector outside the form's ambient space");
  const RPoly fr = convert<RealRadical>(f);
  OrthogonalityCheck out;
  out.restricted = substitute_linear(fr, vectors);
  out.expected = RPoly(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) out.expected.add_term(Monomial::variable(i, d.value_or(0)), evaluate(fr, vectors[i]));
  out.ok = out.restricted == out.expected;
  return out;
}

struct OrthogonalFamily {
  std::vector<QPoly> forms;
  std::vector<RVec> vectors;               // line members
  std::vector<std::vector<RVec>> blocks;   // subspace members, each a basis
  std::vector<RPoly> restricted;           // certificate: restrictions of the forms to the span
  std::optional<StrengthBounds> restriction_strength;  // best effort, subspace families only
  std::string method;

  bool is_subspace_family() const { return !blocks.empty(); }

  std::vector<RVec> all_vectors() const {
    if (!is_subspace_family()) return vectors;
    std::vector<RVec> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  BlockGrading grading() const {
    std::vector<std::size_t> sizes;
    if (is_subspace_family())
      for (const auto& b : blocks) sizes.push_back(b.size());
    else
      sizes.assign(vectors.size(), 1);
    return BlockGrading::contiguous(sizes);
  }
};

/// Re-verifies from scratch: no mixed multidegree component in any restricted form, members
/// linearly independent, stored restrictions equal to the recomputed ones.
inline CheckResult verify_orthogonal_family(const OrthogonalFamily& fam) {
  const auto vecs = fam.all_vectors();
  if (vecs.empty()) return CheckResult::fail("empty-family");
  if (rank(Matrix<RealRadical>(vecs)) != vecs.size()) return CheckResult::fail("members-dependent");
  const auto grading = fam.grading();
  for (std::size_t k = 0; k < fam.forms.size(); ++k) {
    RPoly g = substitute_linear(convert<RealRadical>(fam.forms[k]), vecs);
    if (k < fam.restricted.size() && !(fam.restricted[k] == g))
      return CheckResult::fail("form-" + std::to_string(k) + "-restriction-mismatch");
    for (const auto& [md, comp] : multidegree_components(g, grading))
      if (!is_pure_multidegree(md)) return CheckResult::fail("form-" + std::to_string(k) + "-mixed-term");
  }
  return {};
}

namespace detail {

inline RVec unit_vector(std::size_t n, std::size_t i) {
  RVec v(n, RealRadical(0));
  v[i] = RealRadical(1);
  return v;
}

inline void fill_certificate(OrthogonalFamily& fam) {
  const auto vecs = fam.all_vectors();
  fam.restricted.clear();
  for (const auto& f : fam.forms) fam.restricted.push_back(substitute_linear(convert<RealRadical>(f), vecs));
}

/// Mixed monomials created by adding coordinate i to block b of a coordinate assignment.
inline bool coordinate_fits(const std::vector<QPoly>& forms, const std::vector<long>& block_of, std::size_t i, long b) {
  for (const auto& f : forms)
    for (const auto& [m, c] : f.terms()) {
      if (m[i] == 0) continue;
      for (std::size_t j = 0; j < m.support_size(); ++j) {
        if (m[j] == 0 || j == i) continue;
        if (block_of[j] < 0) goto next_term;  // support leaves the chosen coordinates
      }
      for (std::size_t j = 0; j < m.support_size(); ++j)
        if (m[j] > 0 && j != i && block_of[j] != b) return false;
    next_term:;
    }
  return true;
}

/// Coordinate blocks: isolated coordinates first, each placed in the least-filled block where it
/// creates no mixed monomial; larger interaction components only if a block is still empty.
inline std::optional<std::vector<std::vector<std::size_t>>> coordinate_blocks(const std::vector<QPoly>& forms,
                                                                             std::size_t blocks, std::size_t ell) {
  const std::size_t n = forms[0].num_vars();
  // interaction components
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (const auto& f : forms)
    for (const auto& [m, c] : f.terms()) {
      std::optional<std::size_t> first;
      for (std::size_t j = 0; j < m.support_size(); ++j)
        if (m[j] > 0) {
          if (!first) first = j;
          else parent[find(j)] = find(*first);
        }
    }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < n; ++i) comps[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> order;
  for (auto& [root, members] : comps) order.push_back(members);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::vector<long> block_of(n, -1);
  std::vector<std::vector<std::size_t>> out(blocks);
  auto filled = [&] { return std::all_of(out.begin(), out.end(), [](const auto& b) { return !b.empty(); }); };
  // isolated coordinates first; larger components are split only when needed
  for (int pass = 0; pass < 2; ++pass)
  for (const auto& comp : order) {
    if (pass == 0 && comp.size() > 1) continue;
    if (pass == 1 && (comp.size() == 1 || filled())) continue;
    for (auto i : comp) {
      if (block_of[i] >= 0) continue;
      long best = -1;
      for (std::size_t b = 0; b < blocks; ++b) {
        if (out[b].size() >= ell) continue;
        if (best >= 0 && out[b].size() >= out[static_cast<std::size_t>(best)].size()) continue;
        if (coordinate_fits(forms, block_of, i, static_cast<long>(b))) best = static_cast<long>(b);
      }
      if (best < 0) continue;
      block_of[i] = best;
      out[static_cast<std::size_t>(best)].push_back(i);
    }
  }
  for (const auto& b : out)
    if (b.empty()) return std::nullopt;
  return out;
}

/// Coordinates compatible with every block as one extra block (the complement in the structured case).
inline std::vector<std::size_t> complement_block(const std::vector<QPoly>& forms, const std::vector<std::vector<std::size_t>>& blocks) {
  const std::size_t n = forms[0].num_vars();
  std::vector<long> block_of(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto i : blocks[b]) block_of[i] = static_cast<long>(b);
  const long extra = static_cast<long>(blocks.size());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (block_of[i] >= 0) continue;
    if (coordinate_fits(forms, block_of, i, extra)) {
      block_of[i] = extra;
      out.push_back(i);
    }
  }
  return out;
}

/// Mixed components of f(sum_{b,k} x_{b,k} v_{b,k}) as equations on the unknown vectors
/// (variable layout: vector j occupies [j*n, (j+1)*n)); designation = the last vector of odd degree.
inline void mixed_component_equations(const QPoly& f, std::size_t n, std::size_t blocks, std::size_t ell,
                                      std::vector<QPoly>& eqs, std::vector<std::size_t>& designation) {
  const std::size_t nv = blocks * ell;
  const std::size_t N = nv * n;
  std::vector<QPoly> images(n, QPoly(N + nv));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nv; ++j) images[i] += QPoly::variable(N + nv, j * n + i) * QPoly::variable(N + nv, N + j);
  QPoly expanded = substitute(f, images, N + nv);
  std::map<Monomial, QPoly, GradedLexLess> by_x;
  for (const auto& [m, c] : expanded.terms()) {
    std::vector<unsigned> xe(nv), ve(N);
    for (std::size_t j = 0; j < nv; ++j) xe[j] = m[N + j];
    for (std::size_t t = 0; t < N; ++t) ve[t] = m[t];
    by_x.try_emplace(Monomial(xe), QPoly(N)).first->second.add_term(Monomial(ve), c);
  }
  for (const auto& [xm, coeff] : by_x) {
    std::vector<unsigned> block_deg(blocks, 0);
    for (std::size_t j = 0; j < nv; ++j) block_deg[j / ell] += xm[j];
    if (is_pure_multidegree(block_deg) || coeff.is_zero()) continue;
    std::optional<std::size_t> des;
    for (std::size_t j = 0; j < nv; ++j)
      if (xm[j] % 2 == 1) des = j;
    if (!des) throw ContractViolation("mixed component with no odd block; forms must have odd degree");
    eqs.push_back(coeff);
    designation.push_back(*des);
  }
}

}  // namespace detail

/// n vectors with f(sum x_i v_i) = sum f(v_i) x_i^d. Coordinate vectors are used where f is
/// diagonal on them; otherwise, for cubics, two vectors come from the vanishing of the mixed
/// terms: grad f(v_1) . v_2 = 0 (linear) and v_2^T H(v_1) v_2 = 0 (a quadric, solved on a
/// rational segment with one square root).
inline OrthogonalFamily brauer_orthogonal_sequence(const QPoly& f, std::size_t n, const BirchField& field,
                                                   const SolverBudget& budget) {
  budget.validate();
  auto d = f.homogeneous_degree();
  if (!d || f.is_zero()) throw ContractViolation("brauer_orthogonal_sequence: nonzero form required");
  const std::size_t N = f.num_vars();
  if (n == 0 || n > N) throw ContractViolation("brauer_orthogonal_sequence: need 1 <= n <= dim V");
  OrthogonalFamily fam;
  fam.forms = {f};
  Rng rng(budget.seed, 0xb2a0);
  if (n == 1) {
    for (std::size_t i = 0; i < N && fam.vectors.empty(); ++i)
      if (sgn(f.coefficient(Monomial::variable(i, *d))) != 0) fam.vectors.push_back(detail::unit_vector(N, i));
    if (fam.vectors.empty()) fam.vectors.push_back(detail::unit_vector(N, 0));
    fam.method = "single-vector";
    detail::fill_certificate(fam);
    return fam;
  }
  if (*d >= 3 && field.kind == FieldKind::Rationals)
    throw UnsupportedInstance("the sequential construction needs solutions of even-degree equations, which Q does not provide");
  if (field.kind == FieldKind::RealFunctionField)
    throw UnsupportedInstance("brauer_orthogonal_sequence over " + field.to_string() + " is not supported");
  // coordinate vectors on which f is diagonal
  std::vector<long> block_of(N, -1);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < N && chosen.size() < n; ++i)
    if (detail::coordinate_fits({f}, block_of, i, static_cast<long>(chosen.size()))) {
      block_of[i] = static_cast<long>(chosen.size());
      chosen.push_back(i);
    }
  if (chosen.size() >= n) {
    for (auto i : chosen) fam.vectors.push_back(detail::unit_vector(N, i));
    fam.method = "coordinate";
    detail::fill_certificate(fam);
    return fam;
  }
  if (*d != 3 || n > 2)
    throw BudgetExhausted("brauer_orthogonal_sequence: only coordinate families or two vectors for cubics are constructed exactly");
  const auto grad = gradient(f);
  for (unsigned attempt = 0; attempt < budget.restarts; ++attempt) {
    std::vector<Rational> v1(N);
    for (auto& x : v1) x = Rational(rng.integer(-3, 3));
    if (sgn(evaluate(f, v1)) == 0) continue;
    // L = kernel of grad f(v1); v1 is not in L since grad f(v1) . v1 = 3 f(v1)
    Matrix<Rational> row(1, std::vector<Rational>(N));
    for (std::size_t i = 0; i < N; ++i) row[0][i] = evaluate(grad[i], v1);
    auto L = nullspace(row, N);
    if (L.empty()) continue;
    // q(y) = coefficient of x1 x2^2 = (1/2) y^T H(v1) y restricted to L
    QPoly q(L.size());
    {
      std::vector<QPoly> images(N, QPoly(L.size()));
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < L.size(); ++k) images[i].add_term(Monomial::variable(k), L[k][i]);
      std::vector<QPoly> shifted(N, QPoly(L.size()));
      for (std::size_t i = 0; i < N; ++i) shifted[i] = images[i] + QPoly::constant(L.size(), v1[i]);
      // f(v1 + y) = f(v1) + grad.y + q(y) + f(y); q is the degree-2 part
      QPoly full = substitute(f, shifted, L.size());
      for (const auto& [m, c] : full.terms())
        if (m.degree() == 2) q.add_term(m, c);
    }
    std::vector<std::vector<Rational>> candidates;
    for (std::size_t k = 0; k < L.size(); ++k) {
      std::vector<Rational> e(L.size(), Rational(0));
      e[k] = 1;
      candidates.push_back(e);
    }
    for (int t = 0; t < 40; ++t) {
      std::vector<Rational> e(L.size());
      for (auto& x : e) x = Rational(rng.integer(-3, 3));
      candidates.push_back(e);
    }
    std::optional<RVec> y;
    for (const auto& a : candidates) {
      if (std::all_of(a.begin(), a.end(), [](const Rational& x) { return sgn(x) == 0; })) continue;
      Rational qa = evaluate(q, a);
      if (sgn(qa) == 0) {
        y = detail::to_real_vector(a);
        break;
      }
      for (const auto& b : candidates) {
        Rational qb = evaluate(q, b);
        if (sgn(qa) * sgn(qb) >= 0) continue;
        // q(a + s b) = qa + 2 s B + s^2 qb
        std::vector<Rational> ab(L.size());
        for (std::size_t k = 0; k < L.size(); ++k) ab[k] = a[k] + b[k];
        Rational B = (evaluate(q, ab) - qa - qb) / 2;
        Rational disc = B * B - qa * qb;
        RealRadical s = (RealRadical(-B) + RealRadical::root(disc, 2)) / RealRadical(qb);
        RVec yy(L.size());
        for (std::size_t k = 0; k < L.size(); ++k) yy[k] = RealRadical(a[k]) + s * RealRadical(b[k]);
        y = yy;
        break;
      }
      if (y) break;
    }
    if (!y || !detail::is_nonzero_vector(*y)) continue;
    RVec v2(N, RealRadical(0));
    for (std::size_t k = 0; k < L.size(); ++k)
      for (std::size_t i = 0; i < N; ++i) v2[i] += (*y)[k] * RealRadical(L[k][i]);
    fam.vectors = {detail::to_real_vector(v1), v2};
    fam.method = "sequential-cubic";
    detail::fill_certificate(fam);
    if (is_orthogonal(f, fam.vectors).ok && verify_orthogonal_family(fam)) return fam;
  }
  throw BudgetExhausted("brauer_orthogonal_sequence: no isotropic direction found within budget");
}

struct OrthogonalBlocksOptions {
  bool report_strength = true;
  std::size_t strength_samples = 4;
  bool allow_empty_last = false;  // coordinate case without avoid: the last block may be empty
  std::size_t max_unknown_vectors = 4;  // all-at-once path
  std::size_t max_unknowns = 60;
};

/// n+1 mutually orthogonal subspaces for all forms (no mixed multidegree components), with the
/// avoid polynomial not identically zero on the last one. Coordinate blocks are used when the
/// monomial structure allows (blocks of 1..ell coordinates, the last block collects every
/// remaining compatible coordinate); otherwise the mixed components are solved all at once,
/// each being odd in some block.
inline OrthogonalFamily birch_orthogonal_blocks(const std::vector<QPoly>& forms, std::size_t n, std::size_t ell,
                                                const std::optional<QPoly>& avoid, const BirchField& field,
                                                const SolverBudget& budget, const OrthogonalBlocksOptions& opt = {}) {
  budget.validate();
  if (forms.empty()) throw ContractViolation("birch_orthogonal_blocks: no forms");
  if (ell == 0) throw ContractViolation("birch_orthogonal_blocks: ell must be positive");
  const std::size_t N = forms[0].num_vars();
  for (std::size_t k = 0; k < forms.size(); ++k) {
    auto d = forms[k].homogeneous_degree();
    if (forms[k].num_vars() != N) throw ContractViolation("birch_orthogonal_blocks: forms live in different spaces");
    if (!d || *d % 2 == 0)
      throw ContractViolation("form " + std::to_string(k) + " must be homogeneous of odd degree (the Birch-field method needs odd degrees)");
  }
  OrthogonalFamily fam;
  fam.forms = forms;
  auto avoid_ok = [&](const std::vector<RVec>& last) {
    if (!avoid) return true;
    return !substitute_linear(convert<RealRadical>(*avoid), last).is_zero();
  };
  if (auto blocks = detail::coordinate_blocks(forms, n, ell)) {
    auto rest = detail::complement_block(forms, *blocks);
    if (!rest.empty() || (opt.allow_empty_last && !avoid)) {
      blocks->push_back(rest);
      // the block on which avoid survives goes last
      for (std::size_t b = blocks->size(); b-- > 0;) {
        std::vector<RVec> basis;
        for (auto i : (*blocks)[b]) basis.push_back(detail::unit_vector(N, i));
        if (avoid_ok(basis)) {
          std::swap((*blocks)[b], blocks->back());
          break;
        }
      }
      for (const auto& b : *blocks) {
        std::vector<RVec> basis;
        for (auto i : b) basis.push_back(detail::unit_vector(N, i));
        fam.blocks.push_back(basis);
      }
      if (avoid_ok(fam.blocks.back())) {
        fam.method = "coordinate-blocks";
        detail::fill_certificate(fam);
        if (verify_orthogonal_family(fam)) goto report;
      }
      fam.blocks.clear();
    }
  }
  {
    // all at once: unknown vectors v_{b,k}, one variable block each
    const std::size_t blocks = n + 1, nv = blocks * ell;
    // leaves stay linear only for a couple of unknown vectors; larger cases blow up symbolically
    if (nv > opt.max_unknown_vectors || nv * N > opt.max_unknowns)
      throw BudgetExhausted("birch_orthogonal_blocks: no coordinate blocks, and the all-at-once construction is limited to " +
                            std::to_string(opt.max_unknown_vectors) + " unknown vectors (" + std::to_string(nv) + " requested in dimension " +
                            std::to_string(N) + ")");
    std::vector<QPoly> eqs;
    std::vector<std::size_t> designation;
    for (const auto& f : forms) detail::mixed_component_equations(f, N, blocks, ell, eqs, designation);
    std::vector<std::size_t> sizes(nv, N);
    // avoid: the last block must be independent and keep avoid alive; checked after solving
    SolverBudget b = budget;
    for (unsigned attempt = 0; attempt < budget.restarts; ++attempt) {
      b.seed = budget.seed + attempt * 7919;
      MultihomogeneousSolution sol;
      try {
        SolverBudget once = b;
        once.restarts = 1;
        sol = solve_multihomogeneous(eqs, BlockGrading::contiguous(sizes), designation, std::nullopt, field, once);
      } catch (const BudgetExhausted&) {
        continue;
      }
      fam.blocks.assign(blocks, {});
      for (std::size_t j = 0; j < nv; ++j)
        fam.blocks[j / ell].push_back(RVec(sol.point.begin() + static_cast<long>(j * N), sol.point.begin() + static_cast<long>((j + 1) * N)));
      if (!avoid_ok(fam.blocks.back())) continue;
      fam.method = "all-at-once:" + sol.method;
      detail::fill_certificate(fam);
      if (verify_orthogonal_family(fam)) goto report;
    }
    throw BudgetExhausted("birch_orthogonal_blocks: no orthogonal family found within " + std::to_string(budget.restarts) +
                          " restarts (dimension " + std::to_string(N) + " may be too small)");
  }
report:
  if (opt.report_strength) {
    // strength of the restriction to V_1 + ... + V_n
    std::vector<RVec> span;
    for (std::size_t b = 0; b + 1 < fam.blocks.size(); ++b) span.insert(span.end(), fam.blocks[b].begin(), fam.blocks[b].end());
    std::vector<QPoly> restricted;
    bool rational = true;
    for (const auto& f : forms) {
      RPoly g = substitute_linear(convert<RealRadical>(f), span);
      QPoly q(span.size());
      for (const auto& [m, c] : g.terms()) {
        if (!c.is_rational()) rational = false;
        else q.add_term(m, c.rational_value());
      }
      restricted.push_back(q);
    }
    if (rational) {
      fam.restriction_strength = collective_strength_bounds(restricted, budget, opt.strength_samples, 2);
    }
  }
  return fam;
}

/// v in the block with f_k(v) != 0 and f_j(v) = 0 for j != k (forms given in block coordinates).
inline RVec select_vanishing_vector(const std::vector<QPoly>& forms, std::size_t k, const BirchField& field,
                                    const SolverBudget& budget) {
  if (k >= forms.size()) throw ContractViolation("select_vanishing_vector: index out of range");
  const std::size_t n = forms[k].num_vars();
  std::vector<QPoly> others;
  for (std::size_t j = 0; j < forms.size(); ++j) {
    auto d = forms[j].homogeneous_degree();
    if (!forms[j].is_zero() && (!d || *d % 2 == 0)) throw ContractViolation("select_vanishing_vector: odd-degree forms required");
    if (j != k) others.push_back(forms[j]);
  }
  if (forms[k].is_zero()) throw BudgetExhausted("select_vanishing_vector: distinguished form vanishes on the block");
  auto sol = solve_multihomogeneous(others, BlockGrading::contiguous({n}), std::vector<std::size_t>(others.size(), 0), forms[k],
                                    field, budget);
  return sol.point;
}

}  // namespace birch

#endif  // BIRCH_ORTHOGONAL_HPP
