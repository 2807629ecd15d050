#ifndef BIRCH_NORMAL_FORM_HPP
#define BIRCH_NORMAL_FORM_HPP

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "birch/diagonal.hpp"
#include "birch/orthogonal.hpp"
#include "birch/regularize.hpp"
#include "birch/specialize.hpp"

namespace birch {

/// Block of one form: f_i on span(v, w, u) is x y^{d-1} + a y^d + b z^d.
struct NormalFormIndex {
  unsigned degree = 0;
  RVec v, w, u;                   // ambient coordinates
  RealRadical a, b;
  std::vector<RVec> basis;        // orthogonal vectors spanning V_i
  std::vector<Rational> diagonal; // f_i on the basis
};

struct NormalFormData {
  std::vector<QPoly> forms;
  std::vector<NormalFormIndex> indices;
  std::vector<RVec> w_basis;   // W
  std::vector<RPoly> h;        // h_i in the coordinates of W
  std::optional<QPoly> avoid;
  std::vector<RealRadical> avoid_witness;  // parameters with avoid != 0
  std::vector<std::string> provenance;

  std::size_t ambient() const { return forms.empty() ? 0 : forms[0].num_vars(); }
  std::size_t parameter_count() const { return 2 * indices.size() + w_basis.size(); }

  /// v_1, w_1, u_1, ..., v_r, w_r, u_r, then W.
  std::vector<RVec> columns() const {
    std::vector<RVec> out;
    for (const auto& ix : indices) {
      out.push_back(ix.v);
      out.push_back(ix.w);
      out.push_back(ix.u);
    }
    out.insert(out.end(), w_basis.begin(), w_basis.end());
    return out;
  }
};

/// The restriction of f_i to V' is x_i y_i^{d-1} + a_i y_i^d + b_i z_i^d + h_i(w), coefficientwise.
inline CheckResult verify_normal_form(const NormalFormData& nf) {
  const std::size_t r = nf.indices.size();
  if (nf.forms.size() != r || nf.h.size() != r) return CheckResult::fail("arity");
  const auto cols = nf.columns();
  if (rank(Matrix<RealRadical>(cols)) != cols.size()) return CheckResult::fail("blocks-dependent");
  const std::size_t k = nf.w_basis.size(), total = 3 * r + k;
  std::vector<std::size_t> wmap;
  for (std::size_t j = 0; j < k; ++j) wmap.push_back(3 * r + j);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& ix = nf.indices[i];
    const std::string tag = "index-" + std::to_string(i);
    if (ix.b.is_zero()) return CheckResult::fail(tag + "-b-zero");
    if (nf.h[i].num_vars() != k) return CheckResult::fail(tag + "-h-context");
    RPoly expected = reindex(nf.h[i], wmap, total);
    const unsigned d = ix.degree;
    expected.add_term(Monomial::variable(3 * i) * Monomial::variable(3 * i + 1, d - 1), RealRadical(1));
    expected.add_term(Monomial::variable(3 * i + 1, d), ix.a);
    expected.add_term(Monomial::variable(3 * i + 2, d), ix.b);
    if (!(substitute_linear(convert<RealRadical>(nf.forms[i]), cols) == expected)) return CheckResult::fail(tag + "-pattern-mismatch");
  }
  return {};
}

/// A point on Z with its exact residuals.
struct SolutionCertificate {
  RVec point;
  std::vector<RealRadical> residuals;
  std::optional<RealRadical> avoid_value;
  std::vector<RealRadical> parameters;  // (y, z, w) when produced by the parametrization
  std::string stage;
};

inline SolutionCertificate certify_point(const std::vector<QPoly>& forms, RVec point, const std::optional<QPoly>& avoid,
                                         std::string stage) {
  if (!detail::is_nonzero_vector(point)) throw BudgetExhausted(stage + ": produced the zero vector");
  SolutionCertificate cert;
  cert.point = std::move(point);
  cert.stage = std::move(stage);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    cert.residuals.push_back(evaluate(convert<RealRadical>(forms[i]), cert.point));
    if (!cert.residuals.back().is_zero())
      throw ContractViolation(cert.stage + ": equation " + std::to_string(i + 1) + " does not vanish at the produced point");
  }
  if (avoid) cert.avoid_value = evaluate(convert<RealRadical>(*avoid), cert.point);
  return cert;
}

namespace detail {

/// Runs fn, prefixing any solver error with the stage that raised it.
template <class F>
auto staged(const std::string& stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ContractViolation& e) {
    throw ContractViolation(stage + ": " + e.what());
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted(stage + ": " + e.what());
  } catch (const UnsupportedInstance& e) {
    throw UnsupportedInstance(stage + ": " + e.what());
  }
}

/// Orthogonal vectors needed per form: 2 blocks of the field's diagonal bound plus one for z.
inline std::size_t vectors_needed(unsigned d, const BirchField& field) {
  if (d == 1) return 3;
  const std::size_t m = field.nk_bound(d) ? field.nk_bound(d)->get_ui() : 3;
  const std::size_t blocks = d == 3 ? 2 : d - 1;
  return blocks * m + 1;
}

inline RVec combine(const std::vector<RVec>& basis, const RVec& coords, std::size_t n) {
  RVec out(n, RealRadical(0));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (coords[k].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (!basis[k][j].is_zero()) out[j] = out[j] + coords[k] * basis[k][j];
  }
  return out;
}

inline std::optional<QPoly> rational_restriction(const QPoly& f, const std::vector<RVec>& basis) {
  RPoly g = substitute_linear(convert<RealRadical>(f), basis);
  QPoly q(basis.size());
  for (const auto& [m, c] : g.terms()) {
    if (!c.is_rational()) return std::nullopt;
    q.add_term(m, c.rational_value());
  }
  return q;
}

}  // namespace detail

/// Point of the parametrization at (y_1..y_r, z_1..z_r, w): x_i = -(a_i y_i^d + b_i z_i^d + h_i(w)) / y_i^{d-1}.
inline RVec parametrized_point(const NormalFormData& nf, const std::vector<RealRadical>& params) {
  const std::size_t r = nf.indices.size(), k = nf.w_basis.size(), n = nf.ambient();
  if (params.size() != 2 * r + k) throw ContractViolation("parametrized_point: expected " + std::to_string(2 * r + k) + " parameters");
  RVec wv(params.begin() + static_cast<long>(2 * r), params.end());
  RVec point(n, RealRadical(0));
  auto axpy = [&](const RealRadical& s, const RVec& v) {
    if (s.is_zero()) return;
    for (std::size_t j = 0; j < n; ++j)
      if (!v[j].is_zero()) point[j] = point[j] + s * v[j];
  };
  for (std::size_t i = 0; i < r; ++i) {
    const auto& ix = nf.indices[i];
    const RealRadical& y = params[i];
    const RealRadical& z = params[r + i];
    if (y.is_zero()) throw ContractViolation("parametrized_point: y_" + std::to_string(i + 1) + " must be nonzero");
    RealRadical s = ix.a * ipow_radical(y, ix.degree) + ix.b * ipow_radical(z, ix.degree) + evaluate(nf.h[i], wv);
    RealRadical x = -(s / ipow_radical(y, ix.degree - 1));
    axpy(x, ix.v);
    axpy(y, ix.w);
    axpy(z, ix.u);
  }
  for (std::size_t j = 0; j < k; ++j) axpy(wv[j], nf.w_basis[j]);
  return point;
}

inline std::vector<RealRadical> canonical_parameters(const NormalFormData& nf) {
  std::vector<RealRadical> p(nf.parameter_count(), RealRadical(0));
  for (std::size_t i = 0; i < nf.indices.size(); ++i) p[i] = RealRadical(1);
  return p;
}

struct NormalFormOptions {
  std::size_t ell = 3;
  std::size_t extra_blocks = 0;  // requested beyond the per-form minimum
};

/// Orthogonal blocks, one vanishing vector per block assigned to a form, per-form diagonal
/// specialization with an added z-term, and W as the last block.
inline NormalFormData normal_form(const std::vector<QPoly>& forms, const std::optional<QPoly>& avoid, const BirchField& field,
                                  const SolverBudget& budget, const NormalFormOptions& opt = {}) {
  budget.validate();
  if (forms.empty()) throw ContractViolation("normal_form: no forms");
  if (field.kind == FieldKind::RealFunctionField)
    throw UnsupportedInstance("normal_form over " + field.to_string() + " is not supported; diagonal inputs go through solve_diagonal");
  const std::size_t n = forms[0].num_vars();
  std::vector<unsigned> degrees;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    auto d = forms[i].homogeneous_degree();
    if (forms[i].is_zero() || !d || *d % 2 == 0)
      throw ContractViolation("form " + std::to_string(i + 1) + " must be a nonzero homogeneous form of odd degree (the Birch-field method needs odd degrees)");
    degrees.push_back(*d);
  }
  std::vector<std::size_t> need;
  std::size_t total = opt.extra_blocks;
  for (auto d : degrees) {
    need.push_back(detail::vectors_needed(d, field));
    total += need.back();
  }
  OrthogonalBlocksOptions bopt;
  bopt.report_strength = false;
  bopt.allow_empty_last = true;
  OrthogonalFamily fam = detail::staged("orthogonal-blocks", [&] { return birch_orthogonal_blocks(forms, total, opt.ell, avoid, field, budget, bopt); });

  NormalFormData nf;
  nf.forms = forms;
  nf.avoid = avoid;
  nf.provenance.push_back("orthogonal-blocks:" + fam.method);
  std::vector<std::vector<RVec>> assigned(forms.size());
  std::vector<std::vector<Rational>> coeff(forms.size());
  detail::staged("select-vanishing-vector", [&] {
    for (std::size_t b = 0; b + 1 < fam.blocks.size(); ++b) {
      std::vector<QPoly> restricted;
      for (const auto& f : forms) {
        auto q = detail::rational_restriction(f, fam.blocks[b]);
        if (!q) throw UnsupportedInstance("block " + std::to_string(b) + " restricts to irrational coefficients");
        restricted.push_back(*q);
      }
      // the form with the largest remaining need first
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < forms.size(); ++i)
        if (assigned[i].size() < need[i]) order.push_back(i);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return need[x] - assigned[x].size() > need[y] - assigned[y].size(); });
      for (auto i : order) {
        if (restricted[i].is_zero()) continue;
        RVec local;
        try {
          SolverBudget sb = budget;
          sb.seed = budget.seed + 101 * b;
          local = select_vanishing_vector(restricted, i, field, sb);
        } catch (const BudgetExhausted&) {
          continue;
        }
        RVec v = detail::combine(fam.blocks[b], local, n);
        RealRadical c = evaluate(convert<RealRadical>(forms[i]), v);
        if (!c.is_rational()) continue;
        assigned[i].push_back(v);
        coeff[i].push_back(c.rational_value());
        break;
      }
    }
    for (std::size_t i = 0; i < forms.size(); ++i)
      if (assigned[i].size() < need[i])
        throw BudgetExhausted("form " + std::to_string(i + 1) + " received " + std::to_string(assigned[i].size()) + " of " +
                              std::to_string(need[i]) + " orthogonal vectors");
    return 0;
  });
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const unsigned d = degrees[i];
    DiagonalNormalization dn = detail::staged("specialize-diagonal", [&] {
      std::vector<Rational> head(coeff[i].begin(), coeff[i].end() - 1);
      SolverBudget sb = budget;
      sb.seed = budget.seed + 7 * i;
      return add_diagonal_term(coeff[i], d, specialize_diagonal(head, d, field, sb));
    });
    NormalFormIndex ix;
    ix.degree = d;
    ix.basis = assigned[i];
    ix.diagonal = coeff[i];
    ix.v = detail::combine(ix.basis, dn.v, n);
    ix.w = detail::combine(ix.basis, dn.w, n);
    ix.u = detail::combine(ix.basis, dn.u, n);
    ix.a = dn.a;
    ix.b = dn.b;
    nf.indices.push_back(ix);
  }
  nf.w_basis = fam.blocks.back();
  for (const auto& f : forms) nf.h.push_back(substitute_linear(convert<RealRadical>(f), nf.w_basis));
  nf.provenance.push_back("specialize-diagonal+add-diagonal-term");
  if (auto chk = verify_normal_form(nf); !chk) throw ContractViolation("normal_form: verification failed (" + chk.reason + ")");

  nf.avoid_witness = canonical_parameters(nf);
  if (avoid) {
    const RPoly g = convert<RealRadical>(*avoid);
    Rng rng(budget.seed, 0xa701);
    bool found = !evaluate(g, parametrized_point(nf, nf.avoid_witness)).is_zero();
    for (unsigned t = 0; !found && t < budget.restarts * 4; ++t) {
      for (std::size_t j = 0; j < nf.avoid_witness.size(); ++j)
        nf.avoid_witness[j] = RealRadical(j < nf.indices.size() ? Rational(rng.nonzero(3)) : Rational(rng.integer(-3, 3)));
      found = !evaluate(g, parametrized_point(nf, nf.avoid_witness)).is_zero();
    }
    if (!found) throw BudgetExhausted("normal_form: avoid polynomial vanished on every sampled point of Z within V'");
  }
  return nf;
}

/// count distinct points: the canonical one (y = 1, z = 0, w = 0) first, then seeded parameters
/// with y_i nonzero. Points where avoid vanishes are skipped.
inline std::vector<SolutionCertificate> sample_points(const NormalFormData& nf, std::size_t count, std::uint64_t seed) {
  std::vector<SolutionCertificate> out;
  std::set<std::vector<std::string>> seen;
  Rng rng(seed, 0x5a3e);
  const std::size_t r = nf.indices.size();
  std::size_t attempts = 0;
  long range = 2;
  while (out.size() < count) {
    std::vector<RealRadical> params;
    if (attempts == 0) {
      params = canonical_parameters(nf);
    } else {
      for (std::size_t j = 0; j < nf.parameter_count(); ++j)
        params.push_back(RealRadical(j < r ? Rational(rng.nonzero(range)) : Rational(rng.integer(-range, range))));
    }
    if (++attempts % 64 == 0) ++range;
    if (attempts > 100 * (count + 10)) throw BudgetExhausted("sample_points: could not produce distinct points");
    RVec p = parametrized_point(nf, params);
    std::vector<std::string> key;
    for (const auto& x : p) key.push_back(to_string(x));
    if (seen.count(key)) continue;
    if (nf.avoid && evaluate(convert<RealRadical>(*nf.avoid), p).is_zero()) continue;
    seen.insert(key);
    auto cert = certify_point(nf.forms, std::move(p), nf.avoid, "normal-form>parametrization");
    cert.parameters = params;
    out.push_back(std::move(cert));
  }
  return out;
}

/// Exact Jacobian of the parametrization; one column per parameter (y, z, w).
inline std::vector<RVec> parametrization_jacobian(const NormalFormData& nf, const std::vector<RealRadical>& params) {
  const std::size_t r = nf.indices.size(), k = nf.w_basis.size(), n = nf.ambient();
  if (params.size() != 2 * r + k) throw ContractViolation("parametrization_jacobian: wrong parameter count");
  RVec wv(params.begin() + static_cast<long>(2 * r), params.end());
  std::vector<RVec> cols(2 * r + k, RVec(n, RealRadical(0)));
  auto axpy = [&](RVec& col, const RealRadical& s, const RVec& v) {
    if (s.is_zero()) return;
    for (std::size_t j = 0; j < n; ++j)
      if (!v[j].is_zero()) col[j] = col[j] + s * v[j];
  };
  for (std::size_t i = 0; i < r; ++i) {
    const auto& ix = nf.indices[i];
    const unsigned d = ix.degree;
    const RealRadical &y = params[i], &z = params[r + i];
    const RealRadical rest = ix.b * ipow_radical(z, d) + evaluate(nf.h[i], wv);
    // x = -a y - rest y^{1-d}
    axpy(cols[i], -ix.a + RealRadical(Rational(d - 1)) * rest / ipow_radical(y, d), ix.v);
    axpy(cols[i], RealRadical(1), ix.w);
    axpy(cols[r + i], -(RealRadical(Rational(d)) * ix.b * ipow_radical(z, d - 1) / ipow_radical(y, d - 1)), ix.v);
    axpy(cols[r + i], RealRadical(1), ix.u);
    for (std::size_t j = 0; j < k; ++j) {
      RealRadical dh = evaluate(derivative(nf.h[i], j), wv);
      axpy(cols[2 * r + j], -(dh / ipow_radical(y, d - 1)), ix.v);
    }
  }
  for (std::size_t j = 0; j < k; ++j) axpy(cols[2 * r + j], RealRadical(1), nf.w_basis[j]);
  return cols;
}

/// The parametrization in floating point, for finite-difference checks.
inline std::vector<double> parametrized_point_double(const NormalFormData& nf, const std::vector<double>& params) {
  const std::size_t r = nf.indices.size(), k = nf.w_basis.size(), n = nf.ambient();
  std::vector<double> point(n, 0.0);
  auto eval_h = [&](const RPoly& h) {
    double s = 0;
    for (const auto& [m, c] : h.terms()) {
      double t = c.to_double();
      for (std::size_t j = 0; j < k; ++j) t *= std::pow(params[2 * r + j], static_cast<double>(m[j]));
      s += t;
    }
    return s;
  };
  for (std::size_t i = 0; i < r; ++i) {
    const auto& ix = nf.indices[i];
    const double d = ix.degree, y = params[i], z = params[r + i];
    const double x = -(ix.a.to_double() * std::pow(y, d) + ix.b.to_double() * std::pow(z, d) + eval_h(nf.h[i])) / std::pow(y, d - 1);
    for (std::size_t j = 0; j < n; ++j) point[j] += x * ix.v[j].to_double() + y * ix.w[j].to_double() + z * ix.u[j].to_double();
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < n; ++t) point[t] += params[2 * r + j] * nf.w_basis[j][t].to_double();
  return point;
}

struct JacobianCheck {
  std::size_t rank = 0;
  std::size_t expected = 0;
  double max_relative_error = 0;
  bool ok(double tol) const { return rank == expected && max_relative_error <= tol; }
};

/// Exact rank of the Jacobian and its agreement with central differences.
inline JacobianCheck check_parametrization_jacobian(const NormalFormData& nf, const std::vector<RealRadical>& params) {
  JacobianCheck out;
  out.expected = nf.parameter_count();
  const auto cols = parametrization_jacobian(nf, params);
  out.rank = rank(Matrix<RealRadical>(cols));
  std::vector<double> p;
  for (const auto& x : params) p.push_back(x.to_double());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double h = 1e-5 * std::max(1.0, std::abs(p[c]));
    auto plus = p, minus = p;
    plus[c] += h;
    minus[c] -= h;
    auto fp = parametrized_point_double(nf, plus), fm = parametrized_point_double(nf, minus);
    double scale = 0, err = 0;
    for (std::size_t j = 0; j < fp.size(); ++j) {
      const double exact = cols[c][j].to_double();
      scale = std::max(scale, std::abs(exact));
      err = std::max(err, std::abs((fp[j] - fm[j]) / (2 * h) - exact));
    }
    out.max_relative_error = std::max(out.max_relative_error, err / std::max(scale, 1e-300));
  }
  return out;
}

namespace detail {

/// Diagonal zero with avoid(x) != 0: coordinate pairs first, then seeded points solved for one coordinate.
inline std::optional<RVec> diagonal_zero_avoiding(const std::vector<Rational>& c, unsigned d, const BirchField& field,
                                                 const std::optional<QPoly>& avoid, const SolverBudget& budget) {
  const std::size_t n = c.size();
  std::optional<RPoly> g;
  if (avoid) g = convert<RealRadical>(*avoid);
  auto good = [&](const RVec& x) { return is_nonzero_vector(x) && (!g || !evaluate(*g, x).is_zero()); };
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(c[i]) == 0) {
      RVec x(n, RealRadical(0));
      x[i] = RealRadical(1);
      if (good(x)) return x;
    }
  std::vector<std::size_t> nz;
  std::vector<Rational> cn;
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(c[i]) != 0) nz.push_back(i), cn.push_back(c[i]);
  if (field.kind == FieldKind::Rationals) {
    if (nz.size() < 2) return std::nullopt;
    auto lift = [&](const std::vector<Rational>& y) {
      RVec x(n, RealRadical(0));
      for (std::size_t t = 0; t < nz.size(); ++t) x[nz[t]] = RealRadical(y[t]);
      return x;
    };
    auto y = solve_diagonal_rational({cn, d}, budget, [&](const std::vector<Rational>& y) { return good(lift(y)); });
    if (!y) return std::nullopt;
    return lift(*y);
  }
  if (nz.size() < 2) return std::nullopt;
  for (std::size_t i = 0; i < nz.size(); ++i)
    for (std::size_t j = 0; j < nz.size(); ++j) {
      if (i == j) continue;
      RVec x(n, RealRadical(0));
      x[nz[i]] = RealRadical(1);
      x[nz[j]] = RealRadical::root(-cn[i] / cn[j], d);
      if (good(x)) return x;
    }
  Rng rng(budget.seed, 0xd1a6);
  for (unsigned t = 0; t < budget.restarts; ++t) {
    RVec x(n, RealRadical(0));
    const std::size_t k = nz[t % nz.size()];
    Rational s = 0;
    for (auto i : nz) {
      if (i == k) continue;
      Rational v(rng.integer(-3, 3));
      x[i] = RealRadical(v);
      s += c[i] * pow(v, d);
    }
    x[k] = RealRadical::root(-s / c[k], d);
    if (good(x)) return x;
  }
  return std::nullopt;
}

}  // namespace detail

struct SolveOptions {
  bool regularize = false;
  StrengthThreshold threshold;  // used when regularize is set
  NormalFormOptions normal_form;
};

/// Diagonal single forms go to the diagonal solver; everything else through normal_form and
/// back-substitution with y_i = 1, z_i = 0, w = 0 (or the avoid witness).
inline SolutionCertificate solve_system(const std::vector<QPoly>& forms, const std::optional<QPoly>& avoid, const BirchField& field,
                                        const SolverBudget& budget, const SolveOptions& opt = {}) {
  budget.validate();
  if (forms.empty()) throw ContractViolation("solve_system: no forms");
  const std::size_t n = forms[0].num_vars();
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].num_vars() != n) throw ContractViolation("solve_system: forms live in different spaces");
    auto d = forms[i].homogeneous_degree();
    if (!forms[i].is_zero() && (!d || *d % 2 == 0))
      throw ContractViolation("equation " + std::to_string(i + 1) + " must be homogeneous of odd degree (the Birch-field method needs odd degrees)");
  }
  if (avoid && avoid->num_vars() != n) throw ContractViolation("solve_system: avoid polynomial lives in a different space");
  if (field.kind == FieldKind::RealFunctionField)
    throw UnsupportedInstance("solve_system over " + field.to_string() + " handles diagonal equations only; use solve_diagonal");
  std::vector<QPoly> nonzero;
  for (const auto& f : forms)
    if (!f.is_zero()) nonzero.push_back(f);
  if (nonzero.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      RVec x(n, RealRadical(0));
      x[i] = RealRadical(1);
      if (!avoid || !evaluate(convert<RealRadical>(*avoid), x).is_zero()) return certify_point(forms, x, avoid, "trivial");
    }
  }
  if (nonzero.size() == 1 && diagonal_support(nonzero[0])) {
    const QPoly& f = nonzero[0];
    const unsigned d = *f.homogeneous_degree();
    std::vector<Rational> c(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) c[i] = f.coefficient(Monomial::variable(i, d));
    auto x = detail::diagonal_zero_avoiding(c, d, field, avoid, budget);
    if (!x) throw BudgetExhausted("diagonal: no zero found within height bound " + budget.height_bound.get_str());
    return certify_point(forms, *x, avoid, field.kind == FieldKind::Rationals ? "diagonal:rational-search" : "diagonal:real-closed-form");
  }
  std::vector<QPoly> system = nonzero;
  std::string stage = "normal-form>back-substitution";
  if (opt.regularize) {
    if (!opt.threshold) throw ContractViolation("solve_system: regularization needs a threshold");
    auto reg = detail::staged("regularize", [&] { return regularize(nonzero, opt.threshold, budget); });
    system = reg.generators;
    stage = "regularize>" + stage;
  }
  NormalFormData nf = detail::staged("normal-form", [&] { return normal_form(system, avoid, field, budget, opt.normal_form); });
  RVec p = parametrized_point(nf, nf.avoid_witness);
  auto cert = detail::staged("back-substitution", [&] { return certify_point(forms, p, avoid, stage); });
  cert.parameters = nf.avoid_witness;
  return cert;
}

/// Zero of the affine polynomial g: homogenize with a fresh last variable x', G = x'^d g(x / x'),
/// solve G = 0 with x' != 0 and scale so that x' = 1. For g = sum a_i x_i^d - 1 this is the
/// diagonal form sum a_i x_i^d - x'^d.
inline SolutionCertificate solve_affine(const QPoly& g, const BirchField& field, const SolverBudget& budget, const SolveOptions& opt = {}) {
  if (g.total_degree() <= 0) throw ContractViolation("solve_affine: polynomial must have positive degree");
  const unsigned d = static_cast<unsigned>(g.total_degree());
  if (d % 2 == 0) throw ContractViolation("solve_affine: degree " + std::to_string(d) + " is even; Birch fields need odd degrees");
  const std::size_t n = g.num_vars();
  QPoly G(n + 1);
  for (const auto& [m, c] : g.terms()) G.add_term(m * Monomial::variable(n, d - m.degree()), c);
  QPoly last = QPoly::variable(n + 1, n);
  auto hom = detail::staged("affine-homogenized", [&] { return solve_system({G}, last, field, budget, opt); });
  const RealRadical inv = RealRadical(1) / hom.point[n];
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = hom.point[i] * inv;
  SolutionCertificate cert;
  cert.point = x;
  cert.stage = "affine>" + hom.stage;
  cert.residuals.push_back(evaluate(convert<RealRadical>(g), x));
  if (!cert.residuals.back().is_zero()) throw ContractViolation("affine: scaled point does not satisfy the equation");
  return cert;
}

}  // namespace birch

#endif  // BIRCH_NORMAL_FORM_HPP
