#ifndef BIRCH_STRENGTH_HPP
#define BIRCH_STRENGTH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "birch/fields.hpp"
#include "birch/linalg.hpp"
#include "birch/poly_gcd.hpp"
#include "birch/real_solver.hpp"

namespace birch {

/// Multiset of degrees, kept sorted descending; ordered lexicographically on that form.
class DegreeTuple {
 public:
  DegreeTuple() = default;
  explicit DegreeTuple(std::vector<unsigned> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), std::greater<>());
  }
  DegreeTuple(std::initializer_list<unsigned> e) : DegreeTuple(std::vector<unsigned>(e)) {}

  const std::vector<unsigned>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator<(const DegreeTuple& a, const DegreeTuple& b) {
    return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end());
  }
  bool operator==(const DegreeTuple&) const = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) s += (i ? "," : "") + std::to_string(entries_[i]);
    return s + ")";
  }

 private:
  std::vector<unsigned> entries_;
};

inline bool degree_tuple_less(const DegreeTuple& a, const DegreeTuple& b) { return a < b; }

template <Scalar K>
DegreeTuple degree_tuple_of(const std::vector<Polynomial<K>>& forms) {
  std::vector<unsigned> d;
  for (const auto& f : forms) d.push_back(static_cast<unsigned>(std::max(0, f.total_degree())));
  return DegreeTuple(d);
}

/// f = sum g_i h_i with every factor homogeneous of positive degree below deg f.
template <Scalar K>
struct DecompositionCertificate {
  Polynomial<K> target;
  std::vector<std::pair<Polynomial<K>, Polynomial<K>>> pairs;

  std::size_t size() const { return pairs.size(); }
};

struct CheckResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
  static CheckResult fail(std::string r) { return {false, std::move(r)}; }
};

template <Scalar K>
CheckResult verify_decomposition(const DecompositionCertificate<K>& cert) {
  const auto& f = cert.target;
  auto d = f.homogeneous_degree();
  if (!f.is_zero() && !d) return CheckResult::fail("target-not-homogeneous");
  Polynomial<K> acc(f.num_vars());
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    const auto& [g, h] = cert.pairs[i];
    if (g.num_vars() != f.num_vars() || h.num_vars() != f.num_vars())
      return CheckResult::fail("pair-" + std::to_string(i) + "-context-mismatch");
    auto dg = g.homogeneous_degree(), dh = h.homogeneous_degree();
    if (!dg || !dh) return CheckResult::fail("pair-" + std::to_string(i) + "-not-homogeneous");
    if (d && (*dg == 0 || *dh == 0 || *dg >= *d || *dh >= *d || *dg + *dh != *d))
      return CheckResult::fail("pair-" + std::to_string(i) + "-degree-constraint");
    acc += g * h;
  }
  if (!(acc == f)) return CheckResult::fail("sum-mismatch");
  return {};
}

/// Gram matrix of a quadratic form: G_ii = coeff(x_i^2), G_ij = coeff(x_i x_j)/2.
template <FieldScalar K>
Matrix<K> gram_matrix(const Polynomial<K>& q) {
  const std::size_t n = q.num_vars();
  Matrix<K> G(n, std::vector<K>(n, K(Rational(0))));
  for (const auto& [m, c] : q.terms()) {
    if (m.degree() != 2) throw ContractViolation("gram_matrix: form is not quadratic");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m.support_size(); ++i)
      for (unsigned e = 0; e < m[i]; ++e) idx.push_back(i);
    if (idx[0] == idx[1])
      G[idx[0]][idx[0]] = c;
    else {
      K half = K(c * K(Rational(1, 2)));
      G[idx[0]][idx[1]] = half;
      G[idx[1]][idx[0]] = half;
    }
  }
  return G;
}

namespace detail {

/// Rank of 2G by fraction-free elimination in 128-bit integers, when Hadamard's bound on every
/// minor (squared, since Bareiss multiplies two of them) fits. Integer coefficients only.
inline std::optional<std::size_t> small_integer_gram_rank(const QPoly& q) {
  const std::size_t n = q.num_vars();
  long M = 1;
  for (const auto& [m, c] : q.terms()) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return std::nullopt;
    M = std::max(M, 2 * std::labs(c.get_num().get_si()));
    if (M > (1L << 20)) return std::nullopt;
  }
  if (2.0 * static_cast<double>(n) * (0.5 * std::log2(static_cast<double>(n)) + std::log2(static_cast<double>(M))) > 120.0)
    return std::nullopt;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n, 0));
  for (const auto& [m, c] : q.terms()) {
    std::size_t i = n, j = n;
    for (std::size_t v = 0; v < m.support_size(); ++v)
      for (unsigned e = 0; e < m[v]; ++e) (i == n ? i : j) = v;
    long v = c.get_num().get_si();
    if (i == j)
      a[i][i] = 2 * v;
    else
      a[i][j] = a[j][i] = v;
  }
  __int128 prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < n; ++col) {
    std::size_t p = r;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[r][col];
    ++r;
  }
  return r;
}

}  // namespace detail

/// Absolute strength of a quadratic form: ceil(rank / 2). A lower bound for strength over K.
template <FieldScalar K>
unsigned quadratic_strength(const Polynomial<K>& q) {
  if (q.is_zero()) return 0;
  auto d = q.homogeneous_degree();
  if (!d || *d != 2) throw ContractViolation("quadratic_strength: input must be a quadratic form");
  std::size_t r;
  if constexpr (std::is_same_v<K, Rational>) {
    auto fast = detail::small_integer_gram_rank(q);
    r = fast ? *fast : rank(gram_matrix(q));
  } else {
    r = rank(gram_matrix(q));
  }
  return static_cast<unsigned>((r + 1) / 2);
}

struct StrengthBounds {
  std::optional<Rational> lower;             // absent: no certificate applies
  std::optional<unsigned long> upper;        // absent: infinity
  bool lower_infinite = false;
  std::string lower_provenance = "none";
  std::string upper_provenance = "none";
};

/// Lower bound n/2 for sum c_i x_i^d: its gradient (d c_i x_i^{d-1}) only vanishes at the origin, so the
/// singular locus has codimension n, and codimension is at most twice the strength.
inline StrengthBounds diagonal_strength_lower(const DiagonalEquation<Rational>& eq) {
  for (const auto& c : eq.coefficients)
    if (sgn(c) == 0) throw ContractViolation("diagonal_strength_lower: coefficients must be nonzero");
  if (eq.coefficients.empty() || eq.degree == 0) throw ContractViolation("diagonal_strength_lower: empty form");
  StrengthBounds b;
  if (eq.degree == 1) {
    b.lower_infinite = true;
    b.lower_provenance = "nonzero-linear-form";
    return b;
  }
  b.lower = Rational(Integer(static_cast<long>(eq.coefficients.size())), Integer(2));
  b.lower->canonicalize();
  b.lower_provenance = "singular-locus-codimension";
  return b;
}

/// Recognizes sum c_i x_i^d (all listed variables with nonzero coefficient) and returns the support.
inline std::optional<std::vector<std::size_t>> diagonal_support(const QPoly& f) {
  auto d = f.homogeneous_degree();
  if (!d || f.is_zero()) return std::nullopt;
  std::vector<std::size_t> support;
  for (const auto& [m, c] : f.terms()) {
    std::size_t nz = 0, var = 0;
    for (std::size_t i = 0; i < m.support_size(); ++i)
      if (m[i] > 0) ++nz, var = i;
    if (nz != 1) return std::nullopt;
    support.push_back(var);
  }
  std::sort(support.begin(), support.end());
  return support;
}

namespace detail {

/// Real roots of a univariate rational polynomial that happen to be rational.
inline std::vector<Rational> rational_roots(const std::vector<Rational>& coeffs) {
  std::vector<Rational> c = coeffs;
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
  std::vector<Rational> out;
  if (c.size() < 2) return out;
  std::size_t shift = 0;
  while (sgn(c[shift]) == 0) ++shift;
  if (shift > 0) {
    out.push_back(Rational(0));
    c.erase(c.begin(), c.begin() + static_cast<long>(shift));
  }
  if (c.size() < 2) return out;
  Integer L = 1;
  for (const auto& x : c) L = lcm(L, Integer(x.get_den()));
  Integer lead = abs(Integer(c.back() * L));
  const std::size_t deg = c.size() - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 0; i + 1 < deg; ++i) comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1;
  for (std::size_t i = 0; i < deg; ++i)
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -Rational(c[i] / c.back()).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    auto z = es.eigenvalues()[k];
    if (std::abs(z.imag()) > 1e-6 * (1 + std::abs(z.real()))) continue;
    Rational q = rationalize(z.real(), lead);
    if (sgn(horner(c, q)) == 0 && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// With y_{D_j} = x_{D_j} - sum_k M_{jk} x_{F_k}: f vanishes on {y_D = 0}, so f = sum_j y_{D_j} H_j.
inline std::optional<std::vector<std::pair<QPoly, QPoly>>> split_on_subspace(const QPoly& f,
                                                                             const std::vector<std::size_t>& D,
                                                                             const std::vector<std::size_t>& F,
                                                                             const Matrix<Rational>& M) {
  const std::size_t n = f.num_vars();
  std::vector<QPoly> to_y(n, QPoly(n)), to_x(n, QPoly(n));
  std::vector<QPoly> ell(D.size(), QPoly(n));
  for (auto k : F) {
    to_y[k] = QPoly::variable(n, k);
    to_x[k] = QPoly::variable(n, k);
  }
  for (std::size_t j = 0; j < D.size(); ++j) {
    QPoly img = QPoly::variable(n, D[j]);
    ell[j] = QPoly::variable(n, D[j]);
    for (std::size_t k = 0; k < F.size(); ++k) {
      if (sgn(M[j][k]) == 0) continue;
      img += QPoly::variable(n, F[k]).scaled(M[j][k]);
      ell[j] -= QPoly::variable(n, F[k]).scaled(M[j][k]);
    }
    to_y[D[j]] = img;
    to_x[D[j]] = ell[j];
  }
  QPoly G = substitute(f, to_y, n);
  std::vector<QPoly> H(D.size(), QPoly(n));
  for (const auto& [m, c] : G.terms()) {
    bool placed = false;
    for (std::size_t j = 0; j < D.size() && !placed; ++j) {
      if (m[D[j]] == 0) continue;
      H[j].add_term(Monomial::variable(D[j]).quotient_of(m), c);
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  std::vector<std::pair<QPoly, QPoly>> pairs;
  for (std::size_t j = 0; j < D.size(); ++j) {
    if (H[j].is_zero()) continue;
    pairs.emplace_back(ell[j], substitute(H[j], to_x, n));
  }
  return pairs;
}

inline std::optional<std::pair<QPoly, QPoly>> monomial_content_split(const QPoly& f) {
  const std::size_t n = f.num_vars();
  for (std::size_t i = 0; i < n; ++i) {
    bool all = !f.is_zero();
    for (const auto& [m, c] : f.terms()) all = all && m[i] > 0;
    if (!all) continue;
    QPoly h(n);
    for (const auto& [m, c] : f.terms()) h.add_term(Monomial::variable(i).quotient_of(m), c);
    return std::make_pair(QPoly::variable(n, i), h);
  }
  return std::nullopt;
}

/// Rational linear factor via plane restrictions of f(A y) for a unipotent A with f(A e_1) != 0.
inline std::optional<QPoly> find_linear_factor(const QPoly& f, Rng& rng, std::size_t cap = 20000) {
  const std::size_t n = f.num_vars();
  auto d = f.homogeneous_degree();
  if (!d || *d < 1 || f.is_zero()) return std::nullopt;
  if (n == 1) return QPoly::variable(1, 0);
  std::vector<Rational> a(n, Rational(0));
  for (int attempt = 0;; ++attempt) {
    std::vector<Rational> col(n);
    col[0] = 1;
    for (std::size_t j = 1; j < n; ++j) col[j] = a[j];
    if (sgn(evaluate(f, col)) != 0) break;
    if (attempt > 50) return std::nullopt;
    for (std::size_t j = 1; j < n; ++j) a[j] = Rational(rng.integer(-3, 3));
  }
  // g(y) = f(y_1, y_j + a_j y_1)
  std::vector<QPoly> images(n, QPoly(n));
  images[0] = QPoly::variable(n, 0);
  for (std::size_t j = 1; j < n; ++j) images[j] = QPoly::variable(n, j) + QPoly::variable(n, 0).scaled(a[j]);
  QPoly g = substitute(f, images, n);
  std::vector<std::vector<Rational>> cand(n);
  std::size_t combos = 1;
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Rational> e1(n, Rational(0)), ej(n, Rational(0));
    e1[0] = 1;
    ej[j] = 1;
    auto h = line_restriction(g, ej, e1);  // t -> g(t e_1 + e_j)
    cand[j] = rational_roots(h);
    if (cand[j].empty()) return std::nullopt;
    combos *= cand[j].size();
    if (combos > cap) return std::nullopt;
  }
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    // l'(y) = y_1 - sum_j r_j y_j; vanishing of g on y_1 = sum r_j y_j
    std::vector<std::vector<Rational>> cols;
    for (std::size_t j = 1; j < n; ++j) {
      std::vector<Rational> c(n, Rational(0));
      c[0] = cand[j][pick[j]];
      c[j] = 1;
      cols.push_back(c);
    }
    if (substitute_linear(g, cols).is_zero()) {
      // back to x: y_1 = x_1, y_j = x_j - a_j x_1
      QPoly ell = QPoly::variable(n, 0);
      for (std::size_t j = 1; j < n; ++j)
        ell -= (QPoly::variable(n, j) - QPoly::variable(n, 0).scaled(a[j])).scaled(cand[j][pick[j]]);
      return ell;
    }
    std::size_t pos = 1;
    while (pos < n && ++pick[pos] == cand[pos].size()) pick[pos++] = 0;
    if (pos == n) break;
  }
  return std::nullopt;
}

inline std::optional<std::vector<std::size_t>> min_hitting_set(const QPoly& f, std::size_t max_size, std::size_t cap) {
  const std::size_t n = f.num_vars();
  std::vector<std::vector<bool>> supports;
  for (const auto& [m, c] : f.terms()) {
    std::vector<bool> s(n, false);
    for (std::size_t i = 0; i < m.support_size(); ++i) s[i] = m[i] > 0;
    supports.push_back(s);
  }
  std::size_t visited = 0;
  for (std::size_t k = 1; k <= std::min(max_size, n); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (++visited > cap) return std::nullopt;
      bool hits = true;
      for (const auto& s : supports) {
        bool any = false;
        for (auto i : idx) any = any || s[i];
        if (!any) {
          hits = false;
          break;
        }
      }
      if (hits) return idx;
      std::size_t pos = k;
      while (pos-- > 0 && idx[pos] == n - k + pos) {
      }
      if (pos == static_cast<std::size_t>(-1)) break;
      ++idx[pos];
      for (std::size_t i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return std::nullopt;
}

/// Numerically fits a codimension-s subspace x_D = M x_F inside {f = 0}, then rationalizes M.
inline std::optional<std::vector<std::pair<QPoly, QPoly>>> numeric_subspace_split(const QPoly& f, std::size_t s,
                                                                                  const SolverBudget& budget, Rng& rng,
                                                                                  unsigned restarts) {
  const std::size_t n = f.num_vars();
  if (s == 0 || s >= n) return std::nullopt;
  const unsigned d = *f.homogeneous_degree();
  const std::size_t nf = n - s;
  const std::size_t samples = static_cast<std::size_t>(binomial(nf + d - 1, d).get_ui()) + 8;
  NumericSystem sys({f}, n);
  for (unsigned attempt = 0; attempt < restarts; ++attempt) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    if (attempt > 0) std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<std::size_t> F(perm.begin(), perm.begin() + static_cast<long>(nf)), D(perm.begin() + static_cast<long>(nf), perm.end());
    std::sort(F.begin(), F.end());
    std::sort(D.begin(), D.end());
    std::vector<Eigen::VectorXd> Z;
    for (std::size_t p = 0; p < samples; ++p) {
      Eigen::VectorXd z(nf);
      for (std::size_t k = 0; k < nf; ++k) z[k] = rng.normal();
      Z.push_back(z.normalized());  // f is homogeneous; unit samples keep the residuals comparable
    }
    const Eigen::Index unknowns = static_cast<Eigen::Index>(s * nf);
    Eigen::VectorXd m(unknowns);
    for (Eigen::Index i = 0; i < unknowns; ++i) m[i] = rng.normal();
    auto point = [&](const Eigen::VectorXd& mm, const Eigen::VectorXd& z) {
      Eigen::VectorXd x(n);
      for (std::size_t k = 0; k < nf; ++k) x[F[k]] = z[k];
      for (std::size_t j = 0; j < s; ++j) {
        double v = 0;
        for (std::size_t k = 0; k < nf; ++k) v += mm[j * nf + k] * z[k];
        x[D[j]] = v;
      }
      return x;
    };
    auto residual = [&](const Eigen::VectorXd& mm) {
      Eigen::VectorXd r(samples);
      for (std::size_t p = 0; p < samples; ++p) r[p] = sys.value(point(mm, Z[p]))[0];
      return r;
    };
    Eigen::VectorXd r = residual(m);
    double lambda = 1e-3, checkpoint = r.norm();
    // converging restarts need ~15 iterations; the others sit in local minima
    for (unsigned it = 0; it < budget.newton_iters && r.norm() > 1e-13; ++it) {
      if (it % 10 == 9) {
        if (r.norm() > 0.5 * checkpoint && r.norm() > 1e-6) break;
        checkpoint = r.norm();
      }
      Eigen::MatrixXd J(samples, unknowns);
      for (std::size_t p = 0; p < samples; ++p) {
        Eigen::VectorXd x = point(m, Z[p]);
        Eigen::MatrixXd grad = sys.jacobian(x);
        for (std::size_t j = 0; j < s; ++j)
          for (std::size_t k = 0; k < nf; ++k) J(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j * nf + k)) = grad(0, D[j]) * Z[p][k];
      }
      Eigen::MatrixXd A = J.transpose() * J;
      Eigen::VectorXd g = J.transpose() * r;
      bool improved = false;
      for (int ls = 0; ls < 12; ++ls) {
        Eigen::MatrixXd Al = A;
        Al.diagonal().array() += lambda * (1.0 + A.diagonal().array());
        Eigen::VectorXd step = Al.ldlt().solve(g);
        Eigen::VectorXd m2 = m - step;
        Eigen::VectorXd r2 = residual(m2);
        if (r2.norm() < r.norm()) {
          m = m2;
          r = r2;
          lambda = std::max(lambda / 5, 1e-12);
          improved = true;
          break;
        }
        lambda *= 10;
      }
      if (!improved) break;
    }
    if (!(r.norm() < 1e-9)) continue;
    Matrix<Rational> M(s, std::vector<Rational>(nf));
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t k = 0; k < nf; ++k) M[j][k] = rationalize(m[j * nf + k], budget.height_bound);
    std::vector<std::vector<Rational>> cols;
    for (std::size_t k = 0; k < nf; ++k) {
      std::vector<Rational> c(n, Rational(0));
      c[F[k]] = 1;
      for (std::size_t j = 0; j < s; ++j) c[D[j]] = M[j][k];
      cols.push_back(c);
    }
    if (!substitute_linear(f, cols).is_zero()) continue;
    if (auto pairs = split_on_subspace(f, D, F, M)) return pairs;
  }
  return std::nullopt;
}

}  // namespace detail

struct DecompositionSearchOptions {
  bool numeric = true;           // allow the numeric subspace fit
  unsigned numeric_restarts = 12;
  std::size_t hitting_set_cap = 200000;
};

/// Searches for f = sum g_i h_i with at most max_terms pairs. Tries, in order: exact factor splits
/// (a variable dividing every term, a rational linear factor), coordinate hitting sets
/// f = sum_{j in S} x_j h_j, and a numerically fitted rational subspace inside {f = 0}.
inline std::optional<DecompositionCertificate<Rational>> decomposition_search(const QPoly& f, std::size_t max_terms,
                                                                              const SolverBudget& budget,
                                                                              const DecompositionSearchOptions& opt = {}) {
  DecompositionCertificate<Rational> cert{f, {}};
  if (f.is_zero()) return cert;
  auto d = f.homogeneous_degree();
  if (!d) throw ContractViolation("decomposition_search: form must be homogeneous");
  if (*d < 2) return std::nullopt;  // nonzero linear forms have infinite strength
  if (max_terms == 0) return std::nullopt;
  Rng rng(budget.seed, 0xdec0);
  if (auto split = detail::monomial_content_split(f)) {
    cert.pairs.push_back(*split);
    return cert;
  }
  if (auto ell = detail::find_linear_factor(f, rng)) {
    if (auto h = divide_exact(f, *ell)) {
      cert.pairs.emplace_back(*ell, *h);
      if (verify_decomposition(cert)) return cert;
      cert.pairs.clear();
    }
  }
  const std::size_t n = f.num_vars();
  for (std::size_t s = 1; s <= max_terms; ++s) {
    if (auto S = detail::min_hitting_set(f, s, opt.hitting_set_cap); S && S->size() == s) {
      std::vector<std::size_t> F;
      for (std::size_t i = 0; i < n; ++i)
        if (std::find(S->begin(), S->end(), i) == S->end()) F.push_back(i);
      Matrix<Rational> M(s, std::vector<Rational>(F.size(), Rational(0)));
      if (auto pairs = detail::split_on_subspace(f, *S, F, M)) {
        cert.pairs = *pairs;
        if (verify_decomposition(cert)) return cert;
      }
    }
    // a rational hyperplane inside {f = 0} is a linear factor, handled exactly above
    if (opt.numeric && s >= 2 && s < n) {
      if (auto pairs = detail::numeric_subspace_split(f, s, budget, rng, opt.numeric_restarts)) {
        cert.pairs = *pairs;
        if (verify_decomposition(cert)) return cert;
      }
    }
  }
  return std::nullopt;
}

namespace detail {

/// Deterministic small-integer coefficient vectors: unit vectors, then pairs, then a seeded stream.
inline std::vector<std::vector<long>> combination_sequence(std::size_t k, std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<long>> out;
  for (std::size_t i = 0; i < k && out.size() < count; ++i) {
    std::vector<long> v(k, 0);
    v[i] = 1;
    out.push_back(v);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (long s : {1L, -1L}) {
        if (out.size() >= count) return out;
        std::vector<long> v(k, 0);
        v[i] = 1;
        v[j] = s;
        out.push_back(v);
      }
  Rng rng(seed, 0xc0b1);
  while (out.size() < count) {
    std::vector<long> v(k);
    bool nz = false;
    for (auto& x : v) {
      x = rng.integer(-3, 3);
      nz = nz || x != 0;
    }
    if (nz) out.push_back(v);
  }
  return out;
}

inline std::vector<Rational> coefficient_vector(const QPoly& f, const std::vector<Monomial>& basis) {
  std::vector<Rational> v;
  for (const auto& m : basis) v.push_back(f.coefficient(m));
  return v;
}

/// Smallest support of a nonzero combination of diagonal forms (rows = coefficient vectors).
inline std::size_t min_combination_support(const Matrix<Rational>& C) {
  const std::size_t k = C.size(), n = C[0].size();
  if (k == 1) {
    std::size_t s = 0;
    for (const auto& x : C[0]) s += sgn(x) != 0;
    return s;
  }
  // columns lying in a common hyperplane lambda^perp; maximize over hyperplanes spanned by columns
  auto cols = transpose(C, n);
  std::size_t best_zero = 0;
  std::vector<std::size_t> idx(k - 1);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k - 1) {
      Matrix<Rational> A;
      for (auto i : idx) A.push_back(cols[i]);
      auto normal = nullspace(A, k);
      if (normal.size() != 1) return;
      std::size_t zeros = 0;
      for (const auto& c : cols) {
        Rational dot = 0;
        for (std::size_t t = 0; t < k; ++t) dot += c[t] * normal[0][t];
        zeros += sgn(dot) == 0;
      }
      best_zero = std::max(best_zero, zeros);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return n - best_zero;
}

}  // namespace detail

/// Collective strength bounds: the minimum over degree classes of the strength of nontrivial
/// combinations. Upper bounds come from sampled combinations and decomposition_search; lower bounds
/// only where a certificate applies (quadratic classes, diagonal classes).
inline StrengthBounds collective_strength_bounds(const std::vector<QPoly>& forms, const SolverBudget& budget,
                                                 std::size_t samples = 8, std::size_t max_terms = 4) {
  if (forms.empty()) throw ContractViolation("collective_strength_bounds: empty input");
  std::map<unsigned, std::vector<QPoly>> classes;
  for (const auto& f : forms) {
    auto d = f.homogeneous_degree();
    if (f.is_zero()) {
      classes[0].push_back(f);
      continue;
    }
    if (!d) throw ContractViolation("collective_strength_bounds: forms must be homogeneous");
    classes[*d].push_back(f);
  }
  StrengthBounds total;
  total.lower_infinite = true;
  bool lower_known = true;
  auto merge = [&](const StrengthBounds& b) {
    if (b.upper && (!total.upper || *b.upper < *total.upper)) {
      total.upper = b.upper;
      total.upper_provenance = b.upper_provenance;
    }
    if (b.lower_infinite) return;
    if (!b.lower) {
      lower_known = false;
      return;
    }
    if (total.lower_infinite || *b.lower < *total.lower) {
      total.lower = b.lower;
      total.lower_infinite = false;
      total.lower_provenance = b.lower_provenance;
    }
  };
  for (const auto& [d, fs] : classes) {
    StrengthBounds b;
    if (d == 0) {
      b.upper = 0;
      b.lower = Rational(0);
      b.upper_provenance = b.lower_provenance = "zero-form";
      merge(b);
      continue;
    }
    std::set<Monomial, GradedLexLess> mons;
    for (const auto& f : fs)
      for (const auto& [m, c] : f.terms()) mons.insert(m);
    std::vector<Monomial> basis(mons.begin(), mons.end());
    Matrix<Rational> C;
    for (const auto& f : fs) C.push_back(detail::coefficient_vector(f, basis));
    if (rank(C) < fs.size()) {
      b.upper = 0;
      b.lower = Rational(0);
      b.upper_provenance = b.lower_provenance = "linear-dependence";
      merge(b);
      continue;
    }
    if (d == 1) {
      b.lower_infinite = true;
      b.lower_provenance = "independent-linear-forms";
      merge(b);
      continue;
    }
    // upper: sampled combinations
    for (const auto& lam : detail::combination_sequence(fs.size(), samples, budget.seed)) {
      QPoly g(fs[0].num_vars());
      for (std::size_t i = 0; i < fs.size(); ++i)
        if (lam[i] != 0) g += fs[i].scaled(Rational(lam[i]));
      std::size_t cap = b.upper ? static_cast<std::size_t>(*b.upper) - 1 : max_terms;
      if (cap == 0) break;
      DecompositionSearchOptions opt;
      opt.numeric_restarts = 2;
      if (auto cert = decomposition_search(g, cap, budget, opt)) {
        b.upper = cert->size();
        b.upper_provenance = "decomposition-search";
      }
    }
    // lower
    bool all_diagonal = true;
    for (const auto& f : fs) all_diagonal = all_diagonal && diagonal_support(f).has_value();
    if (all_diagonal) {
      std::size_t n = fs[0].num_vars();
      Matrix<Rational> D;
      for (const auto& f : fs) {
        std::vector<Rational> row(n, Rational(0));
        for (const auto& [m, c] : f.terms())
          for (std::size_t i = 0; i < n; ++i)
            if (m[i] == d) row[i] = c;
        D.push_back(row);
      }
      b.lower = Rational(Integer(static_cast<long>(detail::min_combination_support(D))), Integer(2));
      b.lower->canonicalize();
      b.lower_provenance = "singular-locus-codimension";
    } else if (d == 2) {
      if (fs.size() == 1) {
        b.lower = Rational(quadratic_strength(fs[0]));
        b.lower_provenance = "quadratic-rank";
      } else {
        b.lower = Rational(1);
        b.lower_provenance = "independent-nonzero-forms";
      }
    }
    merge(b);
  }
  if (!lower_known) {
    total.lower.reset();
    total.lower_infinite = false;
    total.lower_provenance = "none";
  }
  return total;
}

}  // namespace birch

#endif  // BIRCH_STRENGTH_HPP
