#ifndef BIRCH_REAL_SOLVER_HPP
#define BIRCH_REAL_SOLVER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "birch/fields.hpp"
#include "birch/interval.hpp"
#include "birch/poly_gcd.hpp"

namespace birch {

struct RealSystemSolution {
  std::vector<Interval> point;      // box known to contain a common real zero
  std::vector<Interval> residuals;  // enclosures of f_i over the box
  std::optional<std::vector<Rational>> exact;
  unsigned restart = 0;
  std::string method;
};

namespace detail {

/// Forms flattened to doubles for Newton iterations.
class NumericSystem {
 public:
  NumericSystem(const std::vector<QPoly>& forms, std::size_t n) : n_(n) {
    for (const auto& f : forms) {
      std::vector<std::pair<double, std::vector<unsigned>>> terms;
      for (const auto& [m, c] : f.terms()) {
        std::vector<unsigned> e(n, 0);
        for (std::size_t i = 0; i < m.support_size(); ++i) {
          e[i] = m[i];
          max_exp_ = std::max(max_exp_, m[i]);
        }
        terms.emplace_back(c.get_d(), e);
      }
      forms_.push_back(std::move(terms));
    }
  }

  Eigen::VectorXd value(const Eigen::VectorXd& x) const {
    const auto pw = powers(x);
    Eigen::VectorXd out(forms_.size());
    for (std::size_t k = 0; k < forms_.size(); ++k) {
      double acc = 0;
      for (const auto& [c, e] : forms_[k]) {
        double t = c;
        for (std::size_t i = 0; i < n_; ++i) t *= pw[i * (max_exp_ + 1) + e[i]];
        acc += t;
      }
      out[k] = acc;
    }
    return out;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const auto pw = powers(x);
    const std::size_t w = max_exp_ + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(forms_.size(), n_);
    for (std::size_t k = 0; k < forms_.size(); ++k)
      for (const auto& [c, e] : forms_[k])
        for (std::size_t j = 0; j < n_; ++j) {
          if (!e[j]) continue;
          double t = c * e[j] * pw[j * w + e[j] - 1];
          for (std::size_t i = 0; i < n_; ++i)
            if (i != j) t *= pw[i * w + e[i]];
          J(k, j) += t;
        }
    return J;
  }

 private:
  std::vector<double> powers(const Eigen::VectorXd& x) const {
    const std::size_t w = max_exp_ + 1;
    std::vector<double> pw(n_ * w);
    for (std::size_t i = 0; i < n_; ++i) {
      pw[i * w] = 1;
      for (std::size_t e = 1; e < w; ++e) pw[i * w + e] = pw[i * w + e - 1] * x[static_cast<Eigen::Index>(i)];
    }
    return pw;
  }

  std::size_t n_;
  unsigned max_exp_ = 0;
  std::vector<std::vector<std::pair<double, std::vector<unsigned>>>> forms_;
};

inline Rational horner(const std::vector<Rational>& c, const Rational& s) {
  Rational acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * s + c[i];
  return acc;
}

/// Coefficients (low to high) of s -> f(a + s b).
inline std::vector<Rational> line_restriction(const QPoly& f, const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<QPoly> images;
  for (std::size_t i = 0; i < a.size(); ++i)
    images.push_back(QPoly::constant(1, a[i]) + QPoly::variable(1, 0).scaled(b[i]));
  QPoly g = substitute(f, images, 1);
  std::vector<Rational> c(std::max(g.total_degree(), 0) + 1, Rational(0));
  for (const auto& [m, v] : g.terms()) c[m[0]] = v;
  return c;
}

inline std::vector<Interval> interval_point(const std::vector<Rational>& a, const std::vector<Rational>& b, const Interval& s) {
  std::vector<Interval> p;
  for (std::size_t i = 0; i < a.size(); ++i) p.push_back(Interval(a[i]) + Interval(b[i]) * s);
  return p;
}

inline std::vector<Interval> interval_residuals(const std::vector<QPoly>& forms, const std::vector<Interval>& box) {
  std::vector<Interval> r;
  for (const auto& f : forms) r.push_back(evaluate<Interval>(f, std::span<const Interval>(box)));
  return r;
}

inline bool residuals_within(const std::vector<Interval>& res, const Rational& tol) {
  for (const auto& r : res)
    if (!r.contains_zero() || r.width() > tol) return false;
  return true;
}

inline std::optional<std::vector<Rational>> try_rational_reconstruction(const std::vector<QPoly>& forms,
                                                                        const Eigen::VectorXd& x,
                                                                        const Integer& max_den) {
  double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0) return std::nullopt;
  std::vector<Rational> q;
  bool nonzero = false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    q.push_back(rationalize(x[i] / scale, max_den));
    nonzero = nonzero || sgn(q.back()) != 0;
  }
  if (!nonzero) return std::nullopt;
  for (const auto& f : forms)
    if (!is_zero(evaluate(f, q))) return std::nullopt;
  return q;
}

/// Krawczyk test around a numeric zero: fixes all but `free` coordinates to their dyadic values and
/// proves a unique zero of the square system in a small box around the rest.
inline std::optional<std::vector<Interval>> krawczyk_certify(const std::vector<QPoly>& forms, const Eigen::VectorXd& x0,
                                                             const NumericSystem& sys) {
  const std::size_t r = forms.size(), n = static_cast<std::size_t>(x0.size());
  Eigen::MatrixXd J = sys.jacobian(x0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
  if (qr.rank() < static_cast<Eigen::Index>(r)) return std::nullopt;
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < r; ++k) free.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()[k]));
  // square Newton polish on the free coordinates
  Eigen::VectorXd x = x0;
  for (int it = 0; it < 8; ++it) {
    Eigen::VectorXd F = sys.value(x);
    Eigen::MatrixXd Jf(r, r);
    Eigen::MatrixXd Jfull = sys.jacobian(x);
    for (std::size_t k = 0; k < r; ++k) Jf.col(k) = Jfull.col(free[k]);
    Eigen::VectorXd step = Jf.partialPivLu().solve(F);
    for (std::size_t k = 0; k < r; ++k) x[free[k]] -= step[k];
  }
  Eigen::MatrixXd Jf(r, r);
  Eigen::MatrixXd Jfull = sys.jacobian(x);
  for (std::size_t k = 0; k < r; ++k) Jf.col(k) = Jfull.col(free[k]);
  Eigen::MatrixXd Yd = Jf.inverse();
  if (!Yd.allFinite()) return std::nullopt;

  std::vector<Rational> center(n);
  for (std::size_t i = 0; i < n; ++i) center[i] = Rational(x[i]);
  double mag = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (double rho_d : {1e-13, 1e-11, 1e-9}) {
    Rational rho(rho_d * mag);
    std::vector<Interval> box(n);
    for (std::size_t i = 0; i < n; ++i) box[i] = Interval(center[i]);
    for (auto k : free) box[k] = Interval(center[k] - rho, center[k] + rho);
    std::vector<Rational> Fc;
    for (const auto& f : forms) Fc.push_back(evaluate(f, center));
    std::vector<std::vector<Interval>> JX(r, std::vector<Interval>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k)
        JX[i][k] = evaluate<Interval>(derivative(forms[i], free[k]), std::span<const Interval>(box));
    bool inside = true;
    for (std::size_t i = 0; i < r && inside; ++i) {
      Interval acc(center[free[i]]);
      for (std::size_t k = 0; k < r; ++k) acc = acc - Interval(Rational(Yd(i, k))) * Interval(Fc[k]);
      for (std::size_t j = 0; j < r; ++j) {
        Interval m(i == j ? Rational(1) : Rational(0));
        for (std::size_t k = 0; k < r; ++k) m = m - Interval(Rational(Yd(i, k))) * JX[k][j];
        acc = acc + m * Interval(-rho, rho);
      }
      const Interval& X = box[free[i]];
      inside = acc.lo() > X.lo() && acc.hi() < X.hi();
    }
    if (inside) return box;
  }
  return std::nullopt;
}

}  // namespace detail

/// Common real zero of r odd-degree forms in n > r variables, certified by interval arithmetic.
/// r = 1: restriction to a rational line and exact sign bisection. r > 1: damped minimum-norm Newton
/// from seeded starts on the unit sphere, then a Krawczyk existence proof on a square subsystem.
inline RealSystemSolution solve_real_odd_system(const std::vector<QPoly>& forms, const SolverBudget& budget) {
  budget.validate();
  if (forms.empty()) throw ContractViolation("solve_real_odd_system: empty system");
  const std::size_t n = forms[0].num_vars(), r = forms.size();
  for (const auto& f : forms) {
    if (f.num_vars() != n) throw ContractViolation("solve_real_odd_system: forms live in different contexts");
    auto d = f.homogeneous_degree();
    if (!d || *d % 2 == 0) throw ContractViolation("solve_real_odd_system: every form must be homogeneous of odd degree");
  }
  if (n <= r) throw ContractViolation("solve_real_odd_system: needs more variables than equations");

  Rng rng(budget.seed, 0x5ea1);
  if (r == 1) {
    const QPoly& f = forms[0];
    for (unsigned attempt = 0; attempt < budget.restarts; ++attempt) {
      std::vector<Rational> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = Rational(rng.integer(-3, 3));
        b[i] = Rational(rng.integer(-3, 3));
      }
      auto g = detail::line_restriction(f, a, b);
      const std::size_t deg = g.size() - 1;
      if (g.size() < 2 || sgn(g.back()) == 0 || deg % 2 == 0) continue;
      Rational bound = 1;
      for (std::size_t i = 0; i < deg; ++i) bound = std::max(bound, Rational(Rational(1) + abs(g[i] / g.back())));
      Rational lo = -bound, hi = bound;
      int slo = sgn(detail::horner(g, lo));
      std::optional<Rational> root;
      for (int it = 0; it < 600; ++it) {
        Rational mid = (lo + hi) / 2;
        int sm = sgn(detail::horner(g, mid));
        if (sm == 0) {
          root = mid;
          break;
        }
        if (sm == slo)
          lo = mid;
        else
          hi = mid;
        if (it > 20 && it % 8 == 0) {
          auto box = detail::interval_point(a, b, Interval(lo, hi));
          if (std::all_of(box.begin(), box.end(), [](const Interval& x) { return is_zero(x); })) continue;
          auto res = detail::interval_residuals(forms, box);
          if (detail::residuals_within(res, budget.residual_tol)) {
            bool nonzero = false;
            for (const auto& x : box) nonzero = nonzero || !x.contains_zero();
            if (!nonzero) break;
            return RealSystemSolution{box, res, std::nullopt, attempt, "line-bisection"};
          }
        }
      }
      if (root) {
        std::vector<Rational> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = a[i] + *root * b[i];
        if (std::all_of(p.begin(), p.end(), [](const Rational& q) { return sgn(q) == 0; })) continue;
        std::vector<Interval> box(p.begin(), p.end());
        return RealSystemSolution{box, std::vector<Interval>(1, Interval(0)), p, attempt, "line-bisection"};
      }
    }
    throw BudgetExhausted("solve_real_odd_system: no certified root within budget");
  }

  detail::NumericSystem sys(forms, n);
  for (unsigned attempt = 0; attempt < budget.restarts; ++attempt) {
    Eigen::VectorXd x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal();
    x.normalize();
    double res = sys.value(x).norm();
    for (unsigned it = 0; it < budget.newton_iters && res > 1e-15; ++it) {
      Eigen::MatrixXd J = sys.jacobian(x);
      Eigen::VectorXd F = sys.value(x);
      Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(F);
      double t = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
        Eigen::VectorXd y = (x - t * step).normalized();
        double ry = sys.value(y).norm();
        if (ry < res) {
          x = y;
          res = ry;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (!(res < 1e-9)) continue;
    if (auto q = detail::try_rational_reconstruction(forms, x, budget.height_bound)) {
      std::vector<Interval> box(q->begin(), q->end());
      return RealSystemSolution{box, std::vector<Interval>(r, Interval(0)), q, attempt, "rational-reconstruction"};
    }
    auto box = detail::krawczyk_certify(forms, x, sys);
    if (!box) continue;
    bool nonzero = false;
    for (const auto& xi : *box) nonzero = nonzero || !xi.contains_zero();
    if (!nonzero) continue;
    auto resid = detail::interval_residuals(forms, *box);
    if (!detail::residuals_within(resid, budget.residual_tol)) continue;
    return RealSystemSolution{*box, resid, std::nullopt, attempt, "newton-krawczyk"};
  }
  throw BudgetExhausted("solve_real_odd_system: Newton restarts exhausted without a certified zero");
}

}  // namespace birch

#endif  // BIRCH_REAL_SOLVER_HPP
