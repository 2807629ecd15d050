#ifndef BIRCH_DIAGONAL_HPP
#define BIRCH_DIAGONAL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "birch/linalg.hpp"
#include "birch/radical.hpp"
#include "birch/real_solver.hpp"
#include "birch/tsen.hpp"

namespace birch {

/// A nonzero zero of a diagonal equation. Over Q and R the point has constant coordinates; over
/// R(t1..tp) the coordinates are polynomials in t, either exact or with enclosed real coefficients.
struct DiagonalSolution {
  std::vector<RealRadical> point;
  std::vector<Polynomial<RealRadical>> exact_functions;
  std::vector<Polynomial<Interval>> enclosed_functions;
  std::vector<Interval> residual_enclosures;  // coefficientwise, enclosed case only
  std::string method;

  bool is_function_point() const { return !exact_functions.empty() || !enclosed_functions.empty(); }
  bool is_exact() const { return enclosed_functions.empty(); }
};

/// x_1 = 1, x_2 = real d-th root of -a_1/a_2; the remaining coordinates are 0.
inline std::vector<RealRadical> solve_diagonal_real(const DiagonalEquation<Rational>& eq) {
  eq.validate();
  const auto& a = eq.coefficients;
  if (a.size() < 2) throw UnsupportedInstance("a single-variable diagonal equation has no nonzero zero");
  std::vector<RealRadical> x(a.size(), RealRadical(0));
  x[0] = RealRadical(1);
  x[1] = RealRadical::root(-a[0] / a[1], eq.degree);
  return x;
}

/// Pairs with -a_i/a_j a rational d-th power, then an exhaustive search over integer points of
/// growing height that solves for one coordinate exactly. Never decides that no zero exists.
inline std::optional<std::vector<Rational>> solve_diagonal_rational(
    const DiagonalEquation<Rational>& eq, const SolverBudget& budget,
    const std::function<bool(const std::vector<Rational>&)>& accept = {}) {
  eq.validate();
  const auto& a = eq.coefficients;
  const std::size_t n = a.size();
  const unsigned d = eq.degree;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (auto q = exact_root(Rational(-a[i] / a[j]), d)) {
        std::vector<Rational> x(n, Rational(0));
        x[i] = 1;
        x[j] = *q;
        if (!accept || accept(x)) return x;
      }
  if (n < 3) return std::nullopt;
  std::size_t evaluations = 0;
  const long H = budget.height_bound.get_si();
  std::vector<long> order = {0};
  for (long h = 1; h <= H; ++h) {
    order.push_back(h);
    order.push_back(-h);
  }
  // free coordinates range over values of height <= h with at least one of height exactly h
  for (long h = 1; h <= H; ++h) {
    const std::size_t values = 2 * static_cast<std::size_t>(h) + 1;
    for (std::size_t k = n; k-- > 0;) {  // coordinate solved for
      std::vector<std::size_t> idx(n - 1, 0);
      while (true) {
        bool top = false;
        for (auto v : idx) top = top || std::labs(order[v]) == h;
        if (top) {
          if (++evaluations > budget.search_limit) return std::nullopt;
          Rational s = 0;
          std::vector<Rational> x(n, Rational(0));
          for (std::size_t t = 0, u = 0; t < n; ++t) {
            if (t == k) continue;
            x[t] = Rational(order[idx[u++]]);
            s += a[t] * pow(x[t], d);
          }
          if (auto q = exact_root(Rational(-s / a[k]), d)) {
            x[k] = *q;
            if (!accept || accept(x)) return x;
          }
        }
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == values) idx[pos++] = 0;
        if (pos == idx.size()) break;
      }
    }
  }
  return std::nullopt;
}

namespace detail {

inline QPoly lcm(const QPoly& a, const QPoly& b) {
  QPoly g = gcd(a, b);
  return *divide_exact(QPoly(a * b), g);
}

/// Multiplies the coefficients by the lcm of their denominators, giving polynomial coefficients.
inline std::vector<QPoly> clear_denominators(const std::vector<RationalFunction>& coeffs, std::size_t p) {
  QPoly L = QPoly::constant(p, Rational(1));
  for (const auto& c : coeffs) L = lcm(L, c.widened(p).denominator());
  std::vector<QPoly> out;
  for (const auto& c : coeffs) {
    RationalFunction prod = c.widened(p) * RationalFunction(L);
    out.push_back(prod.numerator().widened(p));
  }
  return out;
}

inline Polynomial<RealRadical> to_real(const QPoly& f) { return convert<RealRadical>(f); }

}  // namespace detail

/// Over R(t1..tp): pair shortcut, else the expansion x_i = sum y_{i,a} t^a and a real leaf.
inline std::optional<DiagonalSolution> solve_diagonal_function_field(const DiagonalEquation<RationalFunction>& eq,
                                                                     std::size_t p, const SolverBudget& budget) {
  eq.validate();
  const std::size_t n = eq.coefficients.size();
  const unsigned d = eq.degree;
  const auto coeffs = detail::clear_denominators(eq.coefficients, p);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RationalFunction ratio = -RationalFunction(coeffs[i], coeffs[j]);
      if (auto q = rational_function_root(ratio, d)) {
        DiagonalSolution sol;
        sol.method = "pair-shortcut";
        QPoly den = q->denominator().widened(p), num = q->numerator().widened(p);
        sol.exact_functions.assign(n, Polynomial<RealRadical>(p));
        sol.exact_functions[i] = detail::to_real(den);
        sol.exact_functions[j] = detail::to_real(num);
        return sol;
      }
    }

  unsigned r = 0;
  for (const auto& c : coeffs) r = std::max<unsigned>(r, static_cast<unsigned>(c.total_degree()));
  const unsigned s = choose_expansion_degree(n, r, d, p);
  Polynomial<RationalFunction> f(n);
  for (std::size_t i = 0; i < n; ++i) f.add_term(Monomial::variable(i, d), RationalFunction(coeffs[i]));
  TsenReduction red = tsen_reduce(f, p, s);

  DiagonalSolution sol;
  if (s == 0) {
    // each f_a is linear in the d-th powers y_i^d
    Matrix<Rational> rows;
    for (const auto& form : red.real_system) {
      std::vector<Rational> row(n, Rational(0));
      for (const auto& [m, c] : form.terms())
        for (std::size_t i = 0; i < n; ++i)
          if (m[i] == d) row[i] = c;
      rows.push_back(row);
    }
    auto kernel = nullspace(rows, n);
    if (!kernel.empty()) {
      std::vector<RealRadical> y;
      for (const auto& z : kernel[0]) y.push_back(RealRadical::root(z, d));
      sol.method = "expansion-linear-in-powers";
      sol.exact_functions = red.lift(y);
      return sol;
    }
  }
  RealSystemSolution leaf;
  try {
    leaf = solve_real_odd_system(red.real_system, budget);
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
  sol.method = "expansion+" + leaf.method;
  if (leaf.exact) {
    std::vector<RealRadical> y(leaf.exact->begin(), leaf.exact->end());
    sol.exact_functions = red.lift(y);
  } else {
    sol.enclosed_functions = red.lift(leaf.point);
    Polynomial<Interval> acc(p);
    for (std::size_t i = 0; i < n; ++i)
      acc += convert<Interval>(coeffs[i]) * sol.enclosed_functions[i].pow(d);
    for (const auto& [m, c] : acc.terms()) sol.residual_enclosures.push_back(c);
  }
  return sol;
}

/// Exact check that a solution is nonzero and satisfies the (denominator-cleared) equation; for
/// enclosed solutions every residual coefficient must contain 0 with width <= tol.
inline bool verify_diagonal_solution(const DiagonalEquation<RationalFunction>& eq, std::size_t p,
                                     const DiagonalSolution& sol, const Rational& tol) {
  const std::size_t n = eq.coefficients.size();
  const unsigned d = eq.degree;
  if (!sol.is_function_point()) {
    if (sol.point.size() != n) return false;
    bool nonzero = false;
    RealRadical acc(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!eq.coefficients[i].is_constant()) return false;
      nonzero = nonzero || !sol.point[i].is_zero();
      RealRadical xi = sol.point[i], pw(1);
      for (unsigned k = 0; k < d; ++k) pw = pw * xi;
      Rational c = eq.coefficients[i].numerator().is_zero()
                       ? Rational(0)
                       : eq.coefficients[i].numerator().coefficient(Monomial{});
      acc = acc + RealRadical(c) * pw;
    }
    return nonzero && acc.is_zero();
  }
  const auto coeffs = detail::clear_denominators(eq.coefficients, p);
  if (sol.is_exact()) {
    if (sol.exact_functions.size() != n) return false;
    bool nonzero = false;
    Polynomial<RealRadical> acc(p);
    for (std::size_t i = 0; i < n; ++i) {
      nonzero = nonzero || !sol.exact_functions[i].is_zero();
      acc += detail::to_real(coeffs[i]) * sol.exact_functions[i].pow(d);
    }
    return nonzero && acc.is_zero();
  }
  if (sol.enclosed_functions.size() != n) return false;
  bool nonzero = false;
  Polynomial<Interval> acc(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [m, c] : sol.enclosed_functions[i].terms()) nonzero = nonzero || !c.contains_zero();
    acc += convert<Interval>(coeffs[i]) * sol.enclosed_functions[i].pow(d);
  }
  for (const auto& [m, c] : acc.terms())
    if (!c.contains_zero() || c.width() > tol) return false;
  return nonzero;
}

/// Dispatches on the field kind. Coefficients must be constants unless the field is R(t1..tp).
inline std::optional<DiagonalSolution> solve_diagonal(const BirchField& field, const DiagonalEquation<RationalFunction>& eq,
                                                      const SolverBudget& budget) {
  eq.validate();
  budget.validate();
  if (field.kind == FieldKind::RealFunctionField) return solve_diagonal_function_field(eq, field.params, budget);
  DiagonalEquation<Rational> q{{}, eq.degree};
  for (const auto& c : eq.coefficients) {
    if (!c.is_constant()) throw ContractViolation("coefficient " + c.to_string() + " is not a constant of " + field.to_string());
    q.coefficients.push_back(c.numerator().coefficient(Monomial{}));
  }
  DiagonalSolution sol;
  if (field.kind == FieldKind::RealClosed) {
    sol.point = solve_diagonal_real(q);
    sol.method = "real-closed-form";
    return sol;
  }
  auto x = solve_diagonal_rational(q, budget);
  if (!x) return std::nullopt;
  sol.point.assign(x->begin(), x->end());
  sol.method = "rational-search";
  return sol;
}

}  // namespace birch

#endif  // BIRCH_DIAGONAL_HPP
