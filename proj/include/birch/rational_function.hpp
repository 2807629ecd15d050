#ifndef BIRCH_RATIONAL_FUNCTION_HPP
#define BIRCH_RATIONAL_FUNCTION_HPP

#include <string>
#include <vector>

#include "birch/poly_gcd.hpp"

namespace birch {

/// Element of Q(t_1, ..., t_p): numerator/denominator coprime, denominator monic
/// (leading coefficient 1 in the graded order), so equality is structural.
class RationalFunction {
 public:
  RationalFunction() : num_(0), den_(QPoly::constant(0, Rational(1))) {}
  RationalFunction(const Rational& q) : num_(QPoly::constant(0, q)), den_(QPoly::constant(0, Rational(1))) {}  // NOLINT
  RationalFunction(long v) : RationalFunction(Rational(v)) {}  // NOLINT
  explicit RationalFunction(const QPoly& num) : num_(num), den_(QPoly::constant(num.num_vars(), Rational(1))) {
    normalize();
  }
  RationalFunction(const QPoly& num, const QPoly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw ContractViolation("rational function with zero denominator");
    if (num_.num_vars() != den_.num_vars()) {
      std::size_t n = std::max(num_.num_vars(), den_.num_vars());
      num_ = num_.widened(n);
      den_ = den_.widened(n);
    }
    normalize();
  }

  /// The parameter t_{i+1} in a context of p parameters.
  static RationalFunction parameter(std::size_t p, std::size_t i) { return RationalFunction(QPoly::variable(p, i)); }

  const QPoly& numerator() const { return num_; }
  const QPoly& denominator() const { return den_; }
  std::size_t num_params() const { return num_.num_vars(); }
  bool is_polynomial() const { return den_.total_degree() == 0; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return is_polynomial() && num_.total_degree() <= 0; }

  RationalFunction widened(std::size_t p) const {
    RationalFunction r;
    r.num_ = num_.widened(p);
    r.den_ = den_.widened(p);
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    auto [x, y] = align(a, b);
    return RationalFunction(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    auto [x, y] = align(a, b);
    return RationalFunction(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
  }
  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    auto [x, y] = align(a, b);
    return RationalFunction(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw ContractViolation("division by zero rational function");
    auto [x, y] = align(a, b);
    return RationalFunction(x.num_ * y.den_, x.den_ * y.num_);
  }

  bool operator==(const RationalFunction& o) const {
    auto [x, y] = align(*this, o);
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    std::string n = num_.to_string(names);
    if (is_polynomial()) return n;
    return "(" + n + ")/(" + den_.to_string(names) + ")";
  }
  std::string to_string() const { return to_string(default_variable_names(num_params(), "t")); }

 private:
  static std::pair<RationalFunction, RationalFunction> align(const RationalFunction& a, const RationalFunction& b) {
    std::size_t n = std::max(a.num_params(), b.num_params());
    return {a.num_params() == n ? a : a.widened(n), b.num_params() == n ? b : b.widened(n)};
  }

  void normalize() {
    const std::size_t n = num_.num_vars();
    if (num_.is_zero()) {
      den_ = QPoly::constant(n, Rational(1));
      return;
    }
    QPoly g = gcd(num_, den_);
    if (g.total_degree() > 0) {
      num_ = *divide_exact(num_, g);
      den_ = *divide_exact(den_, g);
    }
    Rational lc = den_.leading_coefficient();
    if (lc != 1) {
      num_ = num_.scaled(Rational(1) / lc);
      den_ = den_.scaled(Rational(1) / lc);
    }
  }

  QPoly num_, den_;
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline std::string to_string(const RationalFunction& f) { return f.to_string(); }

inline std::optional<RationalFunction> rational_function_root(const RationalFunction& f, unsigned d) {
  auto n = polynomial_root<Rational>(f.numerator(), d, &rational_root_fn);
  if (!n) return std::nullopt;
  auto m = polynomial_root<Rational>(f.denominator(), d, &rational_root_fn);
  if (!m) return std::nullopt;
  return RationalFunction(*n, *m);
}

}  // namespace birch

#endif  // BIRCH_RATIONAL_FUNCTION_HPP
