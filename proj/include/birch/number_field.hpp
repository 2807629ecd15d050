#ifndef BIRCH_NUMBER_FIELD_HPP
#define BIRCH_NUMBER_FIELD_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "birch/field.hpp"

namespace birch {

/// Simple algebraic extension Q(alpha) = Q[X]/(m(X)) for a monic irreducible m.
struct ExtensionModulus {
  std::vector<Rational> minimal_polynomial;  // low to high, monic, degree >= 1
  std::string generator_name = "a";

  std::size_t degree() const { return minimal_polynomial.size() - 1; }
};

/// Element of Q(alpha), stored as coefficients on the power basis 1, alpha, ..., alpha^{m-1}.
/// A null modulus marks an element of Q that has not met its field yet.
class AlgebraicNumber {
 public:
  AlgebraicNumber() = default;
  AlgebraicNumber(const Rational& q) {  // NOLINT(google-explicit-constructor)
    if (sgn(q) != 0) coeffs_ = {q};
  }
  AlgebraicNumber(long v) : AlgebraicNumber(Rational(v)) {}  // NOLINT

  static std::shared_ptr<const ExtensionModulus> make_field(std::vector<Rational> minpoly, std::string name = "a") {
    if (minpoly.size() < 2 || minpoly.back() != 1) throw ContractViolation("minimal polynomial must be monic of degree >= 1");
    return std::make_shared<const ExtensionModulus>(ExtensionModulus{std::move(minpoly), std::move(name)});
  }

  static AlgebraicNumber from_coefficients(std::shared_ptr<const ExtensionModulus> field, std::vector<Rational> c) {
    AlgebraicNumber x;
    x.field_ = std::move(field);
    x.coeffs_ = std::move(c);
    x.reduce();
    return x;
  }
  static AlgebraicNumber generator(std::shared_ptr<const ExtensionModulus> field) {
    return from_coefficients(std::move(field), {Rational(0), Rational(1)});
  }

  const std::shared_ptr<const ExtensionModulus>& field() const { return field_; }
  /// Coordinates on the power basis, padded to the field degree.
  std::vector<Rational> coordinates(std::size_t degree) const {
    std::vector<Rational> c = coeffs_;
    c.resize(degree);
    return c;
  }
  bool is_zero() const { return coeffs_.empty(); }

  friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    AlgebraicNumber r;
    r.field_ = pick(a, b);
    r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r.coeffs_[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    r.trim();
    return r;
  }
  AlgebraicNumber operator-() const {
    AlgebraicNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a + (-b); }
  friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    AlgebraicNumber r;
    r.field_ = pick(a, b);
    if (a.coeffs_.empty() || b.coeffs_.empty()) return r;
    r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    r.reduce();
    return r;
  }
  friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a * b.inverse(); }

  AlgebraicNumber inverse() const {
    if (is_zero()) throw ContractViolation("division by zero in number field");
    if (coeffs_.size() == 1) return AlgebraicNumber(Rational(1) / coeffs_[0]).with_field(field_);
    // extended Euclid: s*x + t*m = 1
    using Poly = std::vector<Rational>;
    auto trim = [](Poly& p) {
      while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    };
    auto sub_mul = [&](const Poly& a, const Poly& q, const Poly& b) {
      Poly r = a;
      if (!q.empty() && !b.empty()) {
        r.resize(std::max(a.size(), q.size() + b.size() - 1));
        for (std::size_t i = 0; i < q.size(); ++i)
          for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= q[i] * b[j];
      }
      trim(r);
      return r;
    };
    Poly r0 = field_->minimal_polynomial, r1 = coeffs_, s0 = {}, s1 = {Rational(1)};
    while (!(r1.size() == 1)) {
      if (r1.empty()) throw ContractViolation("minimal polynomial is not irreducible");
      Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, Rational(0));
      Poly rem = r0;
      while (rem.size() >= r1.size() && !rem.empty()) {
        std::size_t shift = rem.size() - r1.size();
        Rational f = rem.back() / r1.back();
        q[shift] += f;
        for (std::size_t j = 0; j < r1.size(); ++j) rem[shift + j] -= f * r1[j];
        trim(rem);
      }
      trim(q);
      Poly s2 = sub_mul(s0, q, s1);
      r0 = r1;
      r1 = rem;
      s0 = s1;
      s1 = s2;
    }
    Rational c = r1[0];
    for (auto& x : s1) x /= c;
    return from_coefficients(field_, s1);
  }

  bool operator==(const AlgebraicNumber& o) const { return coeffs_ == o.coeffs_; }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string name = field_ ? field_->generator_name : "a";
    std::string s;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const Rational& c = coeffs_[i];
      if (sgn(c) == 0) continue;
      bool neg = sgn(c) < 0;
      Rational a = abs(c);
      s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
      std::string mono = i == 0 ? "" : (i == 1 ? name : name + "^" + std::to_string(i));
      if (mono.empty())
        s += a.get_str();
      else if (a == 1)
        s += mono;
      else
        s += a.get_str() + "*" + mono;
    }
    return s;
  }

 private:
  AlgebraicNumber with_field(std::shared_ptr<const ExtensionModulus> f) const {
    AlgebraicNumber r = *this;
    r.field_ = std::move(f);
    return r;
  }
  static std::shared_ptr<const ExtensionModulus> pick(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.field_ && b.field_ && a.field_ != b.field_) throw ContractViolation("mixing elements of different number fields");
    return a.field_ ? a.field_ : b.field_;
  }
  void trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  }
  void reduce() {
    trim();
    if (!field_) {
      if (coeffs_.size() > 1) throw ContractViolation("algebraic number without a field");
      return;
    }
    const auto& m = field_->minimal_polynomial;
    const std::size_t deg = m.size() - 1;
    for (std::size_t k = coeffs_.size(); k-- > deg;) {
      Rational c = coeffs_[k];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j <= deg; ++j) coeffs_[k - deg + j] -= c * m[j];
    }
    trim();
  }

  std::shared_ptr<const ExtensionModulus> field_;
  std::vector<Rational> coeffs_;
};

inline bool is_zero(const AlgebraicNumber& x) { return x.is_zero(); }
inline std::string to_string(const AlgebraicNumber& x) { return x.to_string(); }

}  // namespace birch

#endif  // BIRCH_NUMBER_FIELD_HPP
