#ifndef BIRCH_RADICAL_HPP
#define BIRCH_RADICAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "birch/field.hpp"

namespace birch {

/// Product of positive real prime radicals, prod p^{e_p} with every e_p in the open interval (0, 1).
class RadicalMonomial {
 public:
  RadicalMonomial() = default;

  static RadicalMonomial prime_power(unsigned long p, const Rational& e) {
    RadicalMonomial m;
    if (e > 0) m.factors_.emplace_back(p, e);
    return m;
  }

  const std::vector<std::pair<unsigned long, Rational>>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  /// Product; returns the rational factor carried out of the exponent range.
  std::pair<RadicalMonomial, Integer> times(const RadicalMonomial& o) const {
    std::map<unsigned long, Rational> acc;
    for (const auto& [p, e] : factors_) acc[p] += e;
    for (const auto& [p, e] : o.factors_) acc[p] += e;
    RadicalMonomial r;
    Integer carry = 1;
    for (auto& [p, e] : acc) {
      while (e >= 1) {
        e -= 1;
        carry *= p;
      }
      if (e > 0) r.factors_.emplace_back(p, e);
    }
    return {r, carry};
  }

  long double approx() const {
    long double v = 1;
    for (const auto& [p, e] : factors_) v *= std::pow(static_cast<long double>(p), static_cast<long double>(e.get_d()));
    return v;
  }

  mpf_class approx(unsigned bits) const;

  std::string to_string() const {
    std::string s;
    for (const auto& [p, e] : factors_) {
      if (!s.empty()) s += "*";
      s += std::to_string(p) + "^(" + e.get_str() + ")";
    }
    return s;
  }

  auto operator<=>(const RadicalMonomial& o) const {
    // lexicographic on (prime, exponent) pairs
    std::size_t n = std::min(factors_.size(), o.factors_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (factors_[i].first != o.factors_[i].first) return factors_[i].first <=> o.factors_[i].first;
      int c = cmp(factors_[i].second, o.factors_[i].second);
      if (c != 0) return c <=> 0;
    }
    return factors_.size() <=> o.factors_.size();
  }
  bool operator==(const RadicalMonomial& o) const { return factors_ == o.factors_; }

 private:
  std::vector<std::pair<unsigned long, Rational>> factors_;
};

namespace detail {
inline mpf_class mpf_pow_rational(unsigned long p, const Rational& e, unsigned bits) {
  // p^(a/b) via Newton on y^b = p^a
  unsigned long a = e.get_num().get_ui(), b = e.get_den().get_ui();
  mpf_class target(0, bits);
  mpz_class pa;
  mpz_ui_pow_ui(pa.get_mpz_t(), p, a);
  target = pa;
  mpf_class y(std::pow(static_cast<double>(p), e.get_d()), bits);
  for (int it = 0; it < 200; ++it) {
    mpf_class yb(1, bits);
    for (unsigned long k = 0; k + 1 < b; ++k) yb *= y;  // y^{b-1}
    mpf_class next = y - (yb * y - target) / (b * yb);
    mpf_class diff = abs(next - y);
    y = next;
    if (diff == 0) break;
    mpf_class rel = diff / y;
    if (rel < mpf_class(std::ldexp(1.0, -static_cast<int>(std::min(bits, 1000u)) + 8), bits)) break;
  }
  return y;
}
}  // namespace detail

inline mpf_class RadicalMonomial::approx(unsigned bits) const {
  mpf_class v(1, bits);
  for (const auto& [p, e] : factors_) v *= detail::mpf_pow_rational(p, e, bits);
  return v;
}

/// Exact element of the real field generated over Q by positive real radicals of primes.
/// Distinct radical monomials are linearly independent over Q, so the representation is
/// canonical and equality/zero tests are exact.
class RealRadical {
 public:
  RealRadical() = default;
  RealRadical(const Rational& q) {  // NOLINT(google-explicit-constructor)
    if (sgn(q) != 0) terms_.emplace(RadicalMonomial{}, q);
  }
  RealRadical(long v) : RealRadical(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  /// Real k-th root of q (k odd, or q >= 0).
  static RealRadical root(const Rational& q, unsigned long k) {
    if (k == 0) throw ContractViolation("zeroth root");
    if (sgn(q) == 0) return RealRadical();
    if (sgn(q) < 0 && k % 2 == 0) throw ContractViolation("even root of a negative rational is not real");
    Rational coeff = sgn(q) < 0 ? Rational(-1) : Rational(1);
    RadicalMonomial mono;
    auto absorb = [&](const Integer& n, bool denominator) {
      if (n == 1) return;
      for (const auto& [p, e] : factor_small(n)) {
        unsigned long whole = denominator ? (e + k - 1) / k : e / k;
        Rational frac = denominator ? Rational(static_cast<long>(whole * k - e), static_cast<long>(k))
                                    : Rational(static_cast<long>(e % k), static_cast<long>(k));
        frac.canonicalize();
        Integer pw = ipow(Integer(p), whole);
        if (denominator)
          coeff /= Rational(pw);
        else
          coeff *= Rational(pw);
        auto [prod, carry] = mono.times(RadicalMonomial::prime_power(p, frac));
        mono = prod;
        coeff *= Rational(carry);
      }
    };
    absorb(abs(q.get_num()), false);
    absorb(q.get_den(), true);
    RealRadical r;
    r.terms_.emplace(mono, coeff);
    return r;
  }

  /// k-th root of a single-term element (k odd, or positive value).
  std::optional<RealRadical> root(unsigned long k) const {
    if (terms_.empty()) return RealRadical();
    if (terms_.size() != 1) return std::nullopt;
    const auto& [mono, c] = *terms_.begin();
    if (sgn(c) < 0 && k % 2 == 0) return std::nullopt;
    RealRadical r = root(c, k);
    for (const auto& [p, e] : mono.factors()) {
      Rational sub = e / Rational(static_cast<long>(k));
      sub.canonicalize();
      r = r * RealRadical::from_monomial(RadicalMonomial::prime_power(p, sub));
    }
    return r;
  }

  static RealRadical from_monomial(const RadicalMonomial& m, const Rational& c = 1) {
    RealRadical r;
    if (sgn(c) != 0) r.terms_.emplace(m, c);
    return r;
  }

  const std::map<RadicalMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  Rational rational_value() const {
    if (!is_rational()) throw ContractViolation("radical element is not rational");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  friend RealRadical operator+(const RealRadical& a, const RealRadical& b) {
    RealRadical r = a;
    for (const auto& [m, c] : b.terms_) r.add(m, c);
    return r;
  }
  friend RealRadical operator-(const RealRadical& a, const RealRadical& b) {
    RealRadical r = a;
    for (const auto& [m, c] : b.terms_) r.add(m, -c);
    return r;
  }
  RealRadical operator-() const {
    RealRadical r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend RealRadical operator*(const RealRadical& a, const RealRadical& b) {
    RealRadical r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        auto [m, carry] = ma.times(mb);
        r.add(m, Rational(ca * cb * carry));
      }
    return r;
  }
  friend RealRadical operator/(const RealRadical& a, const RealRadical& b) { return a * b.inverse(); }
  RealRadical& operator+=(const RealRadical& o) { return *this = *this + o; }
  RealRadical& operator-=(const RealRadical& o) { return *this = *this - o; }
  RealRadical& operator*=(const RealRadical& o) { return *this = *this * o; }

  bool operator==(const RealRadical& o) const = default;

  RealRadical inverse() const;

  long double approx() const {
    long double v = 0;
    for (const auto& [m, c] : terms_) v += static_cast<long double>(c.get_d()) * m.approx();
    return v;
  }
  double to_double() const { return static_cast<double>(approx()); }

  /// Sign of the real value; exact zero detection, then numeric refinement.
  int sign() const {
    if (terms_.empty()) return 0;
    if (is_rational()) return sgn(terms_.begin()->second);
    for (unsigned bits = 128; bits <= 8192; bits *= 2) {
      mpf_class v(0, bits), mag(0, bits);
      for (const auto& [m, c] : terms_) {
        mpf_class t = m.approx(bits);
        mpf_class cq(c, bits);
        v += cq * t;
        mag += abs(cq * t);
      }
      mpf_class tol = mag * mpf_class(std::ldexp(1.0, -static_cast<int>(bits) / 2), bits);
      if (abs(v) > tol) return sgn(v);
    }
    throw UnsupportedInstance("could not resolve the sign of a radical expression");
  }

 private:
  void add(const RadicalMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }

  std::map<RadicalMonomial, Rational> terms_;
};

inline bool is_zero(const RealRadical& x) { return x.is_zero(); }

inline std::string to_string(const RealRadical& x) {
  if (x.terms().empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    bool neg = sgn(c) < 0;
    Rational a = abs(c);
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (m.is_one())
      os << a.get_str();
    else if (a == 1)
      os << m.to_string();
    else
      os << a.get_str() << "*" << m.to_string();
  }
  return os.str();
}

inline double to_double(const RealRadical& x) { return x.to_double(); }

namespace detail {
/// Solves A y = b over Q by Gaussian elimination; A square and invertible.
inline std::vector<Rational> solve_rational_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) throw ContractViolation("singular system while inverting a radical element");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(a[i][col]) == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  return b;
}
}  // namespace detail

inline RealRadical RealRadical::inverse() const {
  if (terms_.empty()) throw ContractViolation("division by zero in radical field");
  if (terms_.size() == 1) {
    // c*m: 1/m = m' / carry with m*m' rational
    const auto& [m, c] = *terms_.begin();
    RadicalMonomial conj;
    for (const auto& [p, e] : m.factors()) {
      auto [prod, carry] = conj.times(RadicalMonomial::prime_power(p, Rational(1) - e));
      conj = prod;
      (void)carry;
    }
    auto [prod, carry] = m.times(conj);
    (void)prod;
    return from_monomial(conj, Rational(1) / (c * Rational(carry)));
  }
  // Work in the finite subfield spanned by the radicals present in this element.
  std::map<unsigned long, unsigned long> order;
  for (const auto& [m, c] : terms_)
    for (const auto& [p, e] : m.factors()) {
      unsigned long den = e.get_den().get_ui();
      auto& k = order[p];
      k = k == 0 ? den : std::lcm(k, den);
    }
  std::vector<std::pair<unsigned long, unsigned long>> primes(order.begin(), order.end());
  std::size_t dim = 1;
  for (const auto& [p, k] : primes) {
    dim *= k;
    if (dim > 4096) throw UnsupportedInstance("radical field too large to invert in");
  }
  std::vector<RadicalMonomial> basis;
  std::map<RadicalMonomial, std::size_t> index;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rest = idx;
    RadicalMonomial m;
    for (const auto& [p, k] : primes) {
      unsigned long e = rest % k;
      rest /= k;
      Rational ex(static_cast<long>(e), static_cast<long>(k));
      ex.canonicalize();
      m = m.times(RadicalMonomial::prime_power(p, ex)).first;
    }
    index[m] = basis.size();
    basis.push_back(m);
  }
  std::vector<std::vector<Rational>> mat(dim, std::vector<Rational>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    RealRadical col = *this * from_monomial(basis[j]);
    for (const auto& [m, c] : col.terms_) mat[index.at(m)][j] = c;
  }
  std::vector<Rational> rhs(dim);
  rhs[index.at(RadicalMonomial{})] = 1;
  auto y = detail::solve_rational_square(std::move(mat), std::move(rhs));
  RealRadical r;
  for (std::size_t j = 0; j < dim; ++j) r.add(basis[j], y[j]);
  return r;
}

}  // namespace birch

#endif  // BIRCH_RADICAL_HPP
