#ifndef BIRCH_INTERVAL_HPP
#define BIRCH_INTERVAL_HPP

#include <algorithm>
#include <string>

#include "birch/field.hpp"

namespace birch {

/// Verified real number: a closed interval with rational endpoints. Results of arithmetic
/// always enclose the exact result; endpoints are rounded outward to a dyadic grid once their
/// denominators grow, which keeps sizes bounded.
class Interval {
 public:
  static constexpr unsigned kGridBits = 256;

  Interval() = default;
  Interval(const Rational& q) : lo_(q), hi_(q) {}  // NOLINT(google-explicit-constructor)
  Interval(long v) : Interval(Rational(v)) {}      // NOLINT(google-explicit-constructor)
  Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
    if (lo_ > hi_) throw ContractViolation("interval with lo > hi");
    round_outward();
  }

  /// Enclosure of a double (exact, doubles are dyadic).
  static Interval from_double(double v) { return Interval(Rational(v)); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  Rational magnitude() const { return std::max(abs(lo_), abs(hi_)); }
  bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
  bool contains(const Rational& q) const { return lo_ <= q && q <= hi_; }

  /// True when |value| <= tol is certified for every point of the enclosure.
  bool certified_within(const Rational& tol) const { return magnitude() <= tol; }

  friend Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_); }
  friend Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_); }
  Interval operator-() const { return Interval(-hi_, -lo_); }
  friend Interval operator*(const Interval& a, const Interval& b) {
    Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw ContractViolation("interval division by an enclosure of zero");
    Rational l = 1 / b.hi_, h = 1 / b.lo_;
    return a * Interval(l, h);
  }

  bool operator==(const Interval& o) const = default;

 private:
  void round_outward() {
    static const Integer grid = ipow(Integer(2), kGridBits);
    if (lo_.get_den() > grid) {
      Integer f;
      Rational scaled = lo_ * Rational(grid);
      mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      lo_ = Rational(f, grid);
      lo_.canonicalize();
    }
    if (hi_.get_den() > grid) {
      Integer c;
      Rational scaled = hi_ * Rational(grid);
      mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      hi_ = Rational(c, grid);
      hi_.canonicalize();
    }
  }

  Rational lo_, hi_;
};

/// Only the degenerate interval [0, 0] is zero; overlap with 0 is queried via contains_zero().
inline bool is_zero(const Interval& x) { return sgn(x.lo()) == 0 && sgn(x.hi()) == 0; }

inline std::string to_string(const Interval& x) {
  if (x.lo() == x.hi()) return x.lo().get_str();
  return "[" + x.lo().get_str() + ", " + x.hi().get_str() + "]";
}

}  // namespace birch

#endif  // BIRCH_INTERVAL_HPP
