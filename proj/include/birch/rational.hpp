#ifndef BIRCH_RATIONAL_HPP
#define BIRCH_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace birch {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a search or solver runs out of budget. Never means "no solution exists".
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the requested field/operation combination is not supported.
class UnsupportedInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == '+') s.erase(s.begin());
  if (s.empty()) throw ContractViolation("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw ContractViolation("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw ContractViolation("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& q, unsigned long e) {
  Rational r(ipow(q.get_num(), e), ipow(q.get_den(), e));
  return r;
}

inline std::optional<Integer> exact_root(const Integer& n, unsigned long d) {
  if (d == 0) return std::nullopt;
  if (n < 0) {
    if (d % 2 == 0) return std::nullopt;
    auto r = exact_root(Integer(-n), d);
    if (!r) return std::nullopt;
    return Integer(-*r);
  }
  Integer r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), d) == 0) return std::nullopt;
  return r;
}

/// Rational d-th root of q when q is a perfect d-th power in Q.
inline std::optional<Rational> exact_root(const Rational& q, unsigned long d) {
  auto num = exact_root(q.get_num(), d);
  if (!num) return std::nullopt;
  auto den = exact_root(q.get_den(), d);
  if (!den) return std::nullopt;
  Rational r(*num, *den);
  r.canonicalize();
  return r;
}

/// Prime factorisation of |n| by trial division plus a primality test on the cofactor.
inline std::map<unsigned long, unsigned> factor_small(Integer n) {
  std::map<unsigned long, unsigned> out;
  if (n < 0) n = -n;
  if (n == 0) throw ContractViolation("cannot factor zero");
  for (unsigned long p = 2; p < 1000000 && n > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[p];
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
    if (Integer(p) * p > n) break;
  }
  if (n > 1) {
    if (!n.fits_ulong_p() || mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw UnsupportedInstance("integer too large to factor for radical arithmetic: " + n.get_str());
    ++out[n.get_ui()];
  }
  return out;
}

/// Best rational approximation with denominator <= max_den (continued fractions).
inline Rational rationalize(double x, const Integer& max_den) {
  if (!std::isfinite(x)) throw ContractViolation("cannot rationalise a non-finite value");
  Rational exact(x);
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Rational rest = exact;
  for (int iter = 0; iter < 64; ++iter) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    Integer h2 = a * h1 + h0;
    Integer k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  if (k1 == 0) return Rational(h0, k0);
  Rational r(h1, k1);
  r.canonicalize();
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace birch

#endif  // BIRCH_RATIONAL_HPP
