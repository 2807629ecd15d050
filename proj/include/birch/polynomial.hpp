#ifndef BIRCH_POLYNOMIAL_HPP
#define BIRCH_POLYNOMIAL_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "birch/field.hpp"

namespace birch {

/// Exponent vector with trailing zeros trimmed.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) { trim(); }

  static Monomial variable(std::size_t i, unsigned e = 1) {
    std::vector<unsigned> v(i + 1, 0);
    v[i] = e;
    return Monomial(std::move(v));
  }

  unsigned operator[](std::size_t i) const { return i < exps_.size() ? exps_[i] : 0; }
  std::size_t support_size() const { return exps_.size(); }
  const std::vector<unsigned>& exponents() const { return exps_; }

  unsigned degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }
  bool is_one() const { return exps_.empty(); }

  Monomial operator*(const Monomial& o) const {
    std::vector<unsigned> v(std::max(exps_.size(), o.exps_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)[i] + o[i];
    return Monomial(std::move(v));
  }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > o[i]) return false;
    return true;
  }

  /// o / *this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const {
    std::vector<unsigned> v(o.support_size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = o[i] - (*this)[i];
    return Monomial(std::move(v));
  }

  bool operator==(const Monomial&) const = default;

 private:
  void trim() {
    while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
  }
  std::vector<unsigned> exps_;
};

/// Graded order, ties broken lexicographically (x1 > x2 > ...).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    std::size_t n = std::max(a.support_size(), b.support_size());
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

/// Ordered partition of variables into blocks V_1, ..., V_r.
class BlockGrading {
 public:
  BlockGrading() = default;

  /// Contiguous blocks of the given sizes.
  static BlockGrading contiguous(const std::vector<std::size_t>& sizes) {
    BlockGrading g;
    for (std::size_t b = 0; b < sizes.size(); ++b)
      for (std::size_t k = 0; k < sizes[b]; ++k) g.block_of_.push_back(b);
    g.num_blocks_ = sizes.size();
    return g;
  }

  /// Explicit variable -> block assignment; every block id below the maximum must be used.
  static BlockGrading from_assignment(std::vector<std::size_t> block_of) {
    BlockGrading g;
    g.num_blocks_ = block_of.empty() ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1;
    std::vector<bool> used(g.num_blocks_, false);
    for (auto b : block_of) used[b] = true;
    if (std::find(used.begin(), used.end(), false) != used.end())
      throw ContractViolation("block grading has an empty block");
    g.block_of_ = std::move(block_of);
    return g;
  }

  std::size_t num_vars() const { return block_of_.size(); }
  std::size_t num_blocks() const { return num_blocks_; }
  std::size_t block_of(std::size_t var) const { return block_of_.at(var); }

  std::vector<std::size_t> block_vars(std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < block_of_.size(); ++i)
      if (block_of_[i] == b) out.push_back(i);
    return out;
  }

  std::vector<unsigned> multidegree(const Monomial& m) const {
    if (m.support_size() > block_of_.size()) throw ContractViolation("grading does not cover monomial");
    std::vector<unsigned> md(num_blocks_, 0);
    for (std::size_t i = 0; i < m.support_size(); ++i) md[block_of_[i]] += m[i];
    return md;
  }

 private:
  std::vector<std::size_t> block_of_;
  std::size_t num_blocks_ = 0;
};

/// Sparse distributed polynomial in a fixed number of variables.
namespace detail {
// unqualified calls so that argument-dependent lookup sees overloads declared after this header
template <class K>
bool scalar_is_zero(const K& c) {
  return is_zero(c);
}
template <class K>
std::string scalar_to_string(const K& c) {
  return to_string(c);
}
}  // namespace detail

template <Scalar K>
class Polynomial {
 public:
  using TermMap = std::map<Monomial, K, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const K& c) {
    Polynomial p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Polynomial variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw ContractViolation("variable index out of range");
    Polynomial p(nvars);
    p.add_term(Monomial::variable(i), K(Rational(1)));
    return p;
  }
  static Polynomial term(std::size_t nvars, const Monomial& m, const K& c) {
    Polynomial p(nvars);
    p.add_term(m, c);
    return p;
  }

  std::size_t num_vars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c*m, dropping the entry if it cancels.
  void add_term(const Monomial& m, const K& c) {
    if (m.support_size() > nvars_) throw ContractViolation("monomial uses variables outside the context");
    if (detail::scalar_is_zero(c)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    K sum = it->second + c;
    if (detail::scalar_is_zero(sum))
      terms_.erase(it);
    else
      it->second = std::move(sum);
  }

  K coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? K(Rational(0)) : it->second;
  }

  int total_degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.degree()); }

  /// Degree if homogeneous; nullopt otherwise. The zero polynomial counts as homogeneous of every degree (returns 0).
  std::optional<unsigned> homogeneous_degree() const {
    if (terms_.empty()) return 0u;
    unsigned d = terms_.begin()->first.degree();
    if (terms_.rbegin()->first.degree() != d) return std::nullopt;
    return d;
  }
  bool is_homogeneous() const { return homogeneous_degree().has_value(); }

  const Monomial& leading_monomial() const {
    if (terms_.empty()) throw ContractViolation("zero polynomial has no leading term");
    return terms_.rbegin()->first;
  }
  const K& leading_coefficient() const {
    if (terms_.empty()) throw ContractViolation("zero polynomial has no leading term");
    return terms_.rbegin()->second;
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, K(-c));
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, K(-c));
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, K(ca * cb));
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const K& c) const {
    Polynomial r(nvars_);
    if (detail::scalar_is_zero(c)) return r;
    for (const auto& [m, v] : terms_) r.add_term(m, K(v * c));
    return r;
  }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(nvars_, K(Rational(1)));
    Polynomial b = *this;
    while (e > 0) {
      if (e & 1u) result = result * b;
      e >>= 1u;
      if (e > 0) b = b * b;
    }
    return result;
  }

  /// Same polynomial viewed in a context with more variables (indices preserved).
  Polynomial widened(std::size_t nvars) const {
    if (nvars < nvars_) throw ContractViolation("cannot narrow a polynomial context");
    Polynomial r(nvars);
    r.terms_ = terms_;
    return r;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  std::string to_string(const std::vector<std::string>& names) const;
  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw ContractViolation("polynomials live in different contexts");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

inline std::vector<std::string> default_variable_names(std::size_t n, const std::string& stem = "x") {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

namespace detail {
inline bool needs_parentheses(const std::string& coeff) {
  // a lone signed rational prints without parentheses
  for (std::size_t i = 1; i < coeff.size(); ++i)
    if (coeff[i] == '+' || coeff[i] == '-' || coeff[i] == '*' || coeff[i] == '^' || coeff[i] == '[') return true;
  return false;
}
}  // namespace detail

template <Scalar K>
std::string Polynomial<K>::to_string(const std::vector<std::string>& names) const {
  if (names.size() < nvars_) throw ContractViolation("not enough variable names to print polynomial");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string cs = detail::scalar_to_string(c);
    bool paren = detail::needs_parentheses(cs);
    bool negative = !paren && !cs.empty() && cs[0] == '-';
    if (negative) cs = cs.substr(1);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < m.support_size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      os << (paren ? "(" + cs + ")" : cs);
    } else if (cs == "1") {
      os << mono;
    } else {
      os << (paren ? "(" + cs + ")" : cs) << "*" << mono;
    }
  }
  return os.str();
}

template <Scalar K>
std::string Polynomial<K>::to_string() const {
  return to_string(default_variable_names(nvars_));
}

template <Scalar K>
std::string to_string(const Polynomial<K>& p) {
  return p.to_string();
}

/// Converts coefficients through `fn`, keeping monomials.
template <Scalar T, Scalar K, class Fn>
Polynomial<T> map_coefficients(const Polynomial<K>& f, Fn&& fn) {
  Polynomial<T> r(f.num_vars());
  for (const auto& [m, c] : f.terms()) r.add_term(m, T(fn(c)));
  return r;
}

template <Scalar T, Scalar K>
Polynomial<T> convert(const Polynomial<K>& f) {
  return map_coefficients<T>(f, [](const K& c) { return T(c); });
}

/// Sum of coeff * prod point_i^{e_i}; the point may live in an extension T of the coefficient domain.
template <Scalar T, Scalar K>
T evaluate(const Polynomial<K>& f, std::span<const T> point) {
  if (point.size() != f.num_vars())
    throw ContractViolation("evaluate: point has " + std::to_string(point.size()) + " coordinates, context has " +
                            std::to_string(f.num_vars()));
  std::vector<std::vector<T>> powers(point.size());
  auto power = [&](std::size_t i, unsigned e) -> const T& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(T(Rational(1)));
    while (cache.size() <= e) cache.push_back(T(cache.back() * point[i]));
    return cache[e];
  };
  T acc(Rational(0));
  for (const auto& [m, c] : f.terms()) {
    T term(c);
    for (std::size_t i = 0; i < m.support_size(); ++i)
      if (m[i] > 0) term = T(term * power(i, m[i]));
    acc = T(acc + term);
  }
  return acc;
}

template <Scalar K>
K evaluate(const Polynomial<K>& f, const std::vector<K>& point) {
  return evaluate<K, K>(f, std::span<const K>(point));
}

/// f(images_1, ..., images_n): polynomial composition into the ring of the images.
template <Scalar T, Scalar K>
Polynomial<T> substitute(const Polynomial<K>& f, const std::vector<Polynomial<T>>& images, std::size_t target_vars) {
  if (images.size() != f.num_vars()) throw ContractViolation("substitute: one image per variable required");
  for (const auto& g : images)
    if (g.num_vars() != target_vars) throw ContractViolation("substitute: images must share the target context");
  std::vector<std::vector<Polynomial<T>>> powers(images.size());
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial<T>& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial<T>::constant(target_vars, T(Rational(1))));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  Polynomial<T> out(target_vars);
  for (const auto& [m, c] : f.terms()) {
    Polynomial<T> term = Polynomial<T>::constant(target_vars, T(c));
    for (std::size_t i = 0; i < m.support_size(); ++i)
      if (m[i] > 0) term = term * power(i, m[i]);
    out += term;
  }
  return out;
}

/// g(x_1..x_l) = f(sum_i x_i * column_i). Columns are vectors in f's ambient space.
template <Scalar T, Scalar K>
Polynomial<T> substitute_linear(const Polynomial<K>& f, const std::vector<std::vector<T>>& columns) {
  const std::size_t l = columns.size();
  std::vector<Polynomial<T>> images(f.num_vars(), Polynomial<T>(l));
  for (std::size_t k = 0; k < l; ++k) {
    if (columns[k].size() != f.num_vars())
      throw ContractViolation("substitute_linear: column " + std::to_string(k) + " has wrong dimension");
    for (std::size_t i = 0; i < f.num_vars(); ++i)
      images[i].add_term(Monomial::variable(k), columns[k][i]);
  }
  return substitute<T>(f, images, l);
}

template <Scalar K>
Polynomial<K> derivative(const Polynomial<K>& f, std::size_t var) {
  if (var >= f.num_vars()) throw ContractViolation("derivative: variable out of range");
  Polynomial<K> r(f.num_vars());
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m[var];
    if (e == 0) continue;
    auto exps = m.exponents();
    exps[var] -= 1;
    r.add_term(Monomial(exps), K(c * K(Rational(e))));
  }
  return r;
}

template <Scalar K>
std::vector<Polynomial<K>> gradient(const Polynomial<K>& f) {
  std::vector<Polynomial<K>> g;
  for (std::size_t i = 0; i < f.num_vars(); ++i) g.push_back(derivative(f, i));
  return g;
}

/// Splits f into multi-homogeneous pieces keyed by multidegree; the pieces sum to f.
template <Scalar K>
std::map<std::vector<unsigned>, Polynomial<K>> multidegree_components(const Polynomial<K>& f,
                                                                       const BlockGrading& grading) {
  if (grading.num_vars() != f.num_vars()) throw ContractViolation("grading does not match the polynomial context");
  std::map<std::vector<unsigned>, Polynomial<K>> out;
  for (const auto& [m, c] : f.terms()) {
    auto md = grading.multidegree(m);
    auto it = out.find(md);
    if (it == out.end()) it = out.emplace(md, Polynomial<K>(f.num_vars())).first;
    it->second.add_term(m, c);
  }
  return out;
}

/// True when one block carries the full degree (a "pure" component).
inline bool is_pure_multidegree(const std::vector<unsigned>& md) {
  return std::count_if(md.begin(), md.end(), [](unsigned e) { return e > 0; }) <= 1;
}

/// Re-indexes variables: variable i of f becomes variable index_map[i] in a context of nvars.
template <Scalar K>
Polynomial<K> reindex(const Polynomial<K>& f, const std::vector<std::size_t>& index_map, std::size_t nvars) {
  if (index_map.size() != f.num_vars()) throw ContractViolation("reindex: map size mismatch");
  Polynomial<K> r(nvars);
  for (const auto& [m, c] : f.terms()) {
    std::vector<unsigned> exps(nvars, 0);
    for (std::size_t i = 0; i < m.support_size(); ++i) {
      if (m[i] == 0) continue;
      if (index_map[i] >= nvars) throw ContractViolation("reindex: target index out of range");
      exps[index_map[i]] += m[i];
    }
    r.add_term(Monomial(exps), c);
  }
  return r;
}

/// Degree of f in the variables of block b (max over terms).
template <Scalar K>
unsigned block_degree(const Polynomial<K>& f, const BlockGrading& grading, std::size_t b) {
  unsigned best = 0;
  for (const auto& [m, c] : f.terms()) best = std::max(best, grading.multidegree(m)[b]);
  return best;
}

}  // namespace birch

#endif  // BIRCH_POLYNOMIAL_HPP
