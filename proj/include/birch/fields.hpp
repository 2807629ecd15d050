#ifndef BIRCH_FIELDS_HPP
#define BIRCH_FIELDS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "birch/field.hpp"
#include "birch/rational.hpp"

namespace birch {

enum class FieldKind { Rationals, RealClosed, RealFunctionField };

/// A supported base field together with what is known about its diagonal-equation bound N_K(d).
struct BirchField {
  FieldKind kind = FieldKind::RealClosed;
  std::size_t params = 0;  // number of t-variables for RealFunctionField

  static BirchField rationals() { return {FieldKind::Rationals, 0}; }
  static BirchField reals() { return {FieldKind::RealClosed, 0}; }
  static BirchField real_function_field(std::size_t p) {
    if (p == 0) throw ContractViolation("R(t1..tp) needs p >= 1");
    return {FieldKind::RealFunctionField, p};
  }

  /// Known upper bound for N_K(d), d odd. Absent over Q.
  std::optional<Integer> nk_bound(unsigned d) const {
    if (d % 2 == 0) throw ContractViolation("N_K(d) is only tabulated for odd d");
    switch (kind) {
      case FieldKind::RealClosed:
        return Integer(2);
      case FieldKind::RealFunctionField:
        return ipow(Integer(d), params) + 1;
      case FieldKind::Rationals:
        break;
    }
    return std::nullopt;
  }

  bool exact_real_leaf() const { return kind != FieldKind::Rationals; }

  /// Parses "Q", "R", "R(t)", "R(t1)", "R(t1..t3)" or "R(t1,t2)".
  static BirchField parse(const std::string& text) {
    std::string s;
    for (char c : text)
      if (c != ' ') s += c;
    if (s == "Q" || s == "QQ") return rationals();
    if (s == "R" || s == "RR") return reals();
    if (s.size() > 3 && s.rfind("R(", 0) == 0 && s.back() == ')') {
      std::string inner = s.substr(2, s.size() - 3);
      auto index_of = [&](const std::string& v) -> std::size_t {
        if (v == "t") return 1;
        if (v.size() < 2 || v[0] != 't') throw ContractViolation("bad field parameter '" + v + "'");
        for (std::size_t i = 1; i < v.size(); ++i)
          if (v[i] < '0' || v[i] > '9') throw ContractViolation("bad field parameter '" + v + "'");
        return std::stoul(v.substr(1));
      };
      std::size_t p = 0;
      if (auto dots = inner.find(".."); dots != std::string::npos) {
        std::size_t a = index_of(inner.substr(0, dots)), b = index_of(inner.substr(dots + 2));
        if (a != 1 || b < a) throw ContractViolation("field parameters must be t1..tp");
        p = b;
      } else {
        std::size_t count = 0, start = 0;
        while (start <= inner.size()) {
          auto comma = inner.find(',', start);
          std::string v = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          if (index_of(v) != count + 1 && !(v == "t" && count == 0)) throw ContractViolation("field parameters must be t1..tp");
          ++count;
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        p = count;
      }
      return real_function_field(p);
    }
    throw ContractViolation("unknown field '" + text + "' (expected Q, R or R(t1..tp))");
  }

  std::string to_string() const {
    switch (kind) {
      case FieldKind::Rationals:
        return "Q";
      case FieldKind::RealClosed:
        return "R";
      case FieldKind::RealFunctionField:
        return params == 1 ? "R(t1)" : "R(t1.." + std::string("t") + std::to_string(params) + ")";
    }
    return "?";
  }

  bool operator==(const BirchField&) const = default;
};

struct SolverBudget {
  Integer height_bound = 16;
  unsigned restarts = 32;
  unsigned newton_iters = 80;
  Rational residual_tol = Rational(1, 1000000000);
  std::uint64_t seed = 0;
  std::size_t search_limit = 2000000;  // evaluations in exhaustive searches

  void validate() const {
    if (height_bound <= 0 || restarts == 0 || newton_iters == 0 || sgn(residual_tol) <= 0)
      throw ContractViolation("solver budget entries must be positive");
  }
};

/// a_1 x_1^d + ... + a_n x_n^d = 0 with all a_i nonzero and d odd.
template <class K>
struct DiagonalEquation {
  std::vector<K> coefficients;
  unsigned degree = 3;

  void validate() const {
    if (coefficients.empty()) throw ContractViolation("diagonal equation without variables");
    if (degree % 2 == 0) throw ContractViolation("diagonal equation degree must be odd");
    for (const auto& c : coefficients)
      if (is_zero(c)) throw ContractViolation("diagonal equation coefficients must be nonzero");
  }
};

/// Deterministic random source used across solvers; sub-streams are derived from (seed, stream id).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : eng_(mix(seed, stream)) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  long nonzero(long bound) {
    long v = 0;
    while (v == 0) v = integer(-bound, bound);
    return v;
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  Rational rational(long num_bound, long den_bound) {
    Rational q(integer(-num_bound, num_bound), integer(1, den_bound));
    q.canonicalize();
    return q;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::mt19937_64 eng_;
};

}  // namespace birch

#endif  // BIRCH_FIELDS_HPP
