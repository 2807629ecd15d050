#ifndef BIRCH_FIELD_HPP
#define BIRCH_FIELD_HPP

#include <concepts>
#include <string>

#include "birch/rational.hpp"

namespace birch {

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Coefficient domains usable by Polynomial: a commutative ring with an embedding of Q,
/// exact zero test, and a printer. Division is only required by the linear algebra layer.
template <class K>
concept Scalar = std::regular<K> && std::constructible_from<K, Rational> && requires(const K a, const K b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { to_string(a) } -> std::convertible_to<std::string>;
};

template <class K>
concept FieldScalar = Scalar<K> && requires(const K a, const K b) {
  { a / b } -> std::convertible_to<K>;
};

template <Scalar K>
K scalar_pow(const K& base, unsigned e) {
  K result(Rational(1));
  K b = base;
  while (e > 0) {
    if (e & 1u) result = K(result * b);
    e >>= 1u;
    if (e > 0) b = K(b * b);
  }
  return result;
}

}  // namespace birch

#endif  // BIRCH_FIELD_HPP
