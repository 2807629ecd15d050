#ifndef BIRCH_RESTRICTION_HPP
#define BIRCH_RESTRICTION_HPP

#include <vector>

#include "birch/linalg.hpp"
#include "birch/number_field.hpp"
#include "birch/polynomial.hpp"

namespace birch {

using AlgPoly = Polynomial<AlgebraicNumber>;

/// Forms f_1..f_m over Q in n*m variables (y_{i,j} is variable i*m + j) with
/// f(sum_j alpha_j y_{.,j}) = sum_j alpha_j f_j(y).
struct ScalarRestriction {
  std::shared_ptr<const ExtensionModulus> field;
  std::vector<AlgebraicNumber> basis;
  std::vector<Polynomial<Rational>> forms;
  std::size_t n = 0;

  std::size_t degree() const { return basis.size(); }

  /// x_i = sum_j alpha_j y_{i,j}
  std::vector<AlgebraicNumber> lift(const std::vector<Rational>& y) const {
    const std::size_t m = basis.size();
    if (y.size() != n * m) throw ContractViolation("lift: wrong number of coordinates");
    std::vector<AlgebraicNumber> x(n, AlgebraicNumber(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x[i] = x[i] + basis[j] * AlgebraicNumber(y[i * m + j]);
    return x;
  }

  /// sum_j alpha_j f_j(y) as a polynomial over L.
  AlgPoly recombined() const {
    AlgPoly acc(n * basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
      acc += convert<AlgebraicNumber>(forms[j]).scaled(basis[j]);
    return acc;
  }
};

inline std::vector<AlgebraicNumber> power_basis(const std::shared_ptr<const ExtensionModulus>& field) {
  std::vector<AlgebraicNumber> b;
  for (std::size_t k = 0; k < field->degree(); ++k) {
    std::vector<Rational> c(k + 1, Rational(0));
    c[k] = 1;
    b.push_back(AlgebraicNumber::from_coefficients(field, c));
  }
  return b;
}

/// Substituted form f(sum_j alpha_j y_{i,j}) in the n*m variables y.
inline AlgPoly substituted_form(const AlgPoly& f, const std::vector<AlgebraicNumber>& basis) {
  const std::size_t n = f.num_vars(), m = basis.size();
  std::vector<AlgPoly> images;
  for (std::size_t i = 0; i < n; ++i) {
    AlgPoly xi(n * m);
    for (std::size_t j = 0; j < m; ++j) xi.add_term(Monomial::variable(i * m + j), basis[j]);
    images.push_back(xi);
  }
  return substitute(f, images, n * m);
}

inline ScalarRestriction restriction_of_scalars(const AlgPoly& f, std::shared_ptr<const ExtensionModulus> field,
                                                std::vector<AlgebraicNumber> basis) {
  const std::size_t m = field->degree();
  if (basis.size() != m) throw ContractViolation("restriction_of_scalars: basis must have [L:K] elements");
  Matrix<Rational> B(m, std::vector<Rational>(m));  // B[k][j] = coordinate k of alpha_j
  for (std::size_t j = 0; j < m; ++j) {
    if (basis[j].field() && basis[j].field() != field) throw ContractViolation("restriction_of_scalars: basis lives in another field");
    auto c = basis[j].coordinates(m);
    for (std::size_t k = 0; k < m; ++k) B[k][j] = c[k];
  }
  if (rank(B) != m) throw ContractViolation("restriction_of_scalars: basis elements are linearly dependent");

  AlgPoly g = substituted_form(f, basis);
  const std::size_t N = f.num_vars() * m;
  // coordinates of g in the power basis: g = sum_k alpha^k G_k
  std::vector<Polynomial<Rational>> G(m, Polynomial<Rational>(N));
  for (const auto& [mono, c] : g.terms()) {
    auto coords = c.coordinates(m);
    for (std::size_t k = 0; k < m; ++k)
      if (sgn(coords[k]) != 0) G[k].add_term(mono, coords[k]);
  }
  // G_k = sum_j B[k][j] f_j, so f = B^{-1} G
  Matrix<Rational> aug = B;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) aug[k].push_back(Rational(k == j ? 1 : 0));
  rref(aug);
  ScalarRestriction out{field, basis, {}, f.num_vars()};
  for (std::size_t j = 0; j < m; ++j) {
    Polynomial<Rational> fj(N);
    for (std::size_t k = 0; k < m; ++k)
      if (sgn(aug[j][m + k]) != 0) fj += G[k].scaled(aug[j][m + k]);
    out.forms.push_back(fj);
  }
  return out;
}

inline ScalarRestriction restriction_of_scalars(const AlgPoly& f, std::shared_ptr<const ExtensionModulus> field) {
  return restriction_of_scalars(f, field, power_basis(field));
}

}  // namespace birch

#endif  // BIRCH_RESTRICTION_HPP
