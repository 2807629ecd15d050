#include <gtest/gtest.h>

#include "birch/regularize.hpp"

using namespace birch;

namespace {

QPoly var(std::size_t n, std::size_t i) { return QPoly::variable(n, i); }

QPoly random_form(std::size_t n, unsigned d, Rng& rng, long h = 3) {
  QPoly f(n);
  std::vector<unsigned> e(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      e[i] = left;
      f.add_term(Monomial(e), Rational(rng.integer(-h, h)));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, d);
  return f;
}

// Brute-force strength of an integer quadratic form: repeatedly complete squares. The quadratic
// has strength <= k iff it can be written with k products; over C this is ceil(rank/2), which the
// oracle computes as the rank of the symmetric matrix by exact fraction-free elimination on longs.
unsigned oracle_quadratic_strength(std::vector<std::vector<long>> m) {
  const std::size_t n = m.size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t p = r;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      long a = m[r][c], b = m[i][c];
      for (std::size_t j = 0; j < n; ++j) m[i][j] = a * m[i][j] - b * m[r][j];
      long g = 0;
      for (auto x : m[i]) g = std::gcd(g, std::labs(x));
      if (g > 1)
        for (auto& x : m[i]) x /= g;
    }
    ++r;
  }
  return static_cast<unsigned>((r + 1) / 2);
}

}  // namespace

TEST(DegreeTuple, SortedDescendingAndOrdered) {
  DegreeTuple a{3, 5, 3};
  EXPECT_EQ(a.to_string(), "(5,3,3)");
  EXPECT_TRUE(DegreeTuple({5, 3}) < DegreeTuple({5, 3, 3}));
  EXPECT_TRUE(DegreeTuple({5, 3, 3, 3, 3}) < DegreeTuple({5, 5}));
  EXPECT_TRUE(DegreeTuple({3, 3, 1, 1}) < DegreeTuple({3, 3, 3}));
  EXPECT_FALSE(DegreeTuple({3}) < DegreeTuple({3}));
}

TEST(DegreeTuple, ReplacingAnEntryBySmallerOnesDecreases) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<unsigned> e;
    for (int k = rng.integer(1, 5); k > 0; --k) e.push_back(static_cast<unsigned>(rng.integer(2, 7)));
    DegreeTuple before(e);
    auto after = e;
    std::size_t pos = static_cast<std::size_t>(rng.integer(0, static_cast<long>(e.size()) - 1));
    unsigned d = after[pos];
    after.erase(after.begin() + static_cast<long>(pos));
    for (int k = rng.integer(0, 6); k > 0; --k) after.push_back(static_cast<unsigned>(rng.integer(1, d - 1)));
    EXPECT_TRUE(DegreeTuple(after) < before);
  }
}

TEST(Decomposition, VerifyAcceptsAndRejects) {
  const std::size_t n = 6;
  QPoly f = var(n, 0) * var(n, 1) * var(n, 2) + var(n, 3) * var(n, 4) * var(n, 5);
  DecompositionCertificate<Rational> good{f, {{var(n, 0) * var(n, 1), var(n, 2)}, {var(n, 3) * var(n, 4), var(n, 5)}}};
  EXPECT_TRUE(verify_decomposition(good));
  auto bad_sum = good;
  bad_sum.pairs.pop_back();
  EXPECT_EQ(verify_decomposition(bad_sum).reason, "sum-mismatch");
  DecompositionCertificate<Rational> bad_degree{f, {{QPoly::constant(n, Rational(1)), f}}};
  EXPECT_EQ(verify_decomposition(bad_degree).reason, "pair-0-degree-constraint");
  DecompositionCertificate<Rational> bad_homog{f, {{var(n, 0) + var(n, 1) * var(n, 1), var(n, 2)}}};
  EXPECT_EQ(verify_decomposition(bad_homog).reason, "pair-0-not-homogeneous");
}

TEST(Decomposition, ProductsOfDisjointMonomials) {
  const std::size_t n = 6;
  QPoly f = var(n, 0) * var(n, 1) * var(n, 2) + var(n, 3) * var(n, 4) * var(n, 5);
  auto cert = decomposition_search(f, 2, SolverBudget{});
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->size(), 2u);
  EXPECT_TRUE(verify_decomposition(*cert));
  EXPECT_FALSE(decomposition_search(f, 1, SolverBudget{}));
}

TEST(Decomposition, GenericTernaryCubicHasNoSinglePair) {
  Rng rng(3);
  QPoly f = random_form(3, 3, rng, 5);
  EXPECT_FALSE(decomposition_search(f, 1, SolverBudget{}));
}

TEST(Decomposition, FindsHiddenLinearFactor) {
  const std::size_t n = 4;
  Rng rng(11);
  QPoly ell = var(n, 0).scaled(Rational(2)) - var(n, 1) + var(n, 2).scaled(Rational(3, 2)) + var(n, 3);
  QPoly q = random_form(n, 2, rng);
  auto cert = decomposition_search(ell * q, 1, SolverBudget{});
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->size(), 1u);
  EXPECT_TRUE(verify_decomposition(*cert));
}

TEST(Decomposition, FindsSubspaceAfterCoordinateChange) {
  const std::size_t n = 5;
  Rng rng(5);
  QPoly l1 = var(n, 0) + var(n, 1) - var(n, 3), l2 = var(n, 1).scaled(Rational(2)) + var(n, 2) + var(n, 4);
  QPoly f = l1 * random_form(n, 2, rng) + l2 * random_form(n, 2, rng);
  auto cert = decomposition_search(f, 2, SolverBudget{});
  ASSERT_TRUE(cert);
  EXPECT_LE(cert->size(), 2u);
  EXPECT_TRUE(verify_decomposition(*cert));
}

TEST(Decomposition, ZeroFormIsEmptySum) {
  auto cert = decomposition_search(QPoly(3), 2, SolverBudget{});
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->size(), 0u);
}

TEST(Decomposition, RationalRootsOfUnivariate) {
  // 6t^3 - 5t^2 - 2t + 1 = (t - 1)(2t + 1)(3t - 1)
  auto r = detail::rational_roots({Rational(1), Rational(-2), Rational(-5), Rational(6)});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], Rational(-1, 2));
  EXPECT_EQ(r[1], Rational(1, 3));
  EXPECT_EQ(r[2], Rational(1));
  EXPECT_TRUE(detail::rational_roots({Rational(-2), Rational(0), Rational(1)}).empty());
}

TEST(QuadraticStrength, MatchesIndependentRankOracle) {
  Rng rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
    QPoly q(n);
    std::vector<std::vector<long>> twice(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        long c = rng.integer(-2, 2);
        if (trial % 3 == 0 && rng.integer(0, 1)) c = 0;
        if (c == 0) continue;
        std::vector<unsigned> e(n, 0);
        ++e[i];
        ++e[j];
        q.add_term(Monomial(e), Rational(c));
        if (i == j)
          twice[i][i] = 2 * c;
        else
          twice[i][j] = twice[j][i] = c;
      }
    EXPECT_EQ(quadratic_strength(q), oracle_quadratic_strength(twice)) << q.to_string();
  }
}

TEST(QuadraticStrength, Examples) {
  const std::size_t n = 4;
  QPoly q = var(n, 0) * var(n, 1) + var(n, 2) * var(n, 3);
  EXPECT_EQ(quadratic_strength(q), 2u);
  EXPECT_EQ(quadratic_strength(QPoly(var(n, 0) * var(n, 0))), 1u);
  EXPECT_EQ(quadratic_strength(QPoly(n)), 0u);
  EXPECT_THROW(quadratic_strength(QPoly(var(n, 0) * var(n, 0) * var(n, 1))), ContractViolation);
}

TEST(DiagonalStrength, LowerBoundHalfTheVariables) {
  DiagonalEquation<Rational> eq{{Rational(1), Rational(2), Rational(-3), Rational(5), Rational(7)}, 3};
  auto b = diagonal_strength_lower(eq);
  ASSERT_TRUE(b.lower);
  EXPECT_EQ(*b.lower, Rational(5, 2));
  DiagonalEquation<Rational> lin{{Rational(1), Rational(1)}, 1};
  EXPECT_TRUE(diagonal_strength_lower(lin).lower_infinite);
}

TEST(CollectiveStrength, SumsOfSquares) {
  const std::size_t n = 4;
  QPoly a = var(n, 0) * var(n, 0) + var(n, 1) * var(n, 1), b = var(n, 2) * var(n, 2) + var(n, 3) * var(n, 3);
  auto bounds = collective_strength_bounds({a, b}, SolverBudget{});
  ASSERT_TRUE(bounds.lower);
  ASSERT_TRUE(bounds.upper);
  EXPECT_EQ(*bounds.lower, Rational(1));
  EXPECT_EQ(*bounds.upper, 2u);
}

TEST(CollectiveStrength, DependentFormsHaveZero) {
  const std::size_t n = 3;
  QPoly a = var(n, 0) * var(n, 1) * var(n, 2);
  auto bounds = collective_strength_bounds({a, a.scaled(Rational(2))}, SolverBudget{});
  EXPECT_EQ(*bounds.upper, 0u);
  EXPECT_EQ(*bounds.lower, Rational(0));
}

TEST(CollectiveStrength, DiagonalPencil) {
  const std::size_t n = 6;
  QPoly a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.add_term(Monomial::variable(i, 3), Rational(1));
    b.add_term(Monomial::variable(i, 3), Rational(static_cast<long>(i < 3 ? 1 : 2)));
  }
  // b - a has support 3
  auto bounds = collective_strength_bounds({a, b}, SolverBudget{});
  ASSERT_TRUE(bounds.lower);
  EXPECT_EQ(*bounds.lower, Rational(3, 2));
  ASSERT_TRUE(bounds.upper);
  EXPECT_GE(Rational(static_cast<long>(*bounds.upper)), *bounds.lower);
}

TEST(Regularize, PencilExample) {
  const std::size_t n = 4;
  QPoly x = var(n, 0), y = var(n, 1), z = var(n, 2), w = var(n, 3);
  QPoly f1 = x * x * x + y * y * y, f2 = f1 + z * (w * w + z * z);
  auto res = regularize({f1, f2}, [](const DegreeTuple&) { return std::size_t{1}; }, SolverBudget{});
  EXPECT_TRUE(verify_membership(res));
  EXPECT_GE(res.trace.size(), 2u);
  // either x^3 + y^3 was factored or f2 - f1 = z (w^2 + z^2) was split off; both leave a linear generator
  bool has_linear = false;
  for (const auto& g : res.generators) has_linear = has_linear || g.total_degree() == 1;
  EXPECT_TRUE(has_linear);
  for (const auto& g : res.generators)
    if (g.total_degree() >= 2) EXPECT_FALSE(decomposition_search(g, 1, SolverBudget{}));
}

TEST(Regularize, TraceDecreasesOnRandomLowStrengthInputs) {
  Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 6;
    std::vector<QPoly> forms;
    for (int k = 0; k < 2; ++k) {
      unsigned d = trial % 2 ? 5 : 3;
      QPoly f = random_form(n, 1, rng) * random_form(n, d - 1, rng);
      if (k == 1) f += forms[0].scaled(Rational(2));
      forms.push_back(f);
    }
    auto res = regularize(forms, [](const DegreeTuple&) { return std::size_t{2}; }, SolverBudget{});
    EXPECT_TRUE(verify_membership(res)) << verify_membership(res).reason;
    EXPECT_GE(res.steps.size(), 1u);
    for (std::size_t k = 1; k < res.trace.size(); ++k) EXPECT_TRUE(res.trace[k] < res.trace[k - 1]);
  }
}

TEST(Regularize, RejectsEvenDegree) {
  QPoly q = var(2, 0) * var(2, 1);
  EXPECT_THROW(regularize({q}, [](const DegreeTuple&) { return std::size_t{1}; }, SolverBudget{}), ContractViolation);
}
