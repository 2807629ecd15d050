#include <gtest/gtest.h>

#include "birch/poly_gcd.hpp"
#include "birch/radical.hpp"

using namespace birch;

TEST(Polynomial, ArithmeticAndDegree) {
  QPoly x = QPoly::variable(3, 0), y = QPoly::variable(3, 1), z = QPoly::variable(3, 2);
  QPoly f = x * y.pow(2) + z.pow(3).scaled(2);
  EXPECT_EQ(f.homogeneous_degree(), 3u);
  EXPECT_EQ((f - f).total_degree(), -1);
  EXPECT_EQ((x + y).pow(2), x * x + (x * y).scaled(2) + y * y);
  EXPECT_FALSE((f + x).is_homogeneous());
}

TEST(Polynomial, EvaluateIntoExtension) {
  QPoly x = QPoly::variable(2, 0), y = QPoly::variable(2, 1);
  QPoly f = x * x - y.scaled(2);
  std::vector<RealRadical> pt = {RealRadical::root(2, 2) * RealRadical(3), RealRadical(9)};
  EXPECT_TRUE(is_zero(evaluate<RealRadical>(f, std::span<const RealRadical>(pt))));
}

TEST(Polynomial, SubstituteLinearMatchesPointwise) {
  QPoly x = QPoly::variable(3, 0), y = QPoly::variable(3, 1), z = QPoly::variable(3, 2);
  QPoly f = x.pow(3) + (x * y * z).scaled(5) - z.pow(3);
  std::vector<std::vector<Rational>> cols = {{1, 2, 0}, {0, -1, 3}};
  QPoly g = substitute_linear(f, cols);
  EXPECT_EQ(g.num_vars(), 2u);
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) {
      std::vector<Rational> p2 = {a, b};
      std::vector<Rational> p3 = {Rational(a), Rational(2 * a - b), Rational(3 * b)};
      EXPECT_EQ(evaluate(g, p2), evaluate(f, p3));
    }
}

TEST(Polynomial, GradientAndEuler) {
  QPoly x = QPoly::variable(2, 0), y = QPoly::variable(2, 1);
  QPoly f = x.pow(2) * y + y.pow(3).scaled(Rational(1, 2));
  auto g = gradient(f);
  EXPECT_EQ(x * g[0] + y * g[1], f.scaled(3));
}

TEST(Polynomial, MultidegreeComponents) {
  QPoly x = QPoly::variable(3, 0), y = QPoly::variable(3, 1), z = QPoly::variable(3, 2);
  BlockGrading b = BlockGrading::contiguous({1, 2});
  QPoly f = x.pow(3) + x * y * z + y.pow(3);
  auto comps = multidegree_components(f, b);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps.at({1, 2}), x * y * z);
  EXPECT_EQ(block_degree(f, b, 1), 3u);
}

TEST(Polynomial, PrintsWithNames) {
  QPoly x = QPoly::variable(2, 0), y = QPoly::variable(2, 1);
  QPoly f = x * y.pow(2).scaled(-3) + x.pow(3).scaled(Rational(1, 2));
  EXPECT_EQ(f.to_string({"x", "y"}), "1/2*x^3 - 3*x*y^2");
}

TEST(PolyGcd, RecoversPlantedFactor) {
  QPoly x = QPoly::variable(3, 0), y = QPoly::variable(3, 1), z = QPoly::variable(3, 2);
  QPoly g = x * y - z.pow(2) + x;
  QPoly a = g * (x + y + z), b = g * (x - z.pow(3));
  QPoly h = gcd(a, b);
  EXPECT_EQ(h, g.scaled(Rational(1) / g.leading_coefficient()));
  EXPECT_TRUE(divide_exact(a, h).has_value());
  EXPECT_EQ(gcd(x + y, x - y).total_degree(), 0);
}

TEST(PolyGcd, PerfectPowerRoot) {
  QPoly x = QPoly::variable(2, 0), y = QPoly::variable(2, 1);
  QPoly g = x.scaled(2) - y.scaled(Rational(1, 3)) + QPoly::constant(2, 5);
  auto r = polynomial_root<Rational>(g.pow(3), 3, &rational_root_fn);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, g);
  EXPECT_FALSE(polynomial_root<Rational>(g.pow(3) + x, 3, &rational_root_fn));
}
