#include <gtest/gtest.h>

#include "birch/normal_form.hpp"
#include "birch/orthogonal.hpp"
#include "birch/specialize.hpp"

using namespace birch;

namespace {

const BirchField R = BirchField::reals();
const BirchField Q = BirchField::rationals();

QPoly var(std::size_t n, std::size_t i) { return QPoly::variable(n, i); }

std::vector<Rational> random_coefficients(std::size_t n, Rng& rng) {
  std::vector<Rational> c;
  while (c.size() < n) {
    Rational q(rng.integer(-9, 9), rng.integer(1, 4));
    q.canonicalize();
    if (sgn(q) != 0) c.push_back(q);
  }
  return c;
}

// diagonal cubic in n variables plus a dense cubic on the last `width` coordinates
QPoly perturbed_diagonal(std::size_t n, std::size_t width, Rng& rng) {
  QPoly f(n);
  auto c = random_coefficients(n, rng);
  for (std::size_t i = 0; i < n; ++i) f.add_term(Monomial::variable(i, 3), c[i]);
  for (std::size_t i = n - width; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        if (!(i == j && j == k)) f.add_term(Monomial::variable(i) * Monomial::variable(j) * Monomial::variable(k), Rational(rng.integer(-2, 2)));
  return f;
}

}  // namespace

TEST(Multihomogeneous, LinearLeaf) {
  // alpha^2 beta_1 + beta_2 on K^1 x K^2, odd in beta
  const std::size_t n = 3;
  QPoly f = var(n, 0) * var(n, 0) * var(n, 1) + var(n, 2);
  auto sol = solve_multihomogeneous({f}, BlockGrading::contiguous({1, 2}), {1}, std::nullopt, R, SolverBudget{});
  EXPECT_TRUE(evaluate(convert<RealRadical>(f), sol.point).is_zero());
  EXPECT_FALSE(sol.point[1].is_zero() && sol.point[2].is_zero());
}

TEST(Multihomogeneous, EmptySystemWithAvoid) {
  QPoly g = var(2, 0);
  auto sol = solve_multihomogeneous({}, BlockGrading::contiguous({1, 1}), {}, g, R, SolverBudget{});
  EXPECT_FALSE(sol.point[0].is_zero());
}

TEST(Multihomogeneous, DiagonalSpecializationSystemAgainstDirectSolve) {
  // 3(a1^2 b1 + a2^2 b2) = 0 with -3(a1 b1^2 + a2 b2^2) != 0; direct parametric solve: for fixed
  // alpha the solutions are beta = t (a2^2, -a1^2), and f^2 = -3 t^2 a1^2 a2^2 (a2^2 + a1^2) ... != 0
  const std::size_t n = 4;
  QPoly f1 = (var(n, 0) * var(n, 0) * var(n, 2) + var(n, 1) * var(n, 1) * var(n, 3)).scaled(Rational(3));
  QPoly f2 = (var(n, 0) * var(n, 2) * var(n, 2) + var(n, 1) * var(n, 3) * var(n, 3)).scaled(Rational(-3));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverBudget b;
    b.seed = seed;
    auto sol = solve_multihomogeneous({f1}, BlockGrading::contiguous({2, 2}), {1}, f2, R, b);
    auto a1 = sol.point[0], a2 = sol.point[1], b1 = sol.point[2], b2 = sol.point[3];
    EXPECT_TRUE((a1 * a1 * b1 + a2 * a2 * b2).is_zero());
    EXPECT_FALSE((a1 * b1 * b1 + a2 * b2 * b2).is_zero());
    // oracle: beta is proportional to (a2^2, -a1^2)
    EXPECT_TRUE((b1 * a1 * a1 + b2 * a2 * a2).is_zero());
  }
}

TEST(Multihomogeneous, TwoDesignatedBlocksUseRecursion) {
  // f = a^2 b (odd in b), g = a b^2 (odd in a) on K^2 x K^2
  const std::size_t n = 4;
  QPoly f = var(n, 0) * var(n, 0) * var(n, 2) + var(n, 1) * var(n, 1) * var(n, 3).scaled(Rational(2));
  QPoly g = var(n, 0) * var(n, 2) * var(n, 2) - var(n, 1) * var(n, 3) * var(n, 3);
  auto sol = solve_multihomogeneous({f, g}, BlockGrading::contiguous({2, 2}), {1, 0}, std::nullopt, R, SolverBudget{});
  EXPECT_TRUE(evaluate(convert<RealRadical>(f), sol.point).is_zero());
  EXPECT_TRUE(evaluate(convert<RealRadical>(g), sol.point).is_zero());
}

TEST(Multihomogeneous, RejectsEvenDesignation) {
  QPoly f = var(2, 0) * var(2, 1) * var(2, 1);
  EXPECT_THROW(solve_multihomogeneous({f}, BlockGrading::contiguous({1, 1}), {1}, std::nullopt, R, SolverBudget{}),
               ContractViolation);
}

TEST(Bihomogeneous, SmallExample) {
  auto sys = build_bihomogeneous_system({{Rational(1), Rational(1)}}, {{RealRadical(1), RealRadical(-1)}}, 3);
  RPoly f1(2), f2(2);
  f1.add_term(Monomial({2, 1}), RealRadical(3));
  f2.add_term(Monomial({1, 2}), RealRadical(-3));
  EXPECT_EQ(sys.forms[0], f1);
  EXPECT_EQ(sys.forms[1], f2);
  auto lin = build_bihomogeneous_system({{Rational(2), Rational(-2)}}, {{RealRadical(1), RealRadical(1)}}, 1);
  RPoly l(2);
  l.add_term(Monomial({0, 1}), RealRadical(-2));
  EXPECT_EQ(lin.forms[0], l);
  EXPECT_THROW(build_bihomogeneous_system({{Rational(1), Rational(1)}}, {{RealRadical(1), RealRadical(1)}}, 3),
               ContractViolation);
}

TEST(Bihomogeneous, MatchesSymbolicExpansion) {
  // f(x v + y w) with v = (alpha_i u_i), w = beta_i e_{i,m}: compare components in x, y
  Rng rng(4);
  for (unsigned d : {3u, 5u}) {
    const std::size_t r = 2, m = 2;
    std::vector<std::vector<Rational>> c;
    std::vector<RVec> u;
    for (std::size_t i = 0; i < r; ++i) {
      auto block = random_coefficients(m, rng);
      c.push_back(block);
      u.push_back(solve_diagonal_real({block, d}));
    }
    auto sys = build_bihomogeneous_system(c, u, d);
    // ring: alpha (r), beta (r), x, y
    const std::size_t N = 2 * r + 2;
    std::vector<RPoly> images;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        RPoly img(N);
        img.add_term(Monomial::variable(i) * Monomial::variable(2 * r), u[i][j]);
        if (j == sys.last[i]) img.add_term(Monomial::variable(r + i) * Monomial::variable(2 * r + 1), RealRadical(1));
        images.push_back(img);
      }
    std::vector<Rational> flat;
    for (const auto& b : c) flat.insert(flat.end(), b.begin(), b.end());
    RPoly expanded = substitute(diagonal_form(flat, d), images, N);
    RPoly rebuilt(N);
    for (unsigned j = 1; j <= d; ++j) {
      std::vector<std::size_t> map;
      for (std::size_t k = 0; k < 2 * r; ++k) map.push_back(k);
      RPoly fj = reindex(sys.forms[j - 1], map, N);
      RPoly xy(N);
      xy.add_term(Monomial::variable(2 * r, d - j) * Monomial::variable(2 * r + 1, j), RealRadical(1));
      rebuilt += fj * xy;
    }
    EXPECT_EQ(expanded, rebuilt) << "d=" << d;
  }
}

TEST(Specialize, LinearCase) {
  auto s = specialize_diagonal({Rational(1), Rational(1)}, 1, R, SolverBudget{});
  EXPECT_EQ(s.v[0], RealRadical(1));
  EXPECT_EQ(s.w[1], RealRadical(1));
  EXPECT_EQ(s.a, RealRadical(1));
  EXPECT_TRUE(check_specialization({Rational(1), Rational(1)}, 1, s));
}

TEST(Specialize, SumOfFourCubes) {
  std::vector<Rational> c(4, Rational(1));
  auto s = specialize_diagonal(c, 3, R, SolverBudget{});
  EXPECT_TRUE(check_specialization(c, 3, s));
  EXPECT_EQ(s.blocks, 2u);
}

TEST(Specialize, OneBlockIsNotEnough) {
  EXPECT_THROW(specialize_diagonal({Rational(1), Rational(1)}, 3, R, SolverBudget{}), BudgetExhausted);
}

TEST(Specialize, RandomCubicsAndQuintics) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    for (unsigned d : {3u, 5u}) {
      std::size_t n = d == 3 ? 4 + 2 * static_cast<std::size_t>(trial % 3) : 8;
      auto c = random_coefficients(n, rng);
      SolverBudget b;
      b.seed = static_cast<std::uint64_t>(trial);
      auto s = specialize_diagonal(c, d, R, b);
      EXPECT_TRUE(check_specialization(c, d, s));
    }
  }
}

TEST(Specialize, OverRationalsWithSolvableBlocks) {
  // blocks (1, 1, -2) have the zero (1, 1, 1)
  std::vector<Rational> c = {Rational(1), Rational(1), Rational(-2), Rational(1), Rational(2), Rational(-3)};
  auto s = specialize_diagonal(c, 3, Q, SolverBudget{});
  EXPECT_TRUE(check_specialization(c, 3, s));
  for (const auto& x : s.v) EXPECT_TRUE(x.is_rational());
  for (const auto& x : s.w) EXPECT_TRUE(x.is_rational());
}

TEST(Specialize, AddDiagonalTerm) {
  std::vector<Rational> c = {Rational(1), Rational(1), Rational(1), Rational(1), Rational(7)};
  auto nf = normalize_diagonal(c, 3, R, SolverBudget{});
  EXPECT_EQ(nf.b, RealRadical(7));
  EXPECT_EQ(nf.u[4], RealRadical(1));
  EXPECT_TRUE(check_normalization(c, 3, nf));
}

TEST(Orthogonal, DiagonalFormUsesStandardBasis) {
  const std::size_t n = 4;
  QPoly f(n);
  for (std::size_t i = 0; i < n; ++i) f.add_term(Monomial::variable(i, 3), Rational(static_cast<long>(i) + 1));
  auto fam = brauer_orthogonal_sequence(f, n, R, SolverBudget{});
  EXPECT_EQ(fam.method, "coordinate");
  EXPECT_TRUE(is_orthogonal(f, fam.vectors).ok);
  EXPECT_TRUE(verify_orthogonal_family(fam));
}

TEST(Orthogonal, DenseCubicPair) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 4;
    QPoly f(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k)
          f.add_term(Monomial::variable(i) * Monomial::variable(j) * Monomial::variable(k), Rational(rng.nonzero(4)));
    SolverBudget b;
    b.seed = static_cast<std::uint64_t>(trial);
    auto fam = brauer_orthogonal_sequence(f, 2, R, b);
    EXPECT_TRUE(is_orthogonal(f, fam.vectors).ok);
    EXPECT_TRUE(verify_orthogonal_family(fam));
  }
}

TEST(Orthogonal, SequenceOverRationalsIsUnsupported) {
  QPoly f = var(2, 0) * var(2, 0) * var(2, 1) + var(2, 1) * var(2, 1) * var(2, 1);
  EXPECT_THROW(brauer_orthogonal_sequence(f, 2, Q, SolverBudget{}), UnsupportedInstance);
}

TEST(Orthogonal, DetectsMixedTerm) {
  QPoly f = var(2, 0) * var(2, 0) * var(2, 1);
  OrthogonalFamily fam;
  fam.forms = {f};
  fam.vectors = {detail::unit_vector(2, 0), detail::unit_vector(2, 1)};
  EXPECT_FALSE(is_orthogonal(f, fam.vectors).ok);
  auto chk = verify_orthogonal_family(fam);
  EXPECT_FALSE(chk);
  EXPECT_EQ(chk.reason, "form-0-mixed-term");
}

TEST(Orthogonal, CoordinateBlocksForSparseSystem) {
  // two cubics, diagonal part plus an interaction on the last three coordinates
  const std::size_t n = 9;
  QPoly f(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.add_term(Monomial::variable(i, 3), Rational(1));
    g.add_term(Monomial::variable(i, 3), Rational(static_cast<long>(i % 3) - 1));
  }
  f += var(n, 6) * var(n, 7) * var(n, 8);
  auto fam = birch_orthogonal_blocks({f, g}, 3, 2, var(n, 8), R, SolverBudget{});
  EXPECT_EQ(fam.method, "coordinate-blocks");
  EXPECT_EQ(fam.blocks.size(), 4u);
  EXPECT_TRUE(verify_orthogonal_family(fam));
  EXPECT_TRUE(fam.restriction_strength.has_value());
}

TEST(Orthogonal, AllAtOnceForDenseCubic) {
  Rng rng(5);
  const std::size_t n = 5;
  QPoly f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        f.add_term(Monomial::variable(i) * Monomial::variable(j) * Monomial::variable(k), Rational(rng.nonzero(3)));
  auto fam = birch_orthogonal_blocks({f}, 1, 1, std::nullopt, Q, SolverBudget{});
  EXPECT_TRUE(verify_orthogonal_family(fam));
  for (const auto& b : fam.blocks)
    for (const auto& v : b)
      for (const auto& x : v) EXPECT_TRUE(x.is_rational());
}

TEST(Orthogonal, RejectsEvenDegree) {
  QPoly f = var(3, 0) * var(3, 1);
  EXPECT_THROW(birch_orthogonal_blocks({f}, 1, 1, std::nullopt, R, SolverBudget{}), ContractViolation);
}

TEST(Orthogonal, SelectVanishingVector) {
  QPoly f1 = var(2, 0) * var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1) * var(2, 1);
  QPoly f2 = var(2, 0) * var(2, 0) * var(2, 0) - var(2, 1) * var(2, 1) * var(2, 1);
  auto v = select_vanishing_vector({f1, f2}, 0, R, SolverBudget{});
  auto vr = convert<RealRadical>(f2), ur = convert<RealRadical>(f1);
  EXPECT_TRUE(evaluate(vr, v).is_zero());
  EXPECT_FALSE(evaluate(ur, v).is_zero());
  QPoly a = var(2, 0) * var(2, 0) * var(2, 0), b = var(2, 1) * var(2, 1) * var(2, 1);
  auto w = select_vanishing_vector({a, b}, 1, Q, SolverBudget{});
  EXPECT_TRUE(w[0].is_zero());
  EXPECT_FALSE(w[1].is_zero());
}

TEST(NormalForm, DiagonalPlusPerturbation) {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    QPoly f = perturbed_diagonal(12, 5, rng);
    SolverBudget b;
    b.seed = static_cast<std::uint64_t>(trial);
    auto nf = normal_form({f}, std::nullopt, R, b);
    EXPECT_TRUE(verify_normal_form(nf));
    EXPECT_FALSE(nf.indices[0].b.is_zero());
    EXPECT_GE(nf.w_basis.size(), 5u);
    auto cert = solve_system({f}, std::nullopt, R, b);
    for (const auto& r : cert.residuals) EXPECT_TRUE(r.is_zero());
  }
}

TEST(NormalForm, AlreadyDiagonalLeavesNoW) {
  QPoly f(5);
  for (std::size_t i = 0; i < 5; ++i) f.add_term(Monomial::variable(i, 3), Rational(1));
  auto nf = normal_form({f}, std::nullopt, R, SolverBudget{});
  EXPECT_TRUE(verify_normal_form(nf));
  EXPECT_TRUE(nf.w_basis.empty());
}

TEST(NormalForm, DisjointDiagonalPair) {
  const std::size_t n = 12;
  QPoly f1(n), f2(n);
  for (std::size_t i = 0; i < 6; ++i) f1.add_term(Monomial::variable(i, 3), Rational(static_cast<long>(i) + 1));
  for (std::size_t i = 6; i < n; ++i) f2.add_term(Monomial::variable(i, 3), Rational(1) - Rational(static_cast<long>(i)));
  auto nf = normal_form({f1, f2}, std::nullopt, R, SolverBudget{});
  EXPECT_TRUE(verify_normal_form(nf));
  // each block lies in its own variable group, so f1 vanishes on V_2 and conversely
  EXPECT_TRUE(substitute_linear(convert<RealRadical>(f1), nf.indices[1].basis).is_zero());
  EXPECT_TRUE(substitute_linear(convert<RealRadical>(f2), nf.indices[0].basis).is_zero());
}

TEST(NormalForm, VerifierRejectsWrongB) {
  QPoly f(5);
  for (std::size_t i = 0; i < 5; ++i) f.add_term(Monomial::variable(i, 3), Rational(1));
  auto nf = normal_form({f}, std::nullopt, R, SolverBudget{});
  nf.indices[0].b = nf.indices[0].b + RealRadical(1);
  EXPECT_FALSE(verify_normal_form(nf));
}

TEST(NormalForm, SamplerAndJacobian) {
  Rng rng(3);
  QPoly f = perturbed_diagonal(10, 3, rng);
  auto nf = normal_form({f}, var(10, 9), R, SolverBudget{});
  auto pts = sample_points(nf, 20, 7);
  ASSERT_EQ(pts.size(), 20u);
  std::set<std::vector<std::string>> seen;
  for (const auto& p : pts) {
    for (const auto& r : p.residuals) EXPECT_TRUE(r.is_zero());
    EXPECT_FALSE(p.avoid_value->is_zero());
    std::vector<std::string> key;
    for (const auto& x : p.point) key.push_back(to_string(x));
    seen.insert(key);
  }
  EXPECT_EQ(seen.size(), 20u);
  // x_9 lies in W, so the canonical point (w = 0) is skipped here
  auto plain = normal_form({f}, std::nullopt, R, SolverBudget{});
  EXPECT_EQ(sample_points(plain, 1, 7)[0].parameters, canonical_parameters(plain));
  auto again = sample_points(nf, 20, 7);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(pts[i].point, again[i].point);
  for (std::size_t i = 1; i < 6; ++i) {
    auto jc = check_parametrization_jacobian(nf, pts[i].parameters);
    EXPECT_TRUE(jc.ok(1e-6)) << jc.rank << " " << jc.max_relative_error;
  }
}

TEST(SolveSystem, RationalDiagonal) {
  QPoly f = var(3, 0) * var(3, 0) * var(3, 0) + (var(3, 1) * var(3, 1) * var(3, 1)).scaled(Rational(2)) -
            (var(3, 2) * var(3, 2) * var(3, 2)).scaled(Rational(3));
  auto cert = solve_system({f}, std::nullopt, Q, SolverBudget{});
  RVec expected(3, RealRadical(1));
  EXPECT_EQ(cert.point, expected);
}

TEST(SolveSystem, AffineSumOfCubes) {
  QPoly f = var(2, 0) * var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1) * var(2, 1) - QPoly::constant(2, Rational(1));
  auto cert = solve_affine(f, R, SolverBudget{});
  EXPECT_TRUE(cert.residuals[0].is_zero());
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    QPoly g(5);
    auto c = random_coefficients(5, rng);
    for (std::size_t i = 0; i < 5; ++i) g.add_term(Monomial::variable(i, 3), c[i]);
    g.add_term(Monomial{}, Rational(-1));
    EXPECT_TRUE(solve_affine(g, R, SolverBudget{}).residuals[0].is_zero());
  }
}

TEST(SolveSystem, ErrorsCarryStage) {
  QPoly f = var(3, 0) * var(3, 1);
  EXPECT_THROW(solve_system({f}, std::nullopt, R, SolverBudget{}), ContractViolation);
  // too few variables for the normal form
  QPoly g = var(3, 0) * var(3, 1) * var(3, 2);
  try {
    solve_system({g + var(3, 0) * var(3, 0) * var(3, 0)}, std::nullopt, R, SolverBudget{});
    FAIL();
  } catch (const BudgetExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("normal-form"), std::string::npos) << e.what();
  }
}
