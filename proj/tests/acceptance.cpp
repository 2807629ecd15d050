// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "birch/cli.hpp"
#include "birch/regularize.hpp"
#include "birch/restriction.hpp"
#include "birch/specialize.hpp"
#include "birch/tsen.hpp"

using namespace birch;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

const BirchField R = BirchField::reals();

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

Rational nonzero_rational(Rng& rng) {
  Rational q(rng.nonzero(9), rng.integer(1, 4));
  q.canonicalize();
  return q;
}

std::vector<Rational> nonzero_rationals(std::size_t n, Rng& rng) {
  std::vector<Rational> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(nonzero_rational(rng));
  return c;
}

void for_each_monomial(std::size_t n, unsigned d, const std::function<void(const Monomial&)>& fn) {
  std::vector<unsigned> e(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      e[i] = left;
      fn(Monomial(e));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, d);
}

QPoly dense_form(std::size_t n, unsigned d, Rng& rng, long h = 3) {
  QPoly f(n);
  for_each_monomial(n, d, [&](const Monomial& m) { f.add_term(m, Rational(rng.integer(-h, h))); });
  return f;
}

// diagonal part on all coordinates plus a dense part on the last `width`
QPoly perturbed_diagonal(std::size_t n, unsigned d, std::size_t width, Rng& rng) {
  QPoly f(n);
  auto c = nonzero_rationals(n, rng);
  for (std::size_t i = 0; i < n; ++i) f.add_term(Monomial::variable(i, d), c[i]);
  QPoly tail = dense_form(width, d, rng, 2);
  std::vector<std::size_t> map;
  for (std::size_t i = n - width; i < n; ++i) map.push_back(i);
  const QPoly placed = reindex(tail, map, n);
  for (const auto& [m, coef] : placed.terms())
    if (m.degree() > *std::max_element(m.exponents().begin(), m.exponents().end())) f.add_term(m, coef);
  return f;
}

RealRadical power(const RealRadical& x, unsigned d) {
  RealRadical acc(1);
  for (unsigned k = 0; k < d; ++k) acc = acc * x;
  return acc;
}

bool nonzero_vector(const RVec& v) {
  return std::any_of(v.begin(), v.end(), [](const RealRadical& x) { return !x.is_zero(); });
}

// f(sum_b y_b) = sum_b f(y_b): after substituting the concatenated basis no monomial meets two blocks
bool splits_over_blocks(const QPoly& f, const std::vector<std::vector<RVec>>& blocks) {
  std::vector<RVec> cols;
  std::vector<std::size_t> owner;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& v : blocks[b]) {
      cols.push_back(v);
      owner.push_back(b);
    }
  if (cols.empty() || rank(Matrix<RealRadical>(cols)) != cols.size()) return false;
  RPoly g = substitute_linear(convert<RealRadical>(f), cols);
  for (const auto& [m, c] : g.terms()) {
    std::set<std::size_t> touched;
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (m[i] > 0) touched.insert(owner[i]);
    if (touched.size() > 1) return false;
  }
  return true;
}

Outcome orthogonality_identity() {
  const auto t0 = Clock::now();
  int verified = 0;
  std::string first;
  std::map<std::string, int> methods;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 1);
    JobSpec job;
    job.command = "orthogonalize";
    job.field = "R";
    job.budget.seed = static_cast<std::uint64_t>(seed);
    std::vector<QPoly> forms;
    std::size_t n = 0;
    switch (seed % 4) {
      case 0:  // dense cubic, sequence of two vectors
        n = 3 + static_cast<std::size_t>(seed / 4 % 3);
        forms = {dense_form(n, 3, rng)};
        job.blocks = 2;
        job.ell = 1;
        break;
      case 1:  // quintic with interacting tail, coordinate sequence
        n = 5 + static_cast<std::size_t>(seed / 4 % 4);
        forms = {perturbed_diagonal(n, 5, 2, rng)};
        job.blocks = 3;
        job.ell = 1;
        break;
      case 2:  // two cubics, blocks
        n = 6 + static_cast<std::size_t>(seed / 4 % 5);
        forms = {perturbed_diagonal(n, 3, 3, rng), perturbed_diagonal(n, 3, 3, rng)};
        job.blocks = 2;
        job.ell = 2;
        break;
      default:  // quintic with a dense tail, blocks and an avoided coordinate
        n = 7 + static_cast<std::size_t>(seed / 4 % 4);
        forms = {perturbed_diagonal(n, 5, 3, rng)};
        job.blocks = 2;
        job.ell = 3;
        job.avoid = "x1";
        break;
    }
    const auto vars = names(n);
    for (const auto& f : forms) job.inputs.push_back(print_polynomial(f, vars));
    auto res = run(job);
    std::string failure;
    if (res.exit_code != 0) {
      failure = "exit " + std::to_string(res.exit_code) + ": " + res.message;
    } else {
      Json cert = Json::parse(res.certificate);
      ++methods[cert["stage"].get<std::string>()];
      auto rep = verify_certificate(cert);
      std::vector<std::vector<RVec>> blocks;
      for (const auto& b : cert["blocks"]) {
        blocks.emplace_back();
        for (const auto& v : b) blocks.back().push_back(vector_from_json(v));
      }
      bool split = true;
      for (const auto& f : forms) split = split && splits_over_blocks(f, blocks);
      if (!rep.ok) failure = "verifier: " + rep.failures[0];
      else if (!split) failure = "mixed terms survive";
    }
    if (failure.empty()) ++verified;
    else if (first.empty()) first = "seed " + std::to_string(seed) + ": " + failure;
  }
  const double t = seconds_since(t0);
  std::string m;
  for (const auto& [k, v] : methods) m += " " + k + "=" + std::to_string(v);
  return {verified == 200 && t <= 60.0,
          std::to_string(verified) + "/200 verified in " + fmt(t) + " s;" + m + (first.empty() ? "" : "; first failure " + first)};
}

// binary cubic vanishing at five pairwise independent points is zero
bool specialization_identity(const std::vector<Rational>& c, const DiagonalSpecialization& s) {
  const std::vector<std::pair<long, long>> pts = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}};
  for (auto [x, y] : pts) {
    RealRadical lhs(0);
    for (std::size_t i = 0; i < c.size(); ++i) lhs = lhs + RealRadical(c[i]) * power(RealRadical(x) * s.v[i] + RealRadical(y) * s.w[i], 3);
    RealRadical rhs = RealRadical(x) * power(RealRadical(y), 2) + s.a * power(RealRadical(y), 3);
    if (!(lhs - rhs).is_zero()) return false;
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!(s.v[i] * s.w[j] - s.v[j] * s.w[i]).is_zero()) return true;
  return false;
}

Outcome diagonal_specialization() {
  std::string detail;
  bool pass = true;
  double worst = 0;
  for (std::size_t n : {4u, 6u, 8u}) {
    int ok = 0;
    for (int seed = 0; seed < 50; ++seed) {
      Rng rng(static_cast<std::uint64_t>(seed), 2 + n);
      auto c = nonzero_rationals(n, rng);
      SolverBudget b;
      b.seed = static_cast<std::uint64_t>(seed);
      b.restarts = 32;
      const auto t0 = Clock::now();
      try {
        auto s = specialize_diagonal(c, 3, R, b);
        if (specialization_identity(c, s)) ++ok;
      } catch (const BudgetExhausted&) {
      }
      worst = std::max(worst, seconds_since(t0));
    }
    pass = pass && ok >= 48;
    detail += "n=" + std::to_string(n) + ": " + std::to_string(ok) + "/50; ";
  }
  pass = pass && worst <= 2.0;
  return {pass, detail + "slowest " + fmt(worst) + " s"};
}

// f at x v + y w + z u + sum t_j W_j against x y^2 + a y^3 + b z^3 + h(t)
bool normal_form_pattern_at(const NormalFormData& nf, const std::vector<RealRadical>& p) {
  const auto& ix = nf.indices[0];
  const std::size_t n = nf.ambient();
  RVec x(n, RealRadical(0));
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = p[0] * ix.v[k] + p[1] * ix.w[k] + p[2] * ix.u[k];
    for (std::size_t j = 0; j < nf.w_basis.size(); ++j) x[k] = x[k] + p[3 + j] * nf.w_basis[j][k];
  }
  const std::vector<RealRadical> t(p.begin() + 3, p.end());
  RealRadical expected = p[0] * power(p[1], 2) + ix.a * power(p[1], 3) + ix.b * power(p[2], 3) + evaluate(nf.h[0], t);
  return evaluate(convert<RealRadical>(nf.forms[0]), x) == expected;
}

Outcome normal_form_pattern() {
  int ok = 0;
  const int total = 10;
  std::string first;
  for (int seed = 0; seed < total; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 3);
    const std::size_t n = 12 + static_cast<std::size_t>(seed % 3);
    QPoly f = perturbed_diagonal(n, 3, 4 + static_cast<std::size_t>(seed % 2), rng);
    SolverBudget b;
    b.seed = static_cast<std::uint64_t>(seed);
    try {
      auto nf = normal_form({f}, std::nullopt, R, b);
      bool good = verify_normal_form(nf) && !nf.indices[0].b.is_zero();
      for (int k = 0; good && k < 3; ++k) {
        std::vector<RealRadical> p;
        for (std::size_t j = 0; j < nf.parameter_count() + 1; ++j) p.push_back(RealRadical(rng.rational(5, 3)));
        good = normal_form_pattern_at(nf, p);
      }
      auto cert = solve_system({f}, std::nullopt, R, b);
      good = good && nonzero_vector(cert.point) && evaluate(convert<RealRadical>(f), cert.point).is_zero();
      for (const auto& r : cert.residuals) good = good && r.is_zero();
      if (good) ++ok;
      else if (first.empty()) first = "seed " + std::to_string(seed) + ": pattern or residual mismatch";
    } catch (const std::exception& e) {
      if (first.empty()) first = "seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " cubics in dimension 12..14" + (first.empty() ? "" : "; " + first)};
}

RationalFunction low_degree_coefficient(Rng& rng) {
  const RationalFunction t = RationalFunction::parameter(1, 0);
  while (true) {
    RationalFunction c = RationalFunction(Rational(rng.integer(-3, 3))) + RationalFunction(Rational(rng.integer(-3, 3))) * t +
                         RationalFunction(Rational(rng.integer(-3, 3))) * t * t;
    if (!c.numerator().is_zero()) return c;
  }
}

Outcome birch_field_leaves() {
  int real_ok = 0;
  const int real_total = 200;
  for (int seed = 0; seed < real_total; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 4);
    const unsigned d = 3 + 2 * static_cast<unsigned>(seed % 4);
    const std::size_t n = 2 + static_cast<std::size_t>(seed % 5);
    auto c = nonzero_rationals(n, rng);
    DiagonalEquation<RationalFunction> eq{{}, d};
    for (const auto& q : c) eq.coefficients.emplace_back(q);
    auto sol = solve_diagonal(R, eq, SolverBudget{});
    if (!sol || sol->point.size() != n || !nonzero_vector(sol->point)) continue;
    RealRadical acc(0);
    for (std::size_t i = 0; i < n; ++i) acc = acc + RealRadical(c[i]) * power(sol->point[i], d);
    if (acc.is_zero()) ++real_ok;
  }
  int ff_ok = 0;
  const int ff_total = 50;
  const Rational tol(1, 1000000000);
  for (int seed = 0; seed < ff_total; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 5);
    DiagonalEquation<RationalFunction> eq{{}, 3};
    for (int i = 0; i < 4; ++i) eq.coefficients.push_back(low_degree_coefficient(rng));
    SolverBudget b;
    b.seed = static_cast<std::uint64_t>(seed);
    try {
      auto sol = solve_diagonal(BirchField::real_function_field(1), eq, b);
      if (sol && verify_diagonal_solution(eq, 1, *sol, tol)) ++ff_ok;
    } catch (const BudgetExhausted&) {
    }
  }
  return {real_ok == real_total && ff_ok * 10 >= ff_total * 9,
          "R: " + std::to_string(real_ok) + "/" + std::to_string(real_total) + " exact; R(t1): " + std::to_string(ff_ok) + "/" +
              std::to_string(ff_total) + " within 1e-9"};
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Outcome expansion_degree_grid() {
  const auto t0 = Clock::now();
  int checked = 0, bad = 0;
  std::string first;
  for (unsigned long p : {1ul, 2ul})
    for (unsigned long d : {3ul, 5ul})
      for (unsigned long n = 1; n <= 30; ++n)
        for (unsigned long r = 0; r <= 5; ++r) {
          auto holds = [&](unsigned long s) { return Integer(n) * binomial(s + p, p) > binomial(r + d * s + p, p); };
          ++checked;
          std::optional<unsigned long> want;
          for (unsigned long s = 0; !want && s <= 4096; ++s)
            if (holds(s)) want = s;
          bool good;
          try {
            const unsigned long s = choose_expansion_degree(n, r, d, p);
            good = want && s == *want && holds(s) && (s == 0 || !holds(s - 1));
          } catch (const UnsupportedInstance&) {
            // only legitimate when n <= d^p, where the leading terms never cross
            good = !want && n <= (p == 1 ? d : d * d);
          }
          if (!good) {
            ++bad;
            if (first.empty())
              first = "n=" + std::to_string(n) + " r=" + std::to_string(r) + " d=" + std::to_string(d) + " p=" + std::to_string(p);
          }
        }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 1.0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " grid points in " + fmt(t) + " s" +
                                   (first.empty() ? "" : "; first failure " + first)};
}

// sorted descending, then lexicographic with a proper prefix smaller
bool oracle_less(std::vector<unsigned> a, std::vector<unsigned> b) {
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return a.size() < b.size();
}

Outcome degree_tuple_order() {
  std::vector<std::vector<unsigned>> all = {{}};
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<unsigned> e(len, 0);
    while (true) {
      all.push_back(e);
      std::size_t k = 0;
      while (k < len && e[k] == 5) e[k++] = 0;
      if (k == len) break;
      ++e[k];
    }
  }
  long violations = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      DegreeTuple ta(a), tb(b);
      const int count = (ta < tb) + (tb < ta) + (ta == tb);
      if (count != 1 || (ta < tb) != oracle_less(a, b)) ++violations;
    }
  std::vector<DegreeTuple> sorted;
  for (const auto& a : all) {
    auto s = a;
    std::sort(s.rbegin(), s.rend());
    if (s == a) sorted.emplace_back(a);
  }
  long triples = 0;
  for (const auto& a : sorted)
    for (const auto& b : sorted)
      if (a < b)
        for (const auto& c : sorted)
          if (b < c) {
            ++triples;
            if (!(a < c)) ++violations;
          }
  const bool example = DegreeTuple({3, 3, 1}) < DegreeTuple({5, 3}) && !(DegreeTuple({5, 3}) < DegreeTuple({3, 3, 1}));
  return {violations == 0 && example, std::to_string(all.size()) + " tuples, " + std::to_string(triples) + " chains, " +
                                          std::to_string(violations) + " violations; (3,3,1) < (5,3) " + (example ? "holds" : "fails")};
}

Outcome regularization() {
  int ok = 0, progressed = 0, hard = 0;
  const int total = 16;
  std::string first;
  for (int seed = 0; seed < total; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 7);
    const std::size_t n = 6;
    const unsigned d = seed % 2 ? 5 : 3;
    std::vector<QPoly> forms;
    const int shape = seed / 2 % 4;
    switch (shape) {
      case 0:  // a product and a multiple of it plus a power
        forms.push_back(dense_form(n, 1, rng) * dense_form(n, d - 1, rng));
        forms.push_back(forms[0].scaled(Rational(2)) + QPoly::variable(n, 0).pow(d));
        break;
      case 1:  // sum of two products with linear factors
        forms.push_back(dense_form(n, 1, rng) * dense_form(n, d - 1, rng) + dense_form(n, 1, rng) * dense_form(n, d - 1, rng));
        break;
      case 2:  // product of three factors next to a generic form
        forms.push_back(dense_form(n, 1, rng) * dense_form(n, 1, rng) * dense_form(n, d - 2, rng));
        forms.push_back(dense_form(n, d, rng));
        break;
      default:  // a quadratic factor: no linear subspace in the zero set, progress not required
        forms.push_back(dense_form(n, 1, rng) * dense_form(n, d - 1, rng) + dense_form(n, 2, rng) * dense_form(n, d - 2, rng));
        ++hard;
        break;
    }
    try {
      auto res = regularize(forms, [](const DegreeTuple&) { return std::size_t{2}; }, SolverBudget{});
      std::string why;
      if (auto chk = verify_membership(res); !chk) why = chk.reason;
      if (why.empty() && (res.memberships.size() != forms.size() || res.trace.empty())) why = "missing certificates";
      for (std::size_t k = 1; why.empty() && k < res.trace.size(); ++k)
        if (!oracle_less(res.trace[k].entries(), res.trace[k - 1].entries())) why = "trace does not decrease";
      for (const auto& g : res.generators)
        if (why.empty() && g.total_degree() % 2 == 0) why = "even generator of degree " + std::to_string(g.total_degree());
      for (std::size_t i = 0; why.empty() && i < forms.size(); ++i) {
        const auto& m = res.memberships[i];
        QPoly acc(n);
        for (std::size_t j = 0; j < m.cofactors.size(); ++j) acc += m.cofactors[j] * res.generators[j];
        if (!(m.input_form == forms[i] && acc == forms[i])) why = "membership " + std::to_string(i) + " does not reproduce the input";
      }
      if (why.empty() && res.steps.empty() && shape != 3) why = "low-strength input left unchanged";
      if (!res.steps.empty()) ++progressed;
      if (why.empty()) ++ok;
      else if (first.empty()) first = "seed " + std::to_string(seed) + ": " + why;
    } catch (const std::exception& e) {
      if (first.empty()) first = "seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " inputs regularized and re-verified, " +
                           std::to_string(progressed) + " split at least once (" + std::to_string(hard) +
                           " with quadratic factors need not split)" +
                           (first.empty() ? "" : "; first failure " + first)};
}

long determinant(const long m[4][4], const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  long acc = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<int> r(rows.begin() + 1, rows.end()), c;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != j) c.push_back(cols[k]);
    const long term = m[rows[0]][cols[j]] * determinant(m, r, c);
    acc += j % 2 ? -term : term;
  }
  return acc;
}

// over C a quadratic is a sum of s products exactly when its Gram matrix has rank <= 2s;
// the rank is read off the largest nonvanishing minor
unsigned strength_from_minors(const long m[4][4]) {
  for (int k = 4; k >= 1; --k)
    for (int rm = 0; rm < 16; ++rm) {
      if (__builtin_popcount(rm) != k) continue;
      std::vector<int> rows;
      for (int i = 0; i < 4; ++i)
        if (rm >> i & 1) rows.push_back(i);
      for (int cm = 0; cm < 16; ++cm) {
        if (__builtin_popcount(cm) != k) continue;
        std::vector<int> cols;
        for (int i = 0; i < 4; ++i)
          if (cm >> i & 1) cols.push_back(i);
        if (determinant(m, rows, cols) != 0) return static_cast<unsigned>((k + 1) / 2);
      }
    }
  return 0;
}

Outcome quadratic_strength_exhaustive() {
  const auto t0 = Clock::now();
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) slots.emplace_back(i, j);
  long checked = 0, mismatches = 0;
  std::string first;
  std::vector<int> c(slots.size(), -2);
  while (true) {
    QPoly q(4);
    long m[4][4] = {};
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (c[k] == 0) continue;
      auto [i, j] = slots[k];
      q.add_term(Monomial::variable(static_cast<std::size_t>(i)) * Monomial::variable(static_cast<std::size_t>(j)), Rational(c[k]));
      if (i == j) m[i][i] = 2 * c[k];
      else m[i][j] = m[j][i] = c[k];
    }
    ++checked;
    if (quadratic_strength(q) != strength_from_minors(m)) {
      ++mismatches;
      if (first.empty()) first = q.to_string();
    }
    std::size_t k = 0;
    while (k < c.size() && c[k] == 2) c[k++] = -2;
    if (k == c.size()) break;
    ++c[k];
  }
  QPoly x = QPoly::variable(2, 0), y = QPoly::variable(2, 1);
  const bool example = quadratic_strength(x * x + y * y) == 1;
  return {mismatches == 0 && example, std::to_string(checked) + " quadratics, " + std::to_string(mismatches) + " mismatches in " +
                                          fmt(seconds_since(t0)) + " s; x^2 + y^2 has strength " + (example ? "1" : "!= 1") +
                                          (first.empty() ? "" : "; first mismatch " + first)};
}

AlgebraicNumber random_element(const std::shared_ptr<const ExtensionModulus>& K, Rng& rng) {
  std::vector<Rational> c;
  for (std::size_t k = 0; k < K->degree(); ++k) c.push_back(Rational(rng.integer(-3, 3)));
  return AlgebraicNumber::from_coefficients(K, c);
}

Outcome restriction_round_trip() {
  int ok = 0, total = 0, lifted = 0;
  std::string first;
  const std::vector<std::pair<std::string, std::shared_ptr<const ExtensionModulus>>> fields = {
      {"Q(i)", AlgebraicNumber::make_field({Rational(1), Rational(0), Rational(1)}, "i")},
      {"Q(2^(1/3))", AlgebraicNumber::make_field({Rational(-2), Rational(0), Rational(0), Rational(1)}, "c")}};
  for (const auto& [label, K] : fields) {
    const std::size_t m = K->degree(), n = m == 2 ? 3 : 2, N = n * m;
    auto basis = power_basis(K);
    for (int seed = 0; seed < 8; ++seed) {
      ++total;
      Rng rng(static_cast<std::uint64_t>(seed), 9 + m);
      // plant a common zero with coordinates in {-1, 0, 1}
      std::vector<Rational> ystar(N);
      for (auto& y : ystar) y = Rational(rng.integer(-1, 1));
      ystar[0] = 1;
      std::vector<AlgebraicNumber> xstar(n, AlgebraicNumber(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) xstar[i] = xstar[i] + basis[j] * AlgebraicNumber(ystar[i * m + j]);
      AlgPoly g(n);
      for_each_monomial(n, 3, [&](const Monomial& mono) { g.add_term(mono, random_element(K, rng)); });
      AlgPoly cube = AlgPoly::variable(n, 0).pow(3);
      const AlgPoly f = g - cube.scaled(evaluate(g, xstar) / evaluate(cube, xstar));

      auto res = restriction_of_scalars(f, K);
      std::vector<AlgPoly> images;
      for (std::size_t i = 0; i < n; ++i) {
        AlgPoly xi(N);
        for (std::size_t j = 0; j < m; ++j) xi += AlgPoly::variable(N, i * m + j).scaled(basis[j]);
        images.push_back(xi);
      }
      bool good = res.recombined() == substitute(f, images, N);
      for (int k = 0; good && k < 5; ++k) {
        std::vector<Rational> y;
        for (std::size_t i = 0; i < N; ++i) y.push_back(rng.rational(4, 3));
        AlgebraicNumber acc(0);
        for (std::size_t j = 0; j < m; ++j) acc = acc + basis[j] * AlgebraicNumber(evaluate(res.forms[j], y));
        good = acc == evaluate(f, res.lift(y));
      }
      // every common rational zero of the f_j of height 1 lifts to a zero of f
      int found = 0;
      std::vector<Rational> y(N, Rational(-1));
      while (good) {
        bool zero = std::all_of(y.begin(), y.end(), [](const Rational& q) { return sgn(q) == 0; });
        bool common = !zero;
        for (std::size_t j = 0; common && j < m; ++j) common = sgn(evaluate(res.forms[j], y)) == 0;
        if (common) {
          ++found;
          auto x = res.lift(y);
          good = std::any_of(x.begin(), x.end(), [](const AlgebraicNumber& a) { return !a.is_zero(); }) && evaluate(f, x).is_zero();
        }
        std::size_t k = 0;
        while (k < N && y[k] == 1) y[k++] = -1;
        if (k == N) break;
        y[k] += 1;
      }
      lifted += found;
      if (good && found > 0) ++ok;
      else if (first.empty()) first = label + " seed " + std::to_string(seed);
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " random cubic forms over Q(i) and Q(2^(1/3)); " +
                           std::to_string(lifted) + " lifted zeros verified" + (first.empty() ? "" : "; first failure " + first)};
}

Outcome density_sampler() {
  Rng rng(3, 10);
  QPoly f = perturbed_diagonal(12, 3, 4, rng);
  auto nf = normal_form({f}, std::nullopt, R, SolverBudget{});
  auto pts = sample_points(nf, 100, 11);
  std::set<std::vector<std::string>> seen;
  bool zero = true;
  for (const auto& p : pts) {
    std::vector<std::string> key;
    for (const auto& x : p.point) key.push_back(to_string(x));
    seen.insert(key);
    zero = zero && nonzero_vector(p.point) && evaluate(convert<RealRadical>(f), p.point).is_zero();
    for (const auto& r : p.residuals) zero = zero && r.is_zero();
  }
  std::size_t full = 0;
  double worst = 0;
  for (std::size_t i = 1; i <= 5 && i < pts.size(); ++i) {
    auto jc = check_parametrization_jacobian(nf, pts[i].parameters);
    if (jc.rank == nf.parameter_count() && jc.ok(1e-6)) ++full;
    worst = std::max(worst, jc.max_relative_error);
  }
  char err[32];
  std::snprintf(err, sizeof err, "%.1e", worst);
  return {pts.size() == 100 && seen.size() == 100 && zero && full == 5,
          std::to_string(seen.size()) + " distinct points, residuals " + (zero ? "exactly zero" : "NONZERO") + ", full-rank Jacobians " +
              std::to_string(full) + "/5 (rank " + std::to_string(nf.parameter_count()) + ", worst relative error " + err + ")"};
}

Outcome affine_sum_of_cubes() {
  int ok = 0;
  std::string first;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed), 11);
    const std::size_t n = 4 + static_cast<std::size_t>(seed % 3);
    auto a = nonzero_rationals(n, rng);
    QPoly g(n);
    for (std::size_t i = 0; i < n; ++i) g.add_term(Monomial::variable(i, 3), a[i]);
    JobSpec job;
    job.command = "solve";
    job.field = "R";
    job.affine = true;
    job.budget.seed = static_cast<std::uint64_t>(seed);
    job.inputs = {print_polynomial(g, names(n)) + " = 1"};
    auto res = run(job);
    std::string failure;
    if (res.exit_code != 0) {
      failure = res.message;
    } else {
      Json cert = Json::parse(res.certificate);
      auto rep = verify_certificate(cert);
      RVec x = vector_from_json(cert["points"][0]["coordinates"]);
      RealRadical acc(-1);
      for (std::size_t i = 0; i < n && x.size() == n; ++i) acc = acc + RealRadical(a[i]) * power(x[i], 3);
      if (!rep.ok) failure = "verifier: " + rep.failures[0];
      else if (x.size() != n || !acc.is_zero()) failure = "point does not satisfy the equation";
    }
    if (failure.empty()) ++ok;
    else if (first.empty()) first = "seed " + std::to_string(seed) + ": " + failure;
  }
  return {ok == 20, std::to_string(ok) + "/20 exact affine solutions" + (first.empty() ? "" : "; first failure " + first)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"orthogonality identity", orthogonality_identity},
      {"diagonal specialization", diagonal_specialization},
      {"normal form", normal_form_pattern},
      {"diagonal leaf solvers", birch_field_leaves},
      {"expansion degree", expansion_degree_grid},
      {"degree-tuple order", degree_tuple_order},
      {"regularization", regularization},
      {"quadratic strength", quadratic_strength_exhaustive},
      {"restriction of scalars", restriction_round_trip},
      {"density sampler", density_sampler},
      {"affine solve", affine_sum_of_cubes},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%s s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str(),
                fmt(seconds_since(t0)).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
