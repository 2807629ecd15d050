#ifndef BIRCH_REGULARIZE_HPP
#define BIRCH_REGULARIZE_HPP

#include <functional>
#include <string>
#include <vector>

#include "birch/strength.hpp"

namespace birch {

/// Strength threshold as a function of the current degree tuple.
using StrengthThreshold = std::function<std::size_t(const DegreeTuple&)>;

/// input_form = sum_j cofactors[j] * generators[j]
struct MembershipCertificate {
  QPoly input_form;
  std::vector<QPoly> cofactors;
};

struct RegularizationStep {
  DegreeTuple before, after;
  std::size_t pivot = 0;            // index of the generator that was replaced
  std::vector<long> combination;    // coefficients of the low-strength combination
  std::size_t pairs = 0;            // size of its decomposition
};

struct RegularizationResult {
  std::vector<QPoly> generators;
  std::vector<MembershipCertificate> memberships;
  std::vector<DegreeTuple> trace;
  std::vector<RegularizationStep> steps;
  bool heuristic = true;  // termination means "no decomposition found within budget"
};

/// Exact check of every membership certificate against the generators.
inline CheckResult verify_membership(const RegularizationResult& res) {
  for (std::size_t i = 0; i < res.memberships.size(); ++i) {
    const auto& m = res.memberships[i];
    if (m.cofactors.size() != res.generators.size()) return CheckResult::fail("membership-" + std::to_string(i) + "-arity");
    QPoly acc(m.input_form.num_vars());
    for (std::size_t j = 0; j < m.cofactors.size(); ++j) acc += m.cofactors[j] * res.generators[j];
    if (!(acc == m.input_form)) return CheckResult::fail("membership-" + std::to_string(i) + "-mismatch");
  }
  for (std::size_t k = 1; k < res.trace.size(); ++k)
    if (!(res.trace[k] < res.trace[k - 1])) return CheckResult::fail("trace-not-decreasing-at-" + std::to_string(k));
  return {};
}

struct RegularizeOptions {
  std::size_t combinations = 12;   // sampled per degree class and step
  std::size_t max_steps = 64;
  DecompositionSearchOptions search;
};

/// Replaces low-strength combinations by the odd-degree factors of their decompositions until none
/// is found. The degree tuple strictly decreases at every step.
inline RegularizationResult regularize(const std::vector<QPoly>& forms, const StrengthThreshold& threshold,
                                       const SolverBudget& budget, const RegularizeOptions& opt = {}) {
  if (forms.empty()) throw ContractViolation("regularize: empty input");
  if (!threshold) throw ContractViolation("regularize: threshold function required");
  const std::size_t n = forms[0].num_vars();
  RegularizationResult res;
  for (const auto& f : forms) {
    if (f.num_vars() != n) throw ContractViolation("regularize: forms live in different rings");
    auto d = f.homogeneous_degree();
    if (!f.is_zero() && (!d || *d % 2 == 0)) throw ContractViolation("regularize: forms must be homogeneous of odd degree");
  }
  for (const auto& f : forms)
    if (!f.is_zero()) res.generators.push_back(f);
  for (const auto& f : forms) {
    MembershipCertificate m{f, std::vector<QPoly>(res.generators.size(), QPoly(n))};
    for (std::size_t j = 0; j < res.generators.size(); ++j)
      if (res.generators[j] == f && !f.is_zero()) {
        m.cofactors[j] = QPoly::constant(n, Rational(1));
        break;
      }
    res.memberships.push_back(m);
  }
  res.trace.push_back(degree_tuple_of(res.generators));

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    const DegreeTuple current = res.trace.back();
    const std::size_t limit = threshold(current);
    if (limit == 0) break;
    bool replaced = false;
    std::map<unsigned, std::vector<std::size_t>, std::greater<>> classes;
    for (std::size_t j = 0; j < res.generators.size(); ++j) {
      unsigned d = static_cast<unsigned>(res.generators[j].total_degree());
      if (d >= 2) classes[d].push_back(j);
    }
    for (const auto& [d, members] : classes) {
      for (const auto& lam : detail::combination_sequence(members.size(), opt.combinations, budget.seed + step)) {
        QPoly g(n);
        std::size_t pivot = members.size();
        for (std::size_t k = 0; k < members.size(); ++k)
          if (lam[k] != 0) {
            g += res.generators[members[k]].scaled(Rational(lam[k]));
            pivot = k;
          }
        auto cert = decomposition_search(g, limit, budget, opt.search);
        if (!cert) continue;
        // generator p = (sum eps_i o_i - sum_{k != p} lam_k g_k) / lam_p
        const std::size_t p = members[pivot];
        const Rational inv = Rational(1) / Rational(lam[pivot]);
        std::vector<QPoly> odd, even;
        for (const auto& [a, b] : cert->pairs) {
          bool a_odd = a.total_degree() % 2 == 1;
          odd.push_back(a_odd ? a : b);
          even.push_back(a_odd ? b : a);
        }
        for (auto& m : res.memberships) {
          QPoly cp = m.cofactors[p];
          if (cp.is_zero()) continue;
          for (std::size_t k = 0; k < members.size(); ++k)
            if (k != pivot && lam[k] != 0) m.cofactors[members[k]] -= cp.scaled(Rational(lam[k]) * inv);
          for (std::size_t i = 0; i < odd.size(); ++i) m.cofactors.push_back(QPoly(cp * even[i]).scaled(inv));
        }
        for (auto& m : res.memberships) {
          if (m.cofactors.size() == res.generators.size()) m.cofactors.resize(res.generators.size() + odd.size(), QPoly(n));
          m.cofactors.erase(m.cofactors.begin() + static_cast<long>(p));
        }
        res.generators.insert(res.generators.end(), odd.begin(), odd.end());
        res.generators.erase(res.generators.begin() + static_cast<long>(p));
        RegularizationStep s{current, degree_tuple_of(res.generators), p, lam, cert->size()};
        res.steps.push_back(s);
        res.trace.push_back(s.after);
        replaced = true;
        break;
      }
      if (replaced) break;
    }
    if (!replaced) break;
  }
  return res;
}

}  // namespace birch

#endif  // BIRCH_REGULARIZE_HPP
