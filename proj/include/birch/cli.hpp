#ifndef BIRCH_CLI_HPP
#define BIRCH_CLI_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "birch/certificate.hpp"
#include "birch/diagonal.hpp"
#include "birch/normal_form.hpp"
#include "birch/parse.hpp"
#include "birch/regularize.hpp"
#include "birch/strength.hpp"

namespace birch {

struct JobSpec {
  std::string command;
  std::string field = "R";
  std::vector<std::string> inputs;  // inline equations or file paths
  SolverBudget budget;
  std::optional<std::string> avoid;
  std::size_t count = 1;
  std::optional<std::string> threshold;  // integer, or an expression in d (largest degree) and r (number of forms)
  std::size_t ell = 3;
  std::size_t blocks = 1;
  std::string output;  // empty: standard output
  std::string format = "text";
  bool affine = false;
  Rational tol = Rational(1, 1000000000);
};

struct RunResult {
  int exit_code = 0;
  std::string output;       // report (text) or certificate (json)
  std::string certificate;  // sealed certificate, always JSON
  std::string message; // diagnostics for standard error
};

namespace detail {

inline std::vector<std::string> read_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> eqs;
  for (const auto& in : inputs) {
    std::string text = in;
    std::error_code ec;
    if (in.find_first_of("^+*=") == std::string::npos && std::filesystem::is_regular_file(in, ec)) {
      std::ifstream f(in);
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    for (auto& e : split_equations(text)) eqs.push_back(e);
  }
  return eqs;
}

inline std::string point_text(const RVec& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + to_string(p[i]);
  return s + ")";
}

inline Json base_certificate(const JobSpec& job, const std::string& kind, const ParsedSystem& sys) {
  Json j;
  j["kind"] = kind;
  j["command"] = job.command;
  j["field"] = job.field;
  j["variables"] = sys.variables;
  j["parameters"] = sys.parameters;
  std::vector<std::string> names = sys.variables;
  names.insert(names.end(), sys.parameters.begin(), sys.parameters.end());
  std::vector<std::string> eqs;
  for (const auto& f : sys.polys) eqs.push_back(f.to_string(names));
  j["equations"] = eqs;
  j["seed"] = job.budget.seed;
  return j;
}

inline Json point_json(const SolutionCertificate& c) {
  Json p;
  p["coordinates"] = vector_to_json(c.point);
  Json res = Json::array();
  for (const auto& r : c.residuals) res.push_back(radical_to_json(r));
  p["residuals"] = res;
  if (!c.parameters.empty()) p["parameters"] = vector_to_json(c.parameters);
  return p;
}

/// Threshold as a function of the degree tuple: d = largest degree, r = number of forms.
inline StrengthThreshold parse_threshold(const std::string& text) {
  ParsedSystem ctx = parse_system({text}, false, {"d", "r"});
  if (ctx.variables != std::vector<std::string>{"d", "r"}) throw ContractViolation("--threshold may only use d and r");
  QPoly expr = ctx.polys[0];
  return [expr](const DegreeTuple& t) {
    const auto& deg = t.entries();
    Rational d = deg.empty() ? Rational(0) : Rational(static_cast<long>(deg.front()));
    Rational v = evaluate(expr, std::vector<Rational>{d, Rational(static_cast<long>(deg.size()))});
    if (sgn(v) < 0 || v.get_den() != 1) throw ContractViolation("--threshold must evaluate to a nonnegative integer");
    return static_cast<std::size_t>(v.get_num().get_ui());
  };
}

inline std::string describe(const ParsedSystem& sys) {
  std::string s = std::to_string(sys.polys.size()) + " equation(s) in " + std::to_string(sys.variables.size()) + " variables";
  if (!sys.parameters.empty()) {
    s += ", parameters";
    for (const auto& t : sys.parameters) s += " " + t;
  }
  return s;
}

// ---- commands ----

inline Json cmd_solve_constant(const JobSpec& job, const ParsedSystem& sys, const BirchField& field, std::string& text) {
  std::optional<QPoly> avoid;
  if (job.avoid) avoid = parse_in_context(*job.avoid, sys, "in --avoid");
  SolveOptions opt;
  opt.normal_form.ell = job.ell;
  if (job.threshold) {
    opt.regularize = true;
    opt.threshold = parse_threshold(*job.threshold);
  }
  SolutionCertificate cert;
  if (job.affine) {
    if (sys.polys.size() != 1) throw UnsupportedInstance("--affine handles a single equation");
    cert = solve_affine(sys.polys[0], field, job.budget, opt);
  } else {
    check_odd_forms(sys);
    cert = solve_system(sys.forms(), avoid, field, job.budget, opt);
  }
  Json j = base_certificate(job, "points", sys);
  j["affine"] = job.affine;
  if (job.avoid) j["avoid"] = avoid->to_string(sys.variables);
  j["stage"] = cert.stage;
  j["points"] = Json::array({point_json(cert)});
  text = "stage: " + cert.stage + "\npoint: " + point_text(cert.point) + "\nresiduals: all exactly zero\n";
  return j;
}

/// Over R(t): single diagonal equation. In affine mode the constant term becomes the coefficient
/// of a fresh variable placed first, and the solution is accepted only if that variable is nonzero.
inline Json cmd_solve_function_field(const JobSpec& job, const ParsedSystem& sys, const BirchField& field, std::string& text) {
  if (sys.polys.size() != 1) throw UnsupportedInstance("over " + field.to_string() + " only a single diagonal equation is supported");
  if (job.avoid) throw UnsupportedInstance("--avoid is not supported over " + field.to_string());
  auto f = sys.function_field_forms(field.params)[0];
  const std::size_t n = sys.variables.size();
  std::optional<unsigned> degree;
  std::vector<RationalFunction> coeff(n, RationalFunction(QPoly(field.params)));
  RationalFunction constant(QPoly(field.params));
  for (const auto& [m, c] : f.terms()) {
    std::size_t nz = 0, var = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (m[i] > 0) ++nz, var = i;
    if (nz == 0 && job.affine) {
      constant = c;
      continue;
    }
    if (nz != 1 || (degree && *degree != m[var]))
      throw UnsupportedInstance("over " + field.to_string() + " only diagonal equations sum a_i x_i^d are supported");
    degree = m[var];
    coeff[var] = c;
  }
  if (!degree) throw ContractViolation("equation has no variable terms");
  if (*degree % 2 == 0) throw ContractViolation("degree " + std::to_string(*degree) + " is even; solutions over Birch fields are only guaranteed for odd degrees");
  if (job.affine && constant.is_zero()) throw ContractViolation("--affine expects a constant term (f = c with c != 0)");
  if (!job.affine)
    for (const auto& [m, c] : f.terms())
      if (m.degree() != *degree) throw ContractViolation("equation is not homogeneous; pass --affine to solve f = c");
  std::vector<RationalFunction> eqc;
  if (job.affine) eqc.push_back(constant);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (coeff[i].is_zero()) continue;
    eqc.push_back(coeff[i]);
    active.push_back(i);
  }
  std::vector<std::string> names = sys.variables;
  std::vector<std::string> all_names = names;
  all_names.insert(all_names.end(), sys.parameters.begin(), sys.parameters.end());
  Json j = base_certificate(job, "points", sys);
  j["tolerance"] = job.tol.get_str();
  DiagonalSolution sol;
  // a variable missing from a homogeneous equation gives a unit vector
  if (!job.affine && active.size() < n) {
    std::size_t free = 0;
    while (!coeff[free].is_zero()) ++free;
    sol.exact_functions.assign(n, RPoly(field.params));
    sol.exact_functions[free] = RPoly::constant(field.params, RealRadical(1));
    sol.method = "unused-variable";
  } else {
    DiagonalEquation<RationalFunction> eq{eqc, *degree};
    bool found = false;
    for (unsigned attempt = 0; attempt < job.budget.restarts && !found; ++attempt) {
      SolverBudget b = job.budget;
      b.seed = job.budget.seed + attempt;
      auto s = solve_diagonal(field, eq, b);
      if (!s) continue;
      if (!verify_diagonal_solution(eq, field.params, *s, job.tol)) continue;
      if (job.affine) {
        bool lead_nonzero = s->is_exact() ? !s->exact_functions[0].is_zero()
                                          : std::any_of(s->enclosed_functions[0].terms().begin(), s->enclosed_functions[0].terms().end(),
                                                        [](const auto& t) { return !t.second.contains_zero(); });
        if (!lead_nonzero) continue;
      }
      sol = *s;
      found = true;
    }
    if (!found) throw BudgetExhausted("diagonal solver over " + field.to_string() + " found no certified point within " +
                                      std::to_string(job.budget.restarts) + " restarts");
    // back to the variable order; the homogenizing variable is recorded separately
    const std::size_t off = job.affine ? 1 : 0;
    DiagonalSolution mapped = sol;
    if (sol.is_exact()) {
      mapped.exact_functions.assign(n, RPoly(field.params));
      for (std::size_t k = 0; k < active.size(); ++k) mapped.exact_functions[active[k]] = sol.exact_functions[k + off];
    } else {
      mapped.enclosed_functions.assign(n, Polynomial<Interval>(field.params));
      for (std::size_t k = 0; k < active.size(); ++k) mapped.enclosed_functions[active[k]] = sol.enclosed_functions[k + off];
    }
    if (job.affine) {
      // homogeneous certificate: equation sum a_i x_i^d + c h^d with h recorded as the last variable
      names.push_back("h_");
      if (sol.is_exact()) mapped.exact_functions.push_back(sol.exact_functions[0]);
      else mapped.enclosed_functions.push_back(sol.enclosed_functions[0]);
    }
    sol = mapped;
  }
  if (job.affine) {
    // rewrite the certificate equation in homogenized form
    std::vector<std::string> hom_names = names;
    hom_names.insert(hom_names.end(), sys.parameters.begin(), sys.parameters.end());
    QPoly hom(names.size() + sys.parameters.size());
    for (const auto& [m, c] : sys.polys[0].terms()) {
      std::vector<unsigned> e(names.size() + sys.parameters.size(), 0);
      unsigned xdeg = 0;
      for (std::size_t i = 0; i < n; ++i) e[i] = m[i], xdeg += m[i];
      for (std::size_t q = 0; q < sys.parameters.size(); ++q) e[names.size() + q] = m[n + q];
      e[n] = *degree - xdeg;
      hom.add_term(Monomial(e), c);
    }
    j["variables"] = names;
    j["equations"] = {hom.to_string(hom_names)};
    j["affine_scaling_variable"] = "h_";
  }
  Json pt;
  std::vector<Polynomial<RationalFunction>> check_forms;
  {
    ParsedSystem again = parse_system(j["equations"].get<std::vector<std::string>>(), true, j["variables"].get<std::vector<std::string>>(), true);
    check_forms = again.function_field_forms(field.params);
  }
  Json res = Json::array();
  if (sol.is_exact()) {
    Json fx = Json::array();
    for (const auto& x : sol.exact_functions) fx.push_back(rpoly_to_json(x));
    pt["exact_functions"] = fx;
    res.push_back(rpoly_to_json(evaluate_at_functions(check_forms[0], sol.exact_functions, field.params)));
  } else {
    Json fx = Json::array();
    for (const auto& x : sol.enclosed_functions) fx.push_back(ipoly_to_json(x));
    pt["enclosed_functions"] = fx;
    res.push_back(ipoly_to_json(evaluate_at_functions(check_forms[0], sol.enclosed_functions, field.params)));
  }
  pt["residuals"] = res;
  j["affine"] = false;
  j["stage"] = std::string(job.affine ? "affine>" : "") + "diagonal:" + sol.method;
  j["points"] = Json::array({pt});
  std::vector<std::string> tnames = default_variable_names(field.params, "t");
  text = "stage: " + j["stage"].get<std::string>() + "\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    text += names[i] + " = ";
    text += sol.is_exact() ? sol.exact_functions[i].to_string(tnames) : sol.enclosed_functions[i].to_string(tnames);
    text += "\n";
  }
  if (job.affine) text += "affine solution: x_i / h_\n";
  text += sol.is_exact() ? "residual: exactly zero\n" : "residual: enclosures contain 0 within tolerance " + job.tol.get_str() + "\n";
  return j;
}

inline Json cmd_sample(const JobSpec& job, const ParsedSystem& sys, const BirchField& field, std::string& text) {
  check_odd_forms(sys);
  std::optional<QPoly> avoid;
  if (job.avoid) avoid = parse_in_context(*job.avoid, sys, "in --avoid");
  NormalFormOptions nopt;
  nopt.ell = job.ell;
  NormalFormData nf = detail::staged("normal-form", [&] { return normal_form(sys.forms(), avoid, field, job.budget, nopt); });
  auto pts = sample_points(nf, job.count, job.budget.seed);
  Json j = base_certificate(job, "points", sys);
  j["affine"] = false;
  if (avoid) j["avoid"] = avoid->to_string(sys.variables);
  j["stage"] = "normal-form>parametrization";
  j["free_parameters"] = nf.parameter_count();
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  j["points"] = arr;
  auto jc = check_parametrization_jacobian(nf, pts.back().parameters);
  j["jacobian_rank"] = jc.rank;
  text = "stage: normal-form>parametrization\n";
  text += "free parameters: " + std::to_string(nf.parameter_count()) + ", jacobian rank " + std::to_string(jc.rank) + "\n";
  for (const auto& p : pts) text += point_text(p.point) + "\n";
  return j;
}

inline Json cmd_strength(const JobSpec& job, const ParsedSystem& sys, std::string& text) {
  auto forms = sys.forms();
  for (std::size_t k = 0; k < forms.size(); ++k)
    if (!forms[k].is_homogeneous()) throw ContractViolation("equation " + std::to_string(k + 1) + " is not homogeneous");
  StrengthBounds b = collective_strength_bounds(forms, job.budget);
  Json j = base_certificate(job, "strength-bounds", sys);
  j["lower"] = b.lower_infinite ? Json("infinity") : (b.lower ? Json(b.lower->get_str()) : Json(nullptr));
  j["upper"] = b.upper ? Json(*b.upper) : Json("infinity");
  j["lower_provenance"] = b.lower_provenance;
  j["upper_provenance"] = b.upper_provenance;
  j["stage"] = "strength";
  text = "stage: strength\nlower bound: " + (b.lower_infinite ? std::string("infinity") : b.lower ? b.lower->get_str() : std::string("none")) +
         " (" + b.lower_provenance + ")\nupper bound: " + (b.upper ? std::to_string(*b.upper) : std::string("infinity")) + " (" +
         b.upper_provenance + ")\n";
  if (forms.size() == 1 && forms[0].homogeneous_degree() == 2u) {
    auto s = quadratic_strength(forms[0]);
    j["quadratic_strength"] = s;
    text += "quadratic strength: " + std::to_string(s) + "\n";
  }
  return j;
}

inline Json cmd_regularize(const JobSpec& job, const ParsedSystem& sys, std::string& text) {
  if (!job.threshold) throw ContractViolation("regularize needs --threshold");
  auto forms = sys.forms();
  for (std::size_t k = 0; k < forms.size(); ++k) {
    auto d = forms[k].homogeneous_degree();
    if (!d || *d % 2 == 0)
      throw ContractViolation("equation " + std::to_string(k + 1) + " must be homogeneous of odd degree (the Birch-field method needs odd degrees)");
  }
  auto res = detail::staged("regularize", [&] { return regularize(forms, parse_threshold(*job.threshold), job.budget); });
  if (auto chk = verify_membership(res); !chk) throw ContractViolation("regularize: certificate check failed (" + chk.reason + ")");
  Json j = base_certificate(job, "regularization", sys);
  std::vector<std::string> gens, trace;
  for (const auto& g : res.generators) gens.push_back(g.to_string(sys.variables));
  for (const auto& t : res.trace) trace.push_back(t.to_string());
  Json mem = Json::array();
  for (const auto& m : res.memberships) {
    std::vector<std::string> cof;
    for (const auto& c : m.cofactors) cof.push_back(c.to_string(sys.variables));
    mem.push_back(cof);
  }
  j["generators"] = gens;
  j["memberships"] = mem;
  j["trace"] = trace;
  j["stage"] = "regularize";
  text = "stage: regularize\ntrace:";
  for (const auto& t : trace) text += " " + t;
  text += "\ngenerators:\n";
  for (const auto& g : gens) text += "  " + g + "\n";
  return j;
}

inline Json cmd_orthogonalize(const JobSpec& job, const ParsedSystem& sys, const BirchField& field, std::string& text) {
  auto forms = sys.forms();
  std::optional<QPoly> avoid;
  if (job.avoid) avoid = parse_in_context(*job.avoid, sys, "in --avoid");
  OrthogonalFamily fam;
  Json j = base_certificate(job, "orthogonal-family", sys);
  if (forms.size() == 1 && job.ell == 1 && !avoid) {
    fam = detail::staged("orthogonal-sequence", [&] { return brauer_orthogonal_sequence(forms[0], job.blocks, field, job.budget); });
    for (const auto& v : fam.vectors) fam.blocks.push_back({v});
  } else {
    fam = detail::staged("orthogonal-blocks", [&] { return birch_orthogonal_blocks(forms, job.blocks, job.ell, avoid, field, job.budget); });
  }
  Json blocks = Json::array();
  for (const auto& b : fam.blocks) {
    Json arr = Json::array();
    for (const auto& v : b) arr.push_back(vector_to_json(v));
    blocks.push_back(arr);
  }
  j["blocks"] = blocks;
  j["stage"] = "orthogonalize:" + fam.method;
  text = "stage: orthogonalize:" + fam.method + "\n";
  for (std::size_t b = 0; b < fam.blocks.size(); ++b) {
    text += "block " + std::to_string(b + 1) + ":";
    for (const auto& v : fam.blocks[b]) text += " " + point_text(v);
    text += "\n";
  }
  if (fam.restriction_strength) {
    const auto& s = *fam.restriction_strength;
    text += "restriction strength: lower " + (s.lower ? s.lower->get_str() : std::string("none")) + ", upper " +
            (s.upper ? std::to_string(*s.upper) : std::string("infinity")) + "\n";
  }
  return j;
}

inline Json cmd_diagonal_solve(const JobSpec& job, const ParsedSystem& sys, const BirchField& field, std::string& text) {
  if (sys.polys.size() != 1) throw ContractViolation("diagonal-solve expects one equation");
  if (field.kind == FieldKind::RealFunctionField) return cmd_solve_function_field(job, sys, field, text);
  auto f = sys.forms()[0];
  if (!job.affine && !diagonal_support(f)) throw ContractViolation("diagonal-solve expects an equation of the form sum a_i x_i^d");
  return cmd_solve_constant(job, sys, field, text);
}

}  // namespace detail

/// Runs one job. Exit status: 0 success, 2 nothing found within budget, 1 invalid input or contract violation.
inline RunResult run(const JobSpec& job) {
  RunResult out;
  try {
    job.budget.validate();
    if (job.format != "text" && job.format != "json") throw ContractViolation("--format must be text or json");
    if (job.command == "verify") {
      if (job.inputs.size() != 1) throw ContractViolation("verify expects one certificate file");
      std::ifstream f(job.inputs[0]);
      if (!f) throw ContractViolation("cannot open " + job.inputs[0]);
      Json cert;
      try {
        cert = Json::parse(f);
      } catch (const std::exception& e) {
        throw ContractViolation(std::string("certificate is not valid JSON: ") + e.what());
      }
      VerifyReport rep = verify_certificate(cert);
      std::string text;
      for (const auto& n : rep.notes) text += "note: " + n + "\n";
      for (const auto& m : rep.failures) text += "FAIL: " + m + "\n";
      text += rep.ok ? "certificate verified\n" : "certificate rejected\n";
      out.output = text;
      out.exit_code = rep.ok ? 0 : 1;
      return out;
    }
    const BirchField field = BirchField::parse(job.field);
    const bool params = field.kind == FieldKind::RealFunctionField;
    ParsedSystem sys = parse_system(detail::read_inputs(job.inputs), params);
    std::string text;
    Json cert;
    if (job.command == "solve") {
      cert = params ? detail::cmd_solve_function_field(job, sys, field, text) : detail::cmd_solve_constant(job, sys, field, text);
    } else if (job.command == "sample") {
      cert = detail::cmd_sample(job, sys, field, text);
    } else if (job.command == "strength") {
      cert = detail::cmd_strength(job, sys, text);
    } else if (job.command == "regularize") {
      cert = detail::cmd_regularize(job, sys, text);
    } else if (job.command == "orthogonalize") {
      cert = detail::cmd_orthogonalize(job, sys, field, text);
    } else if (job.command == "diagonal-solve") {
      cert = detail::cmd_diagonal_solve(job, sys, field, text);
    } else {
      throw ContractViolation("unknown command '" + job.command + "'");
    }
    cert = seal(cert);
    out.certificate = cert.dump(2) + "\n";
    out.output = job.format == "json" ? cert.dump(2) + "\n" : "input: " + detail::describe(sys) + "\n" + text;
  } catch (const BudgetExhausted& e) {
    out.exit_code = 2;
    out.message = std::string("not found within budget: ") + e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.message = std::string("error: ") + e.what();
  }
  return out;
}

}  // namespace birch

#endif  // BIRCH_CLI_HPP
