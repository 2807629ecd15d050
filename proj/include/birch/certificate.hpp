#ifndef BIRCH_CERTIFICATE_HPP
#define BIRCH_CERTIFICATE_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "birch/interval.hpp"
#include "birch/orthogonal.hpp"
#include "birch/parse.hpp"
#include "birch/radical.hpp"

namespace birch {

using Json = nlohmann::json;

inline constexpr int kCertificateFormatVersion = 1;

// Encodings: a radical is a list of [coefficient, [[prime, exponent], ...]]; rationals are strings.

inline Json radical_to_json(const RealRadical& x) {
  Json out = Json::array();
  for (const auto& [m, c] : x.terms()) {
    Json f = Json::array();
    for (const auto& [p, e] : m.factors()) f.push_back(Json::array({p, e.get_str()}));
    out.push_back(Json::array({c.get_str(), f}));
  }
  return out;
}

inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ContractViolation("certificate: expected a rational string");
  Rational q;
  if (q.set_str(j.get<std::string>(), 10) != 0) throw ContractViolation("certificate: malformed rational '" + j.get<std::string>() + "'");
  q.canonicalize();
  return q;
}

inline RealRadical radical_from_json(const Json& j) {
  if (!j.is_array()) throw ContractViolation("certificate: expected a radical term list");
  RealRadical out(0);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) throw ContractViolation("certificate: malformed radical term");
    RealRadical t(rational_from_json(term[0]));
    for (const auto& f : term[1]) {
      const unsigned long p = f.at(0).get<unsigned long>();
      const Rational e = rational_from_json(f.at(1));
      if (p < 2 || mpz_probab_prime_p(Integer(p).get_mpz_t(), 30) == 0) throw ContractViolation("certificate: radical base is not prime");
      if (e <= 0 || e >= 1) throw ContractViolation("certificate: radical exponent outside (0, 1)");
      t = t * RealRadical::from_monomial(RadicalMonomial::prime_power(p, e));
    }
    out = out + t;
  }
  return out;
}

inline Json vector_to_json(const RVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(radical_to_json(x));
  return out;
}

inline RVec vector_from_json(const Json& j) {
  RVec out;
  for (const auto& x : j) out.push_back(radical_from_json(x));
  return out;
}

template <class K, class Enc>
Json poly_to_json(const Polynomial<K>& f, Enc enc) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back(Json{{"e", m.exponents()}, {"c", enc(c)}});
  return Json{{"vars", f.num_vars()}, {"terms", terms}};
}

template <class K, class Dec>
Polynomial<K> poly_from_json(const Json& j, Dec dec) {
  Polynomial<K> f(j.at("vars").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    auto e = t.at("e").get<std::vector<unsigned>>();
    if (e.size() > f.num_vars()) throw ContractViolation("certificate: monomial outside its context");
    f.add_term(Monomial(e), dec(t.at("c")));
  }
  return f;
}

inline Json interval_to_json(const Interval& x) { return Json::array({x.lo().get_str(), x.hi().get_str()}); }
inline Interval interval_from_json(const Json& j) { return Interval(rational_from_json(j.at(0)), rational_from_json(j.at(1))); }

inline Json rpoly_to_json(const RPoly& f) { return poly_to_json(f, radical_to_json); }
inline RPoly rpoly_from_json(const Json& j) { return poly_from_json<RealRadical>(j, radical_from_json); }
inline Json ipoly_to_json(const Polynomial<Interval>& f) { return poly_to_json(f, interval_to_json); }
inline Polynomial<Interval> ipoly_from_json(const Json& j) { return poly_from_json<Interval>(j, interval_from_json); }

/// 64-bit FNV-1a of the compact dump without the "hash" member.
inline std::string certificate_hash(Json j) {
  j.erase("hash");
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json seal(Json j) {
  j["format_version"] = kCertificateFormatVersion;
  j["hash"] = certificate_hash(j);
  return j;
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(std::string s) {
    ok = false;
    failures.push_back(std::move(s));
  }
};

namespace detail {

/// Coefficient c(t) of a parsed equation as a polynomial in t; denominators must be constants.
inline QPoly polynomial_coefficient(const RationalFunction& c, std::size_t p) {
  const QPoly den = c.denominator().widened(p);
  if (den.total_degree() > 0) throw ContractViolation("certificate: coefficient with non-constant denominator");
  return c.numerator().widened(p).scaled(Rational(1) / den.coefficient(Monomial{}));
}

template <class K>
Polynomial<K> evaluate_at_functions(const Polynomial<RationalFunction>& f, const std::vector<Polynomial<K>>& x, std::size_t p) {
  Polynomial<K> acc(p);
  for (const auto& [m, c] : f.terms()) {
    Polynomial<K> t = convert<K>(polynomial_coefficient(c, p));
    for (std::size_t i = 0; i < x.size(); ++i)
      if (m[i] > 0) t *= x[i].pow(m[i]);
    acc += t;
  }
  return acc;
}

inline bool any_nonzero(const RVec& v) {
  return std::any_of(v.begin(), v.end(), [](const RealRadical& x) { return !x.is_zero(); });
}

inline void verify_points(const Json& cert, VerifyReport& rep) {
  const auto vars = cert.at("variables").get<std::vector<std::string>>();
  const auto eqs = cert.at("equations").get<std::vector<std::string>>();
  const bool affine = cert.value("affine", false);
  const BirchField field = BirchField::parse(cert.at("field").get<std::string>());
  const bool function_field = field.kind == FieldKind::RealFunctionField;
  ParsedSystem sys = parse_system(eqs, function_field, vars, true);
  std::optional<QPoly> avoid;
  if (cert.contains("avoid") && !cert["avoid"].is_null()) avoid = parse_in_context(cert["avoid"].get<std::string>(), sys, "in avoid");
  const Rational tol = cert.contains("tolerance") ? rational_from_json(cert["tolerance"]) : Rational(0);
  const auto& points = cert.at("points");
  if (points.empty()) rep.fail("certificate contains no points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    const std::string tag = points.size() > 1 ? "point " + std::to_string(k + 1) + ": " : "";
    const auto& recorded = pt.at("residuals");
    if (recorded.size() != eqs.size()) {
      rep.fail(tag + "residual count does not match the equations");
      continue;
    }
    if (pt.contains("coordinates")) {
      RVec x = vector_from_json(pt["coordinates"]);
      if (x.size() != vars.size()) {
        rep.fail(tag + "point has " + std::to_string(x.size()) + " coordinates for " + std::to_string(vars.size()) + " variables");
        continue;
      }
      if (!affine && !any_nonzero(x)) rep.fail(tag + "point is zero");
      auto forms = sys.forms();
      for (std::size_t e = 0; e < forms.size(); ++e) {
        RealRadical r = evaluate(convert<RealRadical>(forms[e]), x);
        RealRadical rec = radical_from_json(recorded[e]);
        if (!(r == rec))
          rep.fail(tag + "equation " + std::to_string(e + 1) + " (" + eqs[e] + "): recorded residual " + to_string(rec) +
                   " but the point gives " + to_string(r));
        else if (!r.is_zero())
          rep.fail(tag + "equation " + std::to_string(e + 1) + " (" + eqs[e] + ") does not vanish: residual " + to_string(r));
      }
      if (avoid && evaluate(convert<RealRadical>(*avoid), x).is_zero()) rep.fail(tag + "avoid polynomial vanishes at the point");
      continue;
    }
    const std::size_t p = field.params;
    auto forms = sys.function_field_forms(p);
    if (pt.contains("exact_functions")) {
      std::vector<RPoly> x;
      for (const auto& f : pt["exact_functions"]) x.push_back(rpoly_from_json(f).widened(p));
      if (x.size() != vars.size()) {
        rep.fail(tag + "wrong number of coordinates");
        continue;
      }
      if (std::all_of(x.begin(), x.end(), [](const RPoly& f) { return f.is_zero(); })) rep.fail(tag + "point is zero");
      for (std::size_t e = 0; e < forms.size(); ++e) {
        RPoly r = evaluate_at_functions(forms[e], x, p);
        RPoly rec = rpoly_from_json(recorded[e]).widened(p);
        if (!(r == rec)) rep.fail(tag + "equation " + std::to_string(e + 1) + " (" + eqs[e] + "): recorded residual does not match");
        else if (!r.is_zero()) rep.fail(tag + "equation " + std::to_string(e + 1) + " (" + eqs[e] + ") does not vanish");
      }
    } else if (pt.contains("enclosed_functions")) {
      std::vector<Polynomial<Interval>> x;
      for (const auto& f : pt["enclosed_functions"]) x.push_back(ipoly_from_json(f).widened(p));
      if (x.size() != vars.size()) {
        rep.fail(tag + "wrong number of coordinates");
        continue;
      }
      bool nonzero = false;
      for (const auto& f : x)
        for (const auto& [m, c] : f.terms()) nonzero = nonzero || !c.contains_zero();
      if (!nonzero) rep.fail(tag + "enclosed point may be zero");
      for (std::size_t e = 0; e < forms.size(); ++e) {
        auto r = evaluate_at_functions(forms[e], x, p);
        for (const auto& [m, c] : r.terms())
          if (!c.contains_zero() || c.width() > tol) {
            rep.fail(tag + "equation " + std::to_string(e + 1) + " (" + eqs[e] + "): residual enclosure excludes 0 or exceeds the tolerance");
            break;
          }
      }
    } else {
      rep.fail(tag + "point has no coordinates");
    }
  }
}

inline void verify_orthogonal(const Json& cert, VerifyReport& rep) {
  const auto vars = cert.at("variables").get<std::vector<std::string>>();
  ParsedSystem sys = parse_system(cert.at("equations").get<std::vector<std::string>>(), false, vars, true);
  OrthogonalFamily fam;
  fam.forms = sys.forms();
  for (const auto& b : cert.at("blocks")) {
    std::vector<RVec> basis;
    for (const auto& v : b) basis.push_back(vector_from_json(v));
    fam.blocks.push_back(basis);
  }
  for (const auto& b : fam.blocks)
    for (const auto& v : b)
      if (v.size() != vars.size()) {
        rep.fail("member vector has the wrong dimension");
        return;
      }
  if (auto chk = verify_orthogonal_family(fam); !chk) rep.fail("orthogonality check failed: " + chk.reason);
}

inline void verify_membership_json(const Json& cert, VerifyReport& rep) {
  const auto vars = cert.at("variables").get<std::vector<std::string>>();
  ParsedSystem sys = parse_system(cert.at("equations").get<std::vector<std::string>>(), false, vars, true);
  std::vector<QPoly> gens;
  for (const auto& g : cert.at("generators")) gens.push_back(parse_in_context(g.get<std::string>(), sys, "in generator"));
  const auto& mem = cert.at("memberships");
  if (mem.size() != sys.polys.size()) rep.fail("membership count does not match the equations");
  for (std::size_t i = 0; i < mem.size() && i < sys.polys.size(); ++i) {
    const auto& cof = mem[i];
    if (cof.size() != gens.size()) {
      rep.fail("equation " + std::to_string(i + 1) + ": cofactor count does not match the generators");
      continue;
    }
    QPoly acc(vars.size());
    for (std::size_t j = 0; j < gens.size(); ++j) acc += parse_in_context(cof[j].get<std::string>(), sys, "in cofactor") * gens[j];
    if (!(acc == sys.polys[i])) rep.fail("equation " + std::to_string(i + 1) + " is not the recorded combination of the generators");
  }
  for (const auto& g : gens) {
    auto d = g.homogeneous_degree();
    if (!d || *d % 2 == 0) rep.fail("generator " + g.to_string(vars) + " is not a form of odd degree");
  }
}

}  // namespace detail

/// Re-checks a certificate using polynomial evaluation only.
inline VerifyReport verify_certificate(const Json& cert) {
  VerifyReport rep;
  if (!cert.is_object() || cert.value("format_version", 0) != kCertificateFormatVersion) {
    rep.fail("unsupported or missing format_version");
    return rep;
  }
  const std::string kind = cert.value("kind", "");
  try {
    if (kind == "points") detail::verify_points(cert, rep);
    else if (kind == "orthogonal-family") detail::verify_orthogonal(cert, rep);
    else if (kind == "regularization") detail::verify_membership_json(cert, rep);
    else if (kind == "strength-bounds") rep.notes.push_back("strength bounds carry no checkable witness; only the hash is verified");
    else rep.fail("unknown certificate kind '" + kind + "'");
  } catch (const std::exception& e) {
    rep.fail(std::string("malformed certificate: ") + e.what());
  }
  if (!cert.contains("hash") || cert["hash"] != certificate_hash(cert)) rep.fail("hash mismatch: the certificate was modified after sealing");
  return rep;
}

}  // namespace birch

#endif  // BIRCH_CERTIFICATE_HPP
