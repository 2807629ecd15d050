#ifndef BIRCH_PARSE_HPP
#define BIRCH_PARSE_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birch/polynomial.hpp"
#include "birch/rational_function.hpp"

namespace birch {

class ParseError : public ContractViolation {
 public:
  ParseError(const std::string& where, const std::string& what) : ContractViolation("parse error " + where + ": " + what) {}
};

/// Polynomials over Q in variables and (optionally) parameters t, t1, t2, ...
struct ParsedSystem {
  std::vector<std::string> variables;
  std::vector<std::string> parameters;
  std::vector<QPoly> polys;  // context: variables then parameters
  std::vector<std::string> sources;

  std::size_t num_vars() const { return variables.size(); }

  /// Forms over Q; parameters are not allowed.
  std::vector<QPoly> forms() const {
    if (!parameters.empty()) throw ContractViolation("parameter " + parameters[0] + " is only allowed over R(t1..tp)");
    return polys;
  }

  /// Forms with coefficients in Q[t] inside R(t).
  std::vector<Polynomial<RationalFunction>> function_field_forms(std::size_t p) const {
    if (parameters.size() > p)
      throw ContractViolation("input uses " + std::to_string(parameters.size()) + " parameters but the field has " + std::to_string(p));
    const std::size_t n = variables.size();
    std::vector<Polynomial<RationalFunction>> out;
    for (const auto& f : polys) {
      std::map<Monomial, QPoly, GradedLexLess> by_x;
      for (const auto& [m, c] : f.terms()) {
        std::vector<unsigned> xe(n), te(p, 0);
        for (std::size_t i = 0; i < n; ++i) xe[i] = m[i];
        for (std::size_t j = 0; j < parameters.size(); ++j) te[param_index(parameters[j]) ] += m[n + j];
        by_x.try_emplace(Monomial(xe), QPoly(p)).first->second.add_term(Monomial(te), c);
      }
      Polynomial<RationalFunction> g(n);
      for (const auto& [m, c] : by_x) g.add_term(m, RationalFunction(c));
      out.push_back(g);
    }
    return out;
  }

  /// "t" and "t1" are the first parameter, "tk" the k-th.
  static std::size_t param_index(const std::string& name) {
    if (name == "t") return 0;
    return static_cast<std::size_t>(std::stoul(name.substr(1))) - 1;
  }

  /// Degree in the variables only.
  std::optional<unsigned> homogeneous_degree(std::size_t k) const {
    std::optional<unsigned> d;
    for (const auto& [m, c] : polys[k].terms()) {
      unsigned e = 0;
      for (std::size_t i = 0; i < variables.size(); ++i) e += m[i];
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    return d;
  }
};

namespace detail {

inline bool is_parameter_name(const std::string& s) {
  if (s.empty() || s[0] != 't') return false;
  if (s.size() == 1) return true;
  if (s[1] == '0') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// x2 < x10 < y: letters compared as text, trailing digits as numbers.
inline bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    std::string digits = s.substr(k);
    return std::make_pair(s.substr(0, k), digits.empty() ? -1L : std::stol(digits.substr(0, 15)));
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na != nb) return na < nb;
  return a < b;
}

struct Token {
  enum Kind { Number, Ident, Op, End } kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s, const std::string& label) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(i, j - i), i});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
    } else if (std::string("+-*/^()=").find(c) != std::string::npos) {
      out.push_back({Token::Op, std::string(1, c), i});
      ++i;
    } else {
      throw ParseError(label + " at column " + std::to_string(i + 1), std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, const std::map<std::string, std::size_t>& index, std::size_t nvars, std::string label)
      : toks_(std::move(toks)), index_(index), n_(nvars), label_(std::move(label)) {}

  QPoly equation() {
    QPoly lhs = expr();
    if (peek("=")) {
      ++pos_;
      QPoly rhs = expr();
      lhs -= rhs;
    }
    if (toks_[pos_].kind != Token::End) fail("unexpected '" + toks_[pos_].text + "'");
    return lhs;
  }

 private:
  bool peek(const char* op) const { return toks_[pos_].kind == Token::Op && toks_[pos_].text == op; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(label_ + " at column " + std::to_string(toks_[pos_].pos + 1), what);
  }

  QPoly expr() {
    QPoly acc(n_);
    bool first = true;
    while (true) {
      bool neg = false;
      if (peek("+") || peek("-")) {
        neg = peek("-");
        ++pos_;
      } else if (!first) {
        break;
      }
      QPoly t = term();
      acc += neg ? -t : t;
      first = false;
    }
    return acc;
  }

  bool starts_factor() const {
    const auto& t = toks_[pos_];
    return t.kind == Token::Number || t.kind == Token::Ident || (t.kind == Token::Op && t.text == "(");
  }

  QPoly term() {
    QPoly acc = power();
    while (true) {
      if (peek("*")) {
        ++pos_;
        acc *= power();
      } else if (peek("/")) {
        ++pos_;
        QPoly den = power();
        if (den.total_degree() > 0 || den.is_zero()) fail("division is only allowed by nonzero constants");
        acc = acc.scaled(Rational(1) / den.coefficient(Monomial{}));
      } else if (starts_factor()) {
        acc *= power();  // implicit multiplication
      } else {
        break;
      }
    }
    return acc;
  }

  QPoly power() {
    QPoly base = primary();
    if (peek("^")) {
      ++pos_;
      if (toks_[pos_].kind != Token::Number) fail("exponent must be a nonnegative integer");
      const auto& txt = toks_[pos_].text;
      if (txt.size() > 4) fail("exponent too large");
      unsigned e = static_cast<unsigned>(std::stoul(txt));
      ++pos_;
      base = base.pow(e);
    }
    return base;
  }

  QPoly primary() {
    const auto& t = toks_[pos_];
    if (t.kind == Token::Number) {
      ++pos_;
      return QPoly::constant(n_, Rational(Integer(t.text)));
    }
    if (t.kind == Token::Ident) {
      ++pos_;
      return QPoly::variable(n_, index_.at(t.text));
    }
    if (peek("(")) {
      ++pos_;
      QPoly e = expr();
      if (!peek(")")) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (peek("-")) {
      ++pos_;
      return -power();
    }
    fail(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  const std::map<std::string, std::size_t>& index_;
  std::size_t n_;
  std::string label_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Splits on ';' and newlines; blank pieces are skipped.
inline std::vector<std::string> split_equations(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == '\n') {
      if (cur.find_first_not_of(" \t\r") != std::string::npos) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.find_first_not_of(" \t\r") != std::string::npos) out.push_back(cur);
  return out;
}

/// Parses equations ("lhs = rhs" or an expression); identifiers t, t1, t2, ... are parameters when
/// allow_parameters is set. Variables are ordered naturally (x2 before x10). extra_variables are
/// added to the variable list even when unused.
/// With fixed_order the variables are exactly extra_variables, in that order.
inline ParsedSystem parse_system(const std::vector<std::string>& equations, bool allow_parameters = false,
                                 const std::vector<std::string>& extra_variables = {}, bool fixed_order = false) {
  if (equations.empty()) throw ParseError("in input", "no equations");
  std::vector<std::vector<detail::Token>> toks;
  std::set<std::string> vars(extra_variables.begin(), extra_variables.end()), params;
  for (std::size_t k = 0; k < equations.size(); ++k) {
    toks.push_back(detail::tokenize(equations[k], "in equation " + std::to_string(k + 1)));
    for (const auto& t : toks.back())
      if (t.kind == detail::Token::Ident) (allow_parameters && detail::is_parameter_name(t.text) ? params : vars).insert(t.text);
  }
  ParsedSystem out;
  if (fixed_order) {
    for (const auto& v : vars)
      if (std::find(extra_variables.begin(), extra_variables.end(), v) == extra_variables.end())
        throw ParseError("in input", "unknown variable '" + v + "'");
    out.variables = extra_variables;
  } else {
    out.variables.assign(vars.begin(), vars.end());
    std::sort(out.variables.begin(), out.variables.end(), detail::natural_less);
  }
  out.parameters.assign(params.begin(), params.end());
  std::sort(out.parameters.begin(), out.parameters.end(), detail::natural_less);
  if (std::count(out.parameters.begin(), out.parameters.end(), "t") && std::count(out.parameters.begin(), out.parameters.end(), "t1"))
    throw ParseError("in input", "t and t1 name the same parameter");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.variables.size(); ++i) index[out.variables[i]] = i;
  for (std::size_t j = 0; j < out.parameters.size(); ++j) index[out.parameters[j]] = out.variables.size() + j;
  const std::size_t n = out.variables.size() + out.parameters.size();
  for (std::size_t k = 0; k < equations.size(); ++k) {
    detail::ExprParser p(toks[k], index, n, "in equation " + std::to_string(k + 1));
    out.polys.push_back(p.equation());
    out.sources.push_back(equations[k]);
  }
  return out;
}

/// Parses one extra polynomial (such as an avoid condition) in the variables of an existing system.
inline QPoly parse_in_context(const std::string& text, const ParsedSystem& sys, const std::string& label) {
  auto toks = detail::tokenize(text, label);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < sys.variables.size(); ++i) index[sys.variables[i]] = i;
  for (const auto& t : toks)
    if (t.kind == detail::Token::Ident && !index.count(t.text))
      throw ParseError(label + " at column " + std::to_string(t.pos + 1), "unknown variable '" + t.text + "'");
  detail::ExprParser p(toks, index, sys.variables.size(), label);
  return p.equation();
}

/// Homogeneity and odd degree for every equation, with messages pointing at the remedy.
inline std::vector<unsigned> check_odd_forms(const ParsedSystem& sys) {
  std::vector<unsigned> degrees;
  for (std::size_t k = 0; k < sys.polys.size(); ++k) {
    if (sys.polys[k].is_zero()) throw ContractViolation("equation " + std::to_string(k + 1) + " is identically zero");
    auto d = sys.homogeneous_degree(k);
    if (!d)
      throw ContractViolation("equation " + std::to_string(k + 1) +
                              " is not homogeneous; pass --affine to solve f = c through homogenization with a fresh variable");
    if (*d % 2 == 0)
      throw ContractViolation("equation " + std::to_string(k + 1) + " has even degree " + std::to_string(*d) +
                              "; solutions over Birch fields are only guaranteed for odd degrees");
    degrees.push_back(*d);
  }
  return degrees;
}

inline std::string print_polynomial(const QPoly& f, const std::vector<std::string>& names) { return f.to_string(names); }

}  // namespace birch

#endif  // BIRCH_PARSE_HPP
