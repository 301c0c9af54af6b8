#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"

namespace nflab::dsl {

// Textual grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' nonneg-int)?       (int <= 64)
//   atom    := number ['i'] | 'i' | 'z' | param | 'exp' '(' expr ')'
//            | 'reflect' '(' expr ')' | '(' expr ')'
// Division is recognized and rejected as UnsupportedConstruct.

namespace detail {

struct Token {
  enum class Kind { Number, ImagNumber, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t begin{0};
  std::size_t end{0};
  double number{0.0};
  std::string text;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.begin = i;
    auto single = [&](Token::Kind k) {
      t.kind = k;
      t.text = std::string(1, c);
      t.end = ++i;
      out.push_back(t);
    };
    if (c == '+') { single(Token::Kind::Plus); continue; }
    if (c == '-') { single(Token::Kind::Minus); continue; }
    if (c == '*') { single(Token::Kind::Star); continue; }
    if (c == '/') { single(Token::Kind::Slash); continue; }
    if (c == '^') { single(Token::Kind::Caret); continue; }
    if (c == '(') { single(Token::Kind::LParen); continue; }
    if (c == ')') { single(Token::Kind::RParen); continue; }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && src[j] == '.') {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < n && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) {
          ++k;
          while (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      t.text = src.substr(i, j - i);
      t.number = std::strtod(t.text.c_str(), nullptr);
      t.kind = Token::Kind::Number;
      if (j < n && src[j] == 'i' &&
          !(j + 1 < n && (std::isalnum(static_cast<unsigned char>(src[j + 1])) || src[j + 1] == '_'))) {
        t.kind = Token::Kind::ImagNumber;
        ++j;
      }
      t.end = j;
      i = j;
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      t.end = j;
      i = j;
      out.push_back(t);
      continue;
    }
    throw ParseError(i, "a token", std::string(1, c));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.begin = end.end = n;
  end.text = "<end>";
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, const std::map<std::string, double>& params)
      : tokens_(lex(src)), params_(params) {}

  NodePtr parse() {
    NodePtr e = expr();
    if (!at(Token::Kind::End)) fail("end of input");
    return e;
  }

 private:
  std::vector<Token> tokens_;
  const std::map<std::string, double>& params_;
  std::size_t pos_{0};

  const Token& cur() const { return tokens_[pos_]; }
  bool at(Token::Kind k) const { return cur().kind == k; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(cur().begin, expected, cur().text);
  }

  NodePtr expr() {
    NodePtr acc = term();
    while (at(Token::Kind::Plus) || at(Token::Kind::Minus)) {
      const bool minus = at(Token::Kind::Minus);
      advance();
      NodePtr rhs = term();
      if (minus) rhs = make_product({make_const(Complex(-1.0, 0.0)), rhs});
      acc = make_sum({acc, rhs});
    }
    return acc;
  }

  NodePtr term() {
    NodePtr acc = unary();
    for (;;) {
      if (at(Token::Kind::Star)) {
        advance();
        acc = make_product({acc, unary()});
      } else if (at(Token::Kind::Slash)) {
        throw ParseError(ErrorCode::UnsupportedConstruct, cur().begin,
                         "'*' (division is not representable)", cur().text);
      } else {
        return acc;
      }
    }
  }

  NodePtr unary() {
    if (at(Token::Kind::Minus)) {
      advance();
      return make_product({make_const(Complex(-1.0, 0.0)), unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!at(Token::Kind::Caret)) return base;
    advance();
    if (at(Token::Kind::Minus))
      throw ParseError(ErrorCode::UnsupportedConstruct, cur().begin,
                       "a nonnegative integer exponent", cur().text);
    if (!at(Token::Kind::Number)) fail("an integer exponent");
    const Token& t = advance();
    const double v = t.number;
    if (v != std::floor(v) || t.text.find('.') != std::string::npos)
      throw ParseError(t.begin, "an integer exponent", t.text);
    const long n = static_cast<long>(v);
    if (n > 64) throw ParseError(t.begin, "an integer exponent <= 64", t.text);
    if (n == 0) return make_const(Complex(1.0, 0.0));
    std::vector<NodePtr> copies(static_cast<std::size_t>(n), base);
    return make_product(std::move(copies));
  }

  NodePtr atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Token::Kind::Number:
        advance();
        return make_const(Complex(t.number, 0.0));
      case Token::Kind::ImagNumber:
        advance();
        return make_const(Complex(0.0, t.number));
      case Token::Kind::LParen: {
        advance();
        NodePtr e = expr();
        if (!at(Token::Kind::RParen)) fail("')'");
        advance();
        return e;
      }
      case Token::Kind::Ident: {
        if (t.text == "z") {
          advance();
          return make_poly({Complex(0.0, 0.0), Complex(1.0, 0.0)});
        }
        if (t.text == "i") {
          advance();
          return make_const(Complex(0.0, 1.0));
        }
        if (t.text == "exp" || t.text == "reflect") {
          const bool is_exp = t.text == "exp";
          advance();
          if (!at(Token::Kind::LParen)) fail("'('");
          advance();
          NodePtr arg = expr();
          if (!at(Token::Kind::RParen)) fail("')'");
          advance();
          return is_exp ? make_exp(arg) : make_reflect(arg);
        }
        auto it = params_.find(t.text);
        if (it == params_.end())
          throw ParseError(ErrorCode::UnboundParam, t.begin, "a bound parameter", t.text);
        advance();
        return make_const(Complex(it->second, 0.0));
      }
      default:
        fail("a number, 'z', 'i', a parameter, 'exp', 'reflect' or '('");
    }
  }
};

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline AnalyticFn parse_fn(const std::string& text,
                           const std::map<std::string, double>& params = {}) {
  for (const auto& [name, _] : params)
    if (name == "z" || name == "i" || name == "exp" || name == "reflect")
      throw Error(ErrorCode::SchemaError, "parameter name '" + name + "' is reserved");
  detail::Parser p(text, params);
  return AnalyticFn(p.parse());
}

// --------------------------------------------------------------------------
// Pretty printer.  Output re-parses to a structurally identical tree for
// parser-produced nodes; affine nodes print via substitution of the variable
// (equivalent function, folded structure).

namespace detail {

inline std::string lit(Complex c) {
  const double re = c.real(), im = c.imag();
  if (im == 0.0) return fmt_double(re);
  if (re == 0.0) return im < 0.0 ? "-" + fmt_double(-im) + "i" : fmt_double(im) + "i";
  std::string s = "(" + fmt_double(re);
  s += im < 0.0 ? " - " + fmt_double(-im) + "i" : " + " + fmt_double(im) + "i";
  return s + ")";
}

inline std::string print_node(const NodePtr& n, const std::string& var);

inline std::string print_poly(const std::vector<Complex>& coeffs, const std::string& var) {
  std::string s;
  bool first = true;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == Complex(0.0, 0.0) && coeffs.size() > 1) continue;
    if (!first) s += " + ";
    first = false;
    s += lit(coeffs[k]);
    if (k >= 1) s += "*" + var;
    if (k >= 2) s += "^" + std::to_string(k);
  }
  if (first) s = "0";
  return s;
}

inline std::string print_node(const NodePtr& n, const std::string& var) {
  switch (n->kind) {
    case FnNode::Kind::Polynomial:
      return n->coeffs.size() > 1 ? "(" + print_poly(n->coeffs, var) + ")"
                                  : print_poly(n->coeffs, var);
    case FnNode::Kind::Exp:
      return "exp(" + print_node(n->children[0], var) + ")";
    case FnNode::Kind::ReflectSym:
      return "reflect(" + print_node(n->children[0], var) + ")";
    case FnNode::Kind::Sum: {
      std::string s = "(";
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) s += " + ";
        s += print_node(n->children[i], var);
      }
      return s + ")";
    }
    case FnNode::Kind::Product: {
      std::string s;
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) s += "*";
        s += print_node(n->children[i], var);
      }
      return s;
    }
    case FnNode::Kind::Affine: {
      const std::string inner =
          "(" + lit(n->aff_a) + "*" + var + " + " + lit(n->aff_b) + ")";
      return print_node(n->children[0], inner);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "bad node kind");
}

}  // namespace detail

inline std::string print_fn(const AnalyticFn& f) { return detail::print_node(f.node(), "z"); }

// --------------------------------------------------------------------------
// Function-spec files: JSON array of {name, expr, domain?, params?}.

struct FnSource {
  std::string name;
  std::string expr;
  std::optional<Disk> domain;
  std::map<std::string, double> params;

  AnalyticFn compile() const {
    try {
      AnalyticFn f = parse_fn(expr, params);
      return f.with_domain(domain.value_or(Disk()));
    } catch (const ParseError& e) {
      throw ParseError(e.code(), e.position(), e.expected() + " (in function '" + name + "')",
                       e.found());
    }
  }
};

inline std::vector<FnSource> load_fn_sources(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::SchemaError, "top level must be an array");
  std::vector<FnSource> out;
  for (const auto& item : doc) {
    if (!item.is_object()) throw Error(ErrorCode::SchemaError, "entries must be objects");
    FnSource src;
    if (!item.contains("name") || !item["name"].is_string())
      throw Error(ErrorCode::SchemaError, "missing string field 'name'");
    src.name = item["name"].get<std::string>();
    if (!item.contains("expr") || !item["expr"].is_string())
      throw Error(ErrorCode::SchemaError, "missing string field 'expr' in '" + src.name + "'");
    src.expr = item["expr"].get<std::string>();
    if (item.contains("domain")) {
      const auto& d = item["domain"];
      if (!d.is_object() || !d.contains("center") || !d.contains("radius") ||
          !d["center"].is_array() || d["center"].size() != 2 ||
          !d["center"][0].is_number() || !d["center"][1].is_number() ||
          !d["radius"].is_number())
        throw Error(ErrorCode::SchemaError, "bad domain in '" + src.name + "'");
      const double r = d["radius"].get<double>();
      if (!(r > 0.0))
        throw Error(ErrorCode::SchemaError, "domain radius must be positive in '" + src.name + "'");
      src.domain = Disk(Complex(d["center"][0].get<double>(), d["center"][1].get<double>()), r);
    }
    if (item.contains("params")) {
      if (!item["params"].is_object())
        throw Error(ErrorCode::SchemaError, "params must be an object in '" + src.name + "'");
      for (auto it = item["params"].begin(); it != item["params"].end(); ++it) {
        if (!it.value().is_number())
          throw Error(ErrorCode::SchemaError, "param '" + it.key() + "' must be a number");
        src.params[it.key()] = it.value().get<double>();
      }
    }
    for (const auto& prev : out)
      if (prev.name == src.name)
        throw Error(ErrorCode::SchemaError, "duplicate function name '" + src.name + "'");
    // Surface syntax errors at load time, with the owning name attached.
    src.compile();
    out.push_back(std::move(src));
  }
  return out;
}

inline std::vector<FnSource> load_fn_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "invalid JSON in '" + path + "': " + e.what());
  }
  return load_fn_sources(doc);
}

inline const FnSource& find_fn(const std::vector<FnSource>& sources, const std::string& name) {
  for (const auto& s : sources)
    if (s.name == name) return s;
  throw Error(ErrorCode::SchemaError, "no function named '" + name + "'");
}

}  // namespace nflab::dsl
