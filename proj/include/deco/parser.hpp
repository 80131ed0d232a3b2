// Text format for signatures, models, terms and equations.
//
//   signature NAME {
//     logic exc | excore | states;
//     type T;
//     param P;            // declares type P and makes it the exception parameter
//     param P = T;        // alias P for an existing type T
//     value V; / value V = T;
//     op f : A -> B [pure | acc];
//     const c : T;        // op c : Unit -> T
//     model {
//       T = {a, b, c};    // or T = 3;
//       f(x) = (x + 1) % 3;
//       f = [1, 2, 0];
//       c = 2;
//     }
//   }
//   term NAME : A -> B = EXPR;
//   check [NAME:] EXPR == EXPR;     (~~ for weak)
//
// Expressions compose with `.`, right to left. Atoms: id[T], copa[T], pa[T],
// throw[T], tag, untag, lookup, update, generator and term names,
// try (E) catch (E), TRY(E, E), CATCH(E), (E).
#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "deco/model.hpp"
#include "deco/term.hpp"

namespace deco {

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1, col = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else {
      static const char* two[] = {"==", "~~", "->"};
      t.kind = Token::Kind::Punct;
      for (const char* p : two)
        if (src.compare(i, 2, p) == 0) t.text = p;
      if (t.text.empty()) {
        if (std::string("{}()[];:,.=+-*%/").find(c) == std::string::npos)
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
      }
      adv(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct NamedCheck {
  std::string name;
  Equation eq;
};

struct Document {
  Signature sig;
  std::map<std::string, Type> aliases;
  std::optional<FiniteModel> model;
  std::vector<std::pair<std::string, Term>> terms;
  std::vector<NamedCheck> checks;
};

namespace detail {

class Parser {
 public:
  Parser(std::vector<Token> toks, Document* doc) : toks_(std::move(toks)), doc_(doc) {}

  // ---- documents ---------------------------------------------------------

  void document(const std::string& stem) {
    std::vector<std::pair<std::string, bool>> raw;  // name, explicitly named
    while (!at_end()) {
      const Token& t = peek();
      if (is("signature")) {
        signature();
      } else if (is("term")) {
        named_term();
      } else if (is("check")) {
        next();
        std::string name;
        if (peek().kind == Token::Kind::Ident && peek(1).text == ":") {
          name = next().text;
          expect(":");
        }
        Equation e = equation();
        expect(";");
        doc_->checks.push_back({name, std::move(e)});
        raw.push_back({name, !name.empty()});
      } else {
        throw ParseError(t.line, t.col, "expected 'signature', 'term' or 'check', found '" + t.text + "'");
      }
    }
    int unnamed = 0;
    for (const auto& [n, named] : raw) unnamed += named ? 0 : 1;
    int k = 0;
    for (auto& c : doc_->checks) {
      if (!c.name.empty()) continue;
      ++k;
      c.name = unnamed == 1 ? stem : stem + "." + std::to_string(k);
    }
  }

  // ---- expressions -------------------------------------------------------

  Equation equation() {
    Term l = expr();
    const Token& op = peek();
    Strength s;
    if (op.text == "==") s = Strength::Strong;
    else if (op.text == "~~") s = Strength::Weak;
    else throw ParseError(op.line, op.col, "expected '==' or '~~', found '" + op.text + "'");
    next();
    Term r = expr();
    if (l.dom != r.dom || l.cod != r.cod)
      throw ParseError(op.line, op.col,
                       "equation sides are not parallel: " + sig_type(l) + " vs " + sig_type(r));
    return {std::move(l), std::move(r), s};
  }

  std::variant<Term, Equation> term_or_equation() {
    Term l = expr();
    if (peek().text == "==" || peek().text == "~~") {
      const Token op = next();
      Term r = expr();
      if (l.dom != r.dom || l.cod != r.cod)
        throw ParseError(op.line, op.col,
                         "equation sides are not parallel: " + sig_type(l) + " vs " + sig_type(r));
      return Equation{std::move(l), std::move(r), op.text == "==" ? Strength::Strong : Strength::Weak};
    }
    return l;
  }

  Term expr() {
    struct Piece {
      Term t;
      Token at;
    };
    std::vector<Piece> ps;
    Token at = peek();
    ps.push_back({factor(), at});
    while (peek().text == ".") {
      next();
      at = peek();
      ps.push_back({factor(), at});
    }
    // rightmost runs first
    Term out = ps.back().t;
    for (std::size_t i = ps.size() - 1; i-- > 0;) {
      const Piece& g = ps[i];
      if (g.t.dom != out.cod)
        throw ParseError(g.at.line, g.at.col,
                         "cannot compose '" + print(g.t) + "' (expects " + g.t.dom.name + ") after '" +
                             print(ps[i + 1].t) + "' (returns " + out.cod.name + ")");
      out = compose(g.t, out);
    }
    return out;
  }

  void expect_end() {
    if (!at_end()) throw ParseError(peek().line, peek().col, "unexpected '" + peek().text + "'");
  }

  bool at_end() const { return toks_[pos_].kind == Token::Kind::End; }

 private:
  static std::string sig_type(const Term& t) { return t.dom.name + " -> " + t.cod.name; }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is(const std::string& s) const { return peek().text == s && peek().kind != Token::Kind::End; }
  Token expect(const std::string& s) {
    if (!is(s)) throw ParseError(peek().line, peek().col, "expected '" + s + "', found '" + peek().text + "'");
    return next();
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident)
      throw ParseError(peek().line, peek().col, "expected a name, found '" + peek().text + "'");
    return next().text;
  }
  int integer() {
    if (peek().kind != Token::Kind::Int)
      throw ParseError(peek().line, peek().col, "expected a number, found '" + peek().text + "'");
    return std::stoi(next().text);
  }

  Type type() {
    const Token t = peek();
    const std::string n = ident();
    auto it = doc_->aliases.find(n);
    Type ty = it != doc_->aliases.end() ? it->second : Type{n};
    if (!doc_->sig.has_type(ty)) throw ParseError(t.line, t.col, "unknown type '" + n + "'");
    return ty;
  }

  Type require(const std::optional<Type>& t, const Token& at, const char* what) {
    if (!t) throw ParseError(at.line, at.col, std::string("'") + at.text + "' needs a " + what + " type");
    return *t;
  }

  Term bracket_type_atom(const Token& at, const std::string& kw) {
    expect("[");
    Type t = type();
    expect("]");
    if (kw == "id") return identity(t);
    if (kw == "copa") return single(atoms::copa(t));
    if (kw == "pa") return single(atoms::pa(t));
    return single(atoms::throw_to(require(doc_->sig.param, at, "parameter"), t));
  }

  Term factor() {
    const Token at = peek();
    if (is("(")) {
      next();
      Term t = expr();
      expect(")");
      return t;
    }
    const std::string n = ident();
    try {
      if ((n == "id" || n == "copa" || n == "pa" || n == "throw") && is("[")) return bracket_type_atom(at, n);
      if (n == "tag") return single(atoms::tag(require(doc_->sig.param, at, "parameter")));
      if (n == "untag") return single(atoms::untag(require(doc_->sig.param, at, "parameter")));
      if (n == "lookup") return single(atoms::lookup(require(doc_->sig.value, at, "value")));
      if (n == "update") return single(atoms::update(require(doc_->sig.value, at, "value")));
      if (n == "try" && is("(")) {
        expect("(");
        Term a = expr();
        expect(")");
        const Token c = expect("catch");
        expect("(");
        Term b = expr();
        expect(")");
        return single(atoms::try_catch(require(doc_->sig.param, c, "parameter"), std::move(a), std::move(b)));
      }
      if (n == "TRY" && is("(")) {
        expect("(");
        Term a = expr();
        expect(",");
        Term k = expr();
        expect(")");
        return single(atoms::try_core(std::move(a), std::move(k)));
      }
      if (n == "CATCH" && is("(")) {
        expect("(");
        Term b = expr();
        expect(")");
        return single(atoms::catch_core(require(doc_->sig.param, at, "parameter"), std::move(b)));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const TypeError& e) {
      throw ParseError(at.line, at.col, e.what());
    }
    if (const OpDecl* op = doc_->sig.find_op(n)) return single(atoms::gen(*op));
    for (const auto& [name, t] : doc_->terms)
      if (name == n) return t;
    throw ParseError(at.line, at.col, "unknown name '" + n + "'");
  }

  // ---- declarations ------------------------------------------------------

  void declare_type(const Token& at, const std::string& n) {
    if (n == "Empty" || n == "Unit") throw ParseError(at.line, at.col, "'" + n + "' is a reserved type");
    if (doc_->sig.has_type(Type{n}) || doc_->aliases.count(n))
      throw ParseError(at.line, at.col, "type '" + n + "' declared twice");
    doc_->sig.types.push_back(Type{n});
  }

  // `param P;` or `param P = T;`
  Type designated() {
    const Token at = peek();
    const std::string n = ident();
    if (is("=")) {
      next();
      Type t = type();
      if (n != t.name) {
        if (doc_->sig.has_type(Type{n})) throw ParseError(at.line, at.col, "alias '" + n + "' shadows a type");
        doc_->aliases[n] = t;
      }
      expect(";");
      return t;
    }
    if (!doc_->sig.has_type(Type{n})) declare_type(at, n);
    expect(";");
    return Type{n};
  }

  void signature() {
    expect("signature");
    doc_->sig.name = ident();
    expect("{");
    while (!is("}")) {
      const Token at = peek();
      const std::string kw = ident();
      if (kw == "logic") {
        const Token lt = peek();
        auto f = family_from_name(ident());
        if (!f) throw ParseError(lt.line, lt.col, "unknown logic '" + lt.text + "'");
        doc_->sig.family = *f;
        expect(";");
      } else if (kw == "type") {
        const Token nt = peek();
        declare_type(nt, ident());
        while (is(",")) {
          next();
          const Token more = peek();
          declare_type(more, ident());
        }
        expect(";");
      } else if (kw == "param") {
        doc_->sig.param = designated();
      } else if (kw == "value") {
        doc_->sig.value = designated();
      } else if (kw == "op" || kw == "const") {
        OpDecl op;
        const Token nt = peek();
        op.name = ident();
        if (doc_->sig.find_op(op.name)) throw ParseError(nt.line, nt.col, "operation '" + op.name + "' declared twice");
        expect(":");
        if (kw == "op") {
          op.dom = type();
          expect("->");
        } else {
          op.dom = Type::unit();
        }
        op.cod = type();
        if (is("pure")) {
          next();
        } else if (is("acc")) {
          next();
          op.grade = kPropagator;
        }
        expect(";");
        doc_->sig.ops.push_back(op);
      } else if (kw == "model") {
        model();
      } else {
        throw ParseError(at.line, at.col, "unknown declaration '" + kw + "'");
      }
    }
    expect("}");
  }

  // arithmetic over the element id x
  long arith(int x) { return arith_sum(x); }
  long arith_sum(int x) {
    long v = arith_prod(x);
    while (is("+") || is("-")) {
      const bool plus = next().text == "+";
      const long r = arith_prod(x);
      v = plus ? v + r : v - r;
    }
    return v;
  }
  long arith_prod(int x) {
    long v = arith_atom(x);
    while (is("*") || is("%") || is("/")) {
      const Token op = next();
      const long r = arith_atom(x);
      if (op.text == "*") {
        v *= r;
      } else {
        if (r == 0) throw ParseError(op.line, op.col, "division by zero");
        v = op.text == "/" ? v / r : ((v % r) + r) % r;
      }
    }
    return v;
  }
  long arith_atom(int x) {
    if (is("(")) {
      next();
      long v = arith_sum(x);
      expect(")");
      return v;
    }
    if (is("-")) {
      next();
      return -arith_atom(x);
    }
    if (peek().kind == Token::Kind::Int) return integer();
    const Token t = peek();
    if (t.text == "x") {
      next();
      return x;
    }
    throw ParseError(t.line, t.col, "expected a number, 'x' or '(' in a model expression");
  }

  int element(const Type& t, const FiniteModel& m) {
    const Token at = peek();
    int id = -1;
    if (at.kind == Token::Kind::Int) {
      id = integer();
    } else {
      const std::string n = ident();
      auto it = m.elements.find(t.name);
      if (it != m.elements.end())
        for (std::size_t k = 0; k < it->second.size(); ++k)
          if (it->second[k] == n) id = static_cast<int>(k);
      if (id < 0) throw ParseError(at.line, at.col, "'" + n + "' is not an element of " + t.name);
    }
    if (id < 0 || id >= m.size(t)) throw ParseError(at.line, at.col, "element out of range for " + t.name);
    return id;
  }

  void model() {
    FiniteModel m;
    m.family = doc_->sig.family;
    m.param = doc_->sig.param;
    m.value = doc_->sig.value;
    expect("{");
    while (!is("}")) {
      const Token at = peek();
      const std::string n = ident();
      auto alias = doc_->aliases.find(n);
      const Type as_type = alias != doc_->aliases.end() ? alias->second : Type{n};
      if (doc_->sig.has_type(as_type) && !as_type.is_empty() && !as_type.is_unit()) {
        expect("=");
        std::vector<std::string> names;
        if (is("{")) {
          next();
          while (!is("}")) {
            const Token e = next();
            if (e.kind != Token::Kind::Ident && e.kind != Token::Kind::Int)
              throw ParseError(e.line, e.col, "expected an element name");
            names.push_back(e.text);
            if (!is("}")) expect(",");
          }
          next();
        } else {
          const int k = integer();
          for (int i = 0; i < k; ++i) names.push_back(std::to_string(i));
        }
        m.elements[as_type.name] = std::move(names);
        expect(";");
        continue;
      }
      const OpDecl* op = doc_->sig.find_op(n);
      if (!op) throw ParseError(at.line, at.col, "'" + n + "' is neither a type nor an operation");
      if (m.tables.count(n)) throw ParseError(at.line, at.col, "'" + n + "' interpreted twice");
      const int nx = size_in(m, op->dom, at), ny = size_in(m, op->cod, at);
      std::vector<int> table;
      if (is("(")) {
        next();
        expect("x");
        expect(")");
        expect("=");
        const std::size_t start = pos_;
        for (int x = 0; x < nx; ++x) {
          pos_ = start;
          const Token et = peek();
          const long y = arith(x);
          if (y < 0 || y >= ny)
            throw ParseError(et.line, et.col,
                             n + "(" + std::to_string(x) + ") = " + std::to_string(y) + " is outside " + op->cod.name);
          table.push_back(static_cast<int>(y));
        }
        if (nx == 0) arith(0);
      } else {
        expect("=");
        if (is("[")) {
          next();
          while (!is("]")) {
            table.push_back(element(op->cod, m));
            if (!is("]")) expect(",");
          }
          next();
        } else {
          table.push_back(element(op->cod, m));
        }
        if (static_cast<int>(table.size()) != nx)
          throw ParseError(at.line, at.col, "table of '" + n + "' needs " + std::to_string(nx) + " entries");
      }
      m.tables[n] = std::move(table);
      expect(";");
    }
    expect("}");
    for (const auto& t : doc_->sig.types)
      if (!m.elements.count(t.name)) throw ParseError(peek().line, peek().col, "model gives no carrier for " + t.name);
    for (const auto& op : doc_->sig.ops)
      if (!m.tables.count(op.name))
        throw ParseError(peek().line, peek().col, "model gives no interpretation for '" + op.name + "'");
    doc_->model = std::move(m);
  }

  int size_in(const FiniteModel& m, const Type& t, const Token& at) const {
    if (t.is_unit()) return 1;
    if (t.is_empty()) return 0;
    auto it = m.elements.find(t.name);
    if (it == m.elements.end())
      throw ParseError(at.line, at.col, "carrier of " + t.name + " must be given before '" + at.text + "'");
    return static_cast<int>(it->second.size());
  }

  void named_term() {
    expect("term");
    const Token at = peek();
    const std::string n = ident();
    expect(":");
    Type a = type();
    expect("->");
    Type b = type();
    expect("=");
    Term t = expr();
    if (t.dom != a || t.cod != b)
      throw ParseError(at.line, at.col,
                       "term '" + n + "' is declared " + a.name + " -> " + b.name + " but is " + sig_type(t));
    expect(";");
    doc_->terms.push_back({n, std::move(t)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Document* doc_;
};

}  // namespace detail

/// Parses a whole document; unnamed checks are named after `stem`.
inline Document parse_document(const std::string& text, const std::string& stem = "check") {
  Document doc;
  detail::Parser p(tokenize(text), &doc);
  p.document(stem);
  for (const auto& c : doc.checks) validate(c.eq, doc.sig.family);
  return doc;
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (auto s = stem.find_last_of('/'); s != std::string::npos) stem = stem.substr(s + 1);
  if (auto d = stem.find('.'); d != std::string::npos) stem = stem.substr(0, d);
  return parse_document(ss.str(), stem);
}

/// A term or an equation over an existing signature (with optional aliases).
inline std::variant<Term, Equation> parse_expression(const std::string& text, const Signature& sig,
                                                     const std::map<std::string, Type>& aliases = {}) {
  Document doc;
  doc.sig = sig;
  doc.aliases = aliases;
  detail::Parser p(tokenize(text), &doc);
  auto r = p.term_or_equation();
  p.expect_end();
  return r;
}

inline Term parse_term(const std::string& text, const Signature& sig) {
  auto r = parse_expression(text, sig);
  if (auto* t = std::get_if<Term>(&r)) return *t;
  throw Error("expected a term, got an equation: " + text);
}

inline Equation parse_equation(const std::string& text, const Signature& sig) {
  auto r = parse_expression(text, sig);
  if (auto* e = std::get_if<Equation>(&r)) return *e;
  throw Error("expected an equation: " + text);
}

/// Small default signatures used when no file is given.
inline Signature builtin_signature(Family f) {
  Signature s;
  s.family = f;
  if (f == Family::States) {
    s.name = "state";
    s.types = {Type{"V"}};
    s.value = Type{"V"};
    s.ops = {{"f", Type{"V"}, Type{"V"}, kPure}, {"c", Type::unit(), Type{"V"}, kPure}};
  } else {
    s.name = f == Family::Exc ? "exc" : "excore";
    s.types = {Type{"P"}};
    s.param = Type{"P"};
    s.ops = {{"f", Type{"P"}, Type{"P"}, kPure}, {"c", Type::unit(), Type{"P"}, kPure}};
  }
  return s;
}

}  // namespace deco
