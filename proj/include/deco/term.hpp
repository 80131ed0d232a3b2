// Decorated terms shared by the exception, core-exception and state logics.
//
// A term is a flattened composition chain. Atoms are stored in application
// order: atoms[0] runs first. The textual form `g . f` therefore maps to
// atoms {f, g}.
#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deco {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// Object type. `Empty` and `Unit` are reserved names; everything else is a
/// declared base type.
struct Type {
  std::string name;

  static Type empty() { return {"Empty"}; }
  static Type unit() { return {"Unit"}; }

  bool is_empty() const { return name == "Empty"; }
  bool is_unit() const { return name == "Unit"; }
  auto operator<=>(const Type&) const = default;
};

enum class Family { Exc, Excore, States };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Exc: return "exc";
    case Family::Excore: return "excore";
    case Family::States: return "states";
  }
  return "?";
}

inline std::optional<Family> family_from_name(const std::string& s) {
  if (s == "exc") return Family::Exc;
  if (s == "excore") return Family::Excore;
  if (s == "states") return Family::States;
  return std::nullopt;
}

/// Effect grade: 0 pure, 1 propagator/accessor, 2 catcher/modifier.
using Grade = int;
inline constexpr Grade kPure = 0;
inline constexpr Grade kPropagator = 1;
inline constexpr Grade kCatcher = 2;

inline const char* grade_name(Family f, Grade g) {
  if (g == kPure) return "pure";
  if (f == Family::States) return g == 1 ? "accessor" : "modifier";
  return g == 1 ? "propagator" : "catcher";
}

struct OpDecl {
  std::string name;
  Type dom, cod;
  Grade grade = kPure;
};

struct Signature {
  std::string name;
  Family family = Family::Exc;
  std::vector<Type> types;  // declared base types
  std::optional<Type> param;
  std::optional<Type> value;
  std::vector<OpDecl> ops;

  const OpDecl* find_op(const std::string& n) const {
    for (const auto& op : ops)
      if (op.name == n) return &op;
    return nullptr;
  }

  bool has_type(const Type& t) const {
    if (t.is_empty() || t.is_unit()) return true;
    return std::find(types.begin(), types.end(), t) != types.end();
  }

  /// All object types, reserved ones first.
  std::vector<Type> all_types() const {
    std::vector<Type> out{Type::empty(), Type::unit()};
    out.insert(out.end(), types.begin(), types.end());
    return out;
  }

  const Type& P() const {
    if (!param) throw TypeError("signature '" + name + "' declares no parameter type P");
    return *param;
  }
  const Type& V() const {
    if (!value) throw TypeError("signature '" + name + "' declares no value type V");
    return *value;
  }
};

enum class AtomKind { Gen, Copa, Pa, Throw, TryCatch, Tag, Untag, TryCore, CatchCore, Lookup, Update };

struct Term;

struct Atom {
  AtomKind kind = AtomKind::Gen;
  std::string name;         // generator name
  Type dom, cod;
  Grade grade = kPure;
  std::vector<Term> subs;   // TryCatch(a,b), TryCore(a,k), CatchCore(b)

  bool operator==(const Atom& o) const;
};

struct Term {
  Type dom, cod;
  std::vector<Atom> atoms;

  bool is_identity() const { return atoms.empty(); }
  bool operator==(const Term&) const = default;
};

inline bool Atom::operator==(const Atom& o) const {
  return kind == o.kind && name == o.name && dom == o.dom && cod == o.cod && grade == o.grade &&
         subs == o.subs;
}

enum class Strength { Strong, Weak };

struct Equation {
  Term lhs, rhs;
  Strength strength = Strength::Strong;
  bool operator==(const Equation&) const = default;
};

// ---------------------------------------------------------------------------
// Construction

inline Term identity(const Type& t) { return Term{t, t, {}}; }

inline Term single(Atom a) {
  Term t{a.dom, a.cod, {}};
  t.atoms.push_back(std::move(a));
  return t;
}

inline std::string print(const Term& t);
inline std::string print(const Atom& a);

/// g ∘ f: f runs first.
inline Term compose(const Term& g, const Term& f) {
  if (f.cod != g.dom)
    throw TypeError("cannot compose '" + print(g) + "' : " + g.dom.name + " -> " + g.cod.name +
                    " after '" + print(f) + "' : " + f.dom.name + " -> " + f.cod.name);
  Term out{f.dom, g.cod, f.atoms};
  out.atoms.insert(out.atoms.end(), g.atoms.begin(), g.atoms.end());
  return out;
}

template <typename... Rest>
Term compose(const Term& a, const Term& b, const Term& c, const Rest&... rest) {
  return compose(a, compose(b, c, rest...));
}

inline Term compose(const Atom& g, const Term& f) { return compose(single(g), f); }

namespace atoms {

inline Atom gen(const OpDecl& op) {
  return Atom{AtomKind::Gen, op.name, op.dom, op.cod, op.grade, {}};
}
inline Atom gen(const Signature& sig, const std::string& name) {
  const OpDecl* op = sig.find_op(name);
  if (!op) throw TypeError("unknown generator '" + name + "'");
  return gen(*op);
}
inline Atom copa(const Type& y) { return Atom{AtomKind::Copa, "", Type::empty(), y, kPure, {}}; }
inline Atom pa(const Type& x) { return Atom{AtomKind::Pa, "", x, Type::unit(), kPure, {}}; }
inline Atom throw_to(const Type& p, const Type& y) {
  return Atom{AtomKind::Throw, "", p, y, kPropagator, {}};
}
inline Atom tag(const Type& p) { return Atom{AtomKind::Tag, "", p, Type::empty(), kPropagator, {}}; }
inline Atom untag(const Type& p) { return Atom{AtomKind::Untag, "", Type::empty(), p, kCatcher, {}}; }
inline Atom lookup(const Type& v) { return Atom{AtomKind::Lookup, "", Type::unit(), v, kPropagator, {}}; }
inline Atom update(const Type& v) { return Atom{AtomKind::Update, "", v, Type::unit(), kCatcher, {}}; }

inline Grade grade_of(const Term& t);

/// try (a) catch (b) with a : X -> Y, b : P -> Y.
inline Atom try_catch(const Type& p, Term a, Term b) {
  if (b.dom != p) throw TypeError("catch handler must have domain " + p.name + ", got " + b.dom.name);
  if (a.cod != b.cod)
    throw TypeError("try body returns " + a.cod.name + " but handler returns " + b.cod.name);
  if (grade_of(a) > kPropagator || grade_of(b) > kPropagator)
    throw TypeError("try/catch operands must be propagators");
  Atom at{AtomKind::TryCatch, "", a.dom, a.cod, kPropagator, {}};
  at.subs.push_back(std::move(a));
  at.subs.push_back(std::move(b));
  return at;
}

/// TRY(a, k) with a : X -> Y a propagator, k : Y -> Y.
inline Atom try_core(Term a, Term k) {
  if (k.dom != a.cod || k.cod != a.cod)
    throw TypeError("TRY handler must be " + a.cod.name + " -> " + a.cod.name);
  if (grade_of(a) > kPropagator) throw TypeError("TRY body must be a propagator");
  Atom at{AtomKind::TryCore, "", a.dom, a.cod, kPropagator, {}};
  at.subs.push_back(std::move(a));
  at.subs.push_back(std::move(k));
  return at;
}

/// CATCH(b) : Y -> Y with b : P -> Y a propagator.
inline Atom catch_core(const Type& p, Term b) {
  if (b.dom != p) throw TypeError("CATCH handler must have domain " + p.name + ", got " + b.dom.name);
  if (grade_of(b) > kPropagator) throw TypeError("CATCH handler must be a propagator");
  Atom at{AtomKind::CatchCore, "", b.cod, b.cod, kCatcher, {}};
  at.subs.push_back(std::move(b));
  return at;
}

}  // namespace atoms

inline Grade atoms::grade_of(const Term& t) {
  Grade g = kPure;
  for (const auto& a : t.atoms) g = std::max(g, a.grade);
  return g;
}

/// Max of the atom grades; identity is pure.
inline Grade decoration_of(const Term& t) { return atoms::grade_of(t); }

inline bool is_pure(const Term& t) { return decoration_of(t) == kPure; }

/// Number of atoms, counting atoms nested inside handlers.
inline int term_size(const Term& t) {
  int n = 0;
  for (const auto& a : t.atoms) {
    n += 1;
    for (const auto& s : a.subs) n += term_size(s);
  }
  return n;
}

inline bool atom_legal(AtomKind k, Family f) {
  switch (k) {
    case AtomKind::Gen: return true;
    case AtomKind::Copa: return f != Family::States;
    case AtomKind::Throw:
    case AtomKind::TryCatch: return f == Family::Exc;
    case AtomKind::Tag:
    case AtomKind::Untag:
    case AtomKind::TryCore:
    case AtomKind::CatchCore: return f == Family::Excore;
    case AtomKind::Pa:
    case AtomKind::Lookup:
    case AtomKind::Update: return f == Family::States;
  }
  return false;
}

/// Checks adjacency and atom legality, recursing into handlers.
inline void validate(const Term& t, Family f) {
  Type at = t.dom;
  for (const auto& a : t.atoms) {
    if (!atom_legal(a.kind, f))
      throw TypeError("atom '" + print(a) + "' is not part of the " + family_name(f) + " logic");
    if (a.dom != at)
      throw TypeError("atom '" + print(a) + "' expects " + a.dom.name + " but receives " + at.name);
    for (const auto& s : a.subs) validate(s, f);
    at = a.cod;
  }
  if (at != t.cod) throw TypeError("term ends at " + at.name + " but is declared to return " + t.cod.name);
}

inline void validate(const Equation& e, Family f) {
  validate(e.lhs, f);
  validate(e.rhs, f);
  if (e.lhs.dom != e.rhs.dom || e.lhs.cod != e.rhs.cod)
    throw TypeError("equation sides are not parallel: " + e.lhs.dom.name + " -> " + e.lhs.cod.name +
                    " vs " + e.rhs.dom.name + " -> " + e.rhs.cod.name);
  if (e.strength == Strength::Weak && f == Family::Exc)
    throw TypeError("weak equations are not part of the exc logic");
}

// ---------------------------------------------------------------------------
// Printing

inline std::string print(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Gen: return a.name;
    case AtomKind::Copa: return "copa[" + a.cod.name + "]";
    case AtomKind::Pa: return "pa[" + a.dom.name + "]";
    case AtomKind::Throw: return "throw[" + a.cod.name + "]";
    case AtomKind::Tag: return "tag";
    case AtomKind::Untag: return "untag";
    case AtomKind::Lookup: return "lookup";
    case AtomKind::Update: return "update";
    case AtomKind::TryCatch: return "try (" + print(a.subs[0]) + ") catch (" + print(a.subs[1]) + ")";
    case AtomKind::TryCore: return "TRY(" + print(a.subs[0]) + ", " + print(a.subs[1]) + ")";
    case AtomKind::CatchCore: return "CATCH(" + print(a.subs[0]) + ")";
  }
  return "?";
}

inline std::string print(const Term& t) {
  if (t.atoms.empty()) return "id[" + t.dom.name + "]";
  std::string out;
  for (auto it = t.atoms.rbegin(); it != t.atoms.rend(); ++it) {
    if (!out.empty()) out += " . ";
    out += print(*it);
  }
  return out;
}

inline std::string print(const Equation& e) {
  return print(e.lhs) + (e.strength == Strength::Strong ? " == " : " ~~ ") + print(e.rhs);
}

}  // namespace deco
