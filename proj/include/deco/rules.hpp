// Inference rules as data.
//
// A rule is a list of metavariables (typed by schematic or fixed object
// types, bounded by a maximal grade), premises and a conclusion built from
// chains of metavariables and family constants. The same data drives the
// soundness audit, the duality check and the seeding of the saturation
// engine in hpc.hpp.
#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "deco/enumerate.hpp"
#include "deco/model.hpp"

namespace deco::rules {

/// Object type in a rule: a type variable, or a fixed name. Fixed names
/// "P" and "V" stand for the signature's parameter and value types.
struct TypeRef {
  std::string name;
  bool var = false;
  bool operator==(const TypeRef&) const = default;
};

inline TypeRef tvar(std::string n) { return {std::move(n), true}; }
inline TypeRef fixed(std::string n) { return {std::move(n), false}; }

/// Largest grade a metavariable may be instantiated with.
enum class Bound { Pure, Propagator, Any };

inline Grade bound_grade(Bound b) { return b == Bound::Pure ? kPure : b == Bound::Propagator ? kPropagator : kCatcher; }

inline const char* bound_name(Family f, Bound b) {
  if (b == Bound::Any) return "any";
  return grade_name(f, bound_grade(b));
}

struct Meta {
  std::string name;
  TypeRef dom, cod;
  Bound bound = Bound::Any;
  bool operator==(const Meta&) const = default;
};

enum class PieceKind { Var, Id, Copa, Pa, Throw, Tag, Untag, Lookup, Update, TryCatch, TryCore, CatchCore };

struct Piece;

/// Pieces in running order, like Term::atoms. Never empty: identities are
/// written with an Id piece.
using Chain = std::vector<Piece>;

struct Piece {
  PieceKind kind = PieceKind::Var;
  std::string var;          // Var
  TypeRef type;             // Id, Copa, Pa, Throw
  std::vector<Chain> args;  // TryCatch(a, b), TryCore(a, k), CatchCore(b)
  bool operator==(const Piece&) const = default;
};

struct Formula {
  Chain lhs, rhs;
  Strength strength = Strength::Strong;
};

/// Core: a rule of the logic. Definition: a defining equation of a derived
/// construct (CATCH, TRY). Assumption: a hypothesis the completeness
/// argument relies on; not sound in every model, so never audited.
enum class RuleKind { Core, Definition, Assumption };

struct Rule {
  std::string name;
  RuleKind kind = RuleKind::Core;
  std::vector<Meta> metas;
  std::vector<Formula> premises;
  Formula conclusion;
  std::string side;  // side condition that the data cannot express
};

struct RuleSet {
  Family family = Family::Exc;
  bool pure_only = false;
  std::vector<Rule> rules;

  const Rule* find(const std::string& n) const {
    for (const auto& r : rules)
      if (r.name == n) return &r;
    return nullptr;
  }
  bool has(const std::string& n) const { return find(n) != nullptr; }

  RuleSet without(const std::string& n) const {
    RuleSet out = *this;
    std::erase_if(out.rules, [&](const Rule& r) { return r.name == n; });
    return out;
  }
};

// ---------------------------------------------------------------------------
// Notation used to write the rule tables. `o({g, f})` is g . f.

namespace notation {

inline Piece m(std::string v) { return Piece{PieceKind::Var, std::move(v), {}, {}}; }
inline Piece id(TypeRef t) { return Piece{PieceKind::Id, "", std::move(t), {}}; }
inline Piece copa(TypeRef t) { return Piece{PieceKind::Copa, "", std::move(t), {}}; }
inline Piece pa(TypeRef t) { return Piece{PieceKind::Pa, "", std::move(t), {}}; }
inline Piece throw_(TypeRef t) { return Piece{PieceKind::Throw, "", std::move(t), {}}; }
inline Piece tag() { return Piece{PieceKind::Tag, "", {}, {}}; }
inline Piece untag() { return Piece{PieceKind::Untag, "", {}, {}}; }
inline Piece lookup() { return Piece{PieceKind::Lookup, "", {}, {}}; }
inline Piece update() { return Piece{PieceKind::Update, "", {}, {}}; }
inline Chain o(std::initializer_list<Piece> printed) { return Chain(std::rbegin(printed), std::rend(printed)); }
inline Chain o(Piece p) { return Chain{std::move(p)}; }

inline Piece try_(Chain a, Chain b) { return Piece{PieceKind::TryCatch, "", {}, {std::move(a), std::move(b)}}; }
inline Piece TRY(Chain a, Chain k) { return Piece{PieceKind::TryCore, "", {}, {std::move(a), std::move(k)}}; }
inline Piece CATCH(Chain b) { return Piece{PieceKind::CatchCore, "", {}, {std::move(b)}}; }

inline Formula eqs(Chain l, Chain r) { return {std::move(l), std::move(r), Strength::Strong}; }
inline Formula eqw(Chain l, Chain r) { return {std::move(l), std::move(r), Strength::Weak}; }

inline Meta meta(std::string n, TypeRef d, TypeRef c, Bound b = Bound::Any) {
  return Meta{std::move(n), std::move(d), std::move(c), b};
}

}  // namespace notation

// ---------------------------------------------------------------------------
// Rule tables

namespace detail {

using namespace notation;

// refl, sym, trans, subs, repl for one strength; `suffix` is "", "==" or "~~"
inline void equational(std::vector<Rule>& out, Strength s, const std::string& suffix, Bound subs_h,
                       Bound repl_h, Bound all = Bound::Any) {
  auto eq = [s](Chain l, Chain r) { return Formula{std::move(l), std::move(r), s}; };
  const TypeRef X = tvar("X"), Y = tvar("Y"), Z = tvar("Z");
  out.push_back({"refl" + suffix, RuleKind::Core, {meta("f", X, Y, all)}, {}, eq(o(m("f")), o(m("f"))), ""});
  out.push_back({"sym" + suffix, RuleKind::Core, {meta("f", X, Y, all), meta("g", X, Y, all)},
                 {eq(o(m("f")), o(m("g")))}, eq(o(m("g")), o(m("f"))), ""});
  out.push_back({"trans" + suffix, RuleKind::Core,
                 {meta("f", X, Y, all), meta("g", X, Y, all), meta("h", X, Y, all)},
                 {eq(o(m("f")), o(m("g"))), eq(o(m("g")), o(m("h")))}, eq(o(m("f")), o(m("h"))), ""});
  out.push_back({"subs" + suffix, RuleKind::Core,
                 {meta("h", X, Y, subs_h), meta("f1", Y, Z, all), meta("f2", Y, Z, all)},
                 {eq(o(m("f1")), o(m("f2")))}, eq(o({m("f1"), m("h")}), o({m("f2"), m("h")})), ""});
  out.push_back({"repl" + suffix, RuleKind::Core,
                 {meta("f1", X, Y, all), meta("f2", X, Y, all), meta("h", Y, Z, repl_h)},
                 {eq(o(m("f1")), o(m("f2")))}, eq(o({m("h"), m("f1")}), o({m("h"), m("f2")})), ""});
}

inline Rule initial() {
  return {"initial", RuleKind::Core, {meta("u", fixed("Empty"), tvar("Y"), Bound::Pure)}, {},
          eqs(o(m("u")), o(copa(tvar("Y")))), ""};
}

inline Rule unit() {
  return {"unit", RuleKind::Core, {meta("u", tvar("X"), fixed("Unit"), Bound::Pure)}, {},
          eqs(o(m("u")), o(pa(tvar("X")))), ""};
}

}  // namespace detail

/// The pure sublogic: monadic equational logic with an empty type (exc,
/// excore) or with a unit type (states).
inline RuleSet pure_rules(Family f) {
  RuleSet rs{f, true, {}};
  detail::equational(rs.rules, Strength::Strong, "", Bound::Pure, Bound::Pure, Bound::Pure);
  rs.rules.push_back(f == Family::States ? detail::unit() : detail::initial());
  return rs;
}

inline RuleSet exc_rules() {
  using namespace notation;
  RuleSet rs{Family::Exc, false, {}};
  const TypeRef X = tvar("X"), Y = tvar("Y"), P = fixed("P"), E = fixed("Empty");
  const Bound pg = Bound::Propagator, pu = Bound::Pure;
  detail::equational(rs.rules, Strength::Strong, "", pg, pg, pg);
  rs.rules.push_back(detail::initial());
  rs.rules.push_back({"initial1", RuleKind::Core, {meta("a", E, Y, pg)}, {}, eqs(o(m("a")), o(copa(Y))), ""});
  rs.rules.push_back({"recover", RuleKind::Core, {meta("u1", X, P, pu), meta("u2", X, P, pu)},
                      {eqs(o({throw_(Y), m("u1")}), o({throw_(Y), m("u2")}))}, eqs(o(m("u1")), o(m("u2"))), ""});
  rs.rules.push_back({"propagate", RuleKind::Core, {meta("a", X, Y, pg)}, {},
                      eqs(o({m("a"), throw_(X)}), o(throw_(Y))), ""});
  rs.rules.push_back({"try", RuleKind::Core, {meta("a1", X, Y, pg), meta("a2", X, Y, pg), meta("b", P, Y, pg)},
                      {eqs(o(m("a1")), o(m("a2")))}, eqs(o(try_(o(m("a1")), o(m("b")))), o(try_(o(m("a2")), o(m("b"))))), ""});
  rs.rules.push_back({"try0", RuleKind::Core, {meta("u", X, Y, pu), meta("b", P, Y, pg)}, {},
                      eqs(o(try_(o(m("u")), o(m("b")))), o(m("u"))), ""});
  rs.rules.push_back({"try1", RuleKind::Core, {meta("u", X, P, pu), meta("b", P, Y, pg)}, {},
                      eqs(o(try_(o({throw_(Y), m("u")}), o(m("b")))), o({m("b"), m("u")})), ""});
  rs.rules.push_back({"clash", RuleKind::Assumption,
                      {meta("v1", X, P, pu), meta("v2", X, Y, pu), meta("w1", tvar("Z"), tvar("W"), pu),
                       meta("w2", tvar("Z"), tvar("W"), pu)},
                      {eqs(o({throw_(Y), m("v1")}), o(m("v2")))}, eqs(o(m("w1")), o(m("w2"))),
                      "X non-empty"});
  rs.rules.push_back({"clash-converse", RuleKind::Assumption, {meta("v1", X, P, pu), meta("v2", X, Y, pu)}, {},
                      eqs(o({throw_(Y), m("v1")}), o(m("v2"))), "X non-empty; every pure equation holds"});
  return rs;
}

inline RuleSet excore_rules() {
  using namespace notation;
  RuleSet rs{Family::Excore, false, {}};
  const TypeRef X = tvar("X"), Y = tvar("Y"), P = fixed("P"), E = fixed("Empty");
  const Bound pg = Bound::Propagator, pu = Bound::Pure, any = Bound::Any;
  detail::equational(rs.rules, Strength::Strong, "==", any, any);
  detail::equational(rs.rules, Strength::Weak, "~~", pu, any);
  rs.rules.push_back({"empty~~", RuleKind::Core, {meta("f", E, Y)}, {}, eqw(o(m("f")), o(copa(Y))), ""});
  rs.rules.push_back({"==to~~", RuleKind::Core, {meta("f", X, Y), meta("g", X, Y)}, {eqs(o(m("f")), o(m("g")))},
                      eqw(o(m("f")), o(m("g"))), ""});
  rs.rules.push_back({"ax", RuleKind::Core, {}, {}, eqw(o({untag(), tag()}), o(id(P))), ""});
  rs.rules.push_back({"eq1", RuleKind::Core, {meta("f1", X, Y, pg), meta("f2", X, Y, pg)},
                      {eqw(o(m("f1")), o(m("f2")))}, eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back({"eq2", RuleKind::Core, {meta("f1", X, Y), meta("f2", X, Y)},
                      {eqw(o(m("f1")), o(m("f2"))), eqs(o({m("f1"), copa(X)}), o({m("f2"), copa(X)}))},
                      eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back({"eq3", RuleKind::Core, {meta("f1", E, X), meta("f2", E, X)},
                      {eqw(o({m("f1"), tag()}), o({m("f2"), tag()}))}, eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back(detail::initial());
  rs.rules.push_back({"catch~~", RuleKind::Definition, {meta("b", P, Y, pg)}, {}, eqw(o(CATCH(o(m("b")))), o(id(Y))), ""});
  rs.rules.push_back({"catch==", RuleKind::Definition, {meta("b", P, Y, pg)}, {},
                      eqs(o({CATCH(o(m("b"))), copa(Y)}), o({m("b"), untag()})), ""});
  rs.rules.push_back({"try~~", RuleKind::Definition, {meta("a", X, Y, pg), meta("k", Y, Y)}, {},
                      eqw(o(TRY(o(m("a")), o(m("k")))), o({m("k"), m("a")})), ""});
  rs.rules.push_back({"copa-mono", RuleKind::Assumption, {meta("a1", X, E, pg), meta("a2", X, E, pg)},
                      {eqs(o({copa(Y), m("a1")}), o({copa(Y), m("a2")}))}, eqs(o(m("a1")), o(m("a2"))), ""});
  rs.rules.push_back({"clash", RuleKind::Assumption,
                      {meta("v1", X, P, pu), meta("v2", X, Y, pu), meta("w1", tvar("Z"), tvar("W"), pu),
                       meta("w2", tvar("Z"), tvar("W"), pu)},
                      {eqs(o({copa(Y), tag(), m("v1")}), o(m("v2")))}, eqs(o(m("w1")), o(m("w2"))),
                      "X non-empty"});
  rs.rules.push_back({"clash-converse", RuleKind::Assumption, {meta("v1", X, P, pu), meta("v2", X, Y, pu)}, {},
                      eqs(o({copa(Y), tag(), m("v1")}), o(m("v2"))), "X non-empty; every pure equation holds"});
  return rs;
}

inline RuleSet states_rules() {
  using namespace notation;
  RuleSet rs{Family::States, false, {}};
  const TypeRef X = tvar("X"), Y = tvar("Y"), V = fixed("V"), U = fixed("Unit");
  const Bound pg = Bound::Propagator, pu = Bound::Pure, any = Bound::Any;
  detail::equational(rs.rules, Strength::Strong, "==", any, any);
  detail::equational(rs.rules, Strength::Weak, "~~", any, pu);
  rs.rules.push_back({"unit~~", RuleKind::Core, {meta("f", X, U)}, {}, eqw(o(m("f")), o(pa(X))), ""});
  rs.rules.push_back({"==to~~", RuleKind::Core, {meta("f", X, Y), meta("g", X, Y)}, {eqs(o(m("f")), o(m("g")))},
                      eqw(o(m("f")), o(m("g"))), ""});
  rs.rules.push_back({"ax", RuleKind::Core, {}, {}, eqw(o({lookup(), update()}), o(id(V))), ""});
  rs.rules.push_back({"eq1", RuleKind::Core, {meta("f1", X, Y, pg), meta("f2", X, Y, pg)},
                      {eqw(o(m("f1")), o(m("f2")))}, eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back({"eq2", RuleKind::Core, {meta("f1", X, Y), meta("f2", X, Y)},
                      {eqw(o(m("f1")), o(m("f2"))), eqs(o({pa(Y), m("f1")}), o({pa(Y), m("f2")}))},
                      eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back({"eq3", RuleKind::Core, {meta("f1", X, U), meta("f2", X, U)},
                      {eqw(o({lookup(), m("f1")}), o({lookup(), m("f2")}))}, eqs(o(m("f1")), o(m("f2"))), ""});
  rs.rules.push_back(detail::unit());
  return rs;
}

inline RuleSet rules_for(Family f) {
  switch (f) {
    case Family::Exc: return exc_rules();
    case Family::Excore: return excore_rules();
    case Family::States: return states_rules();
  }
  throw Error("unknown family");
}

// ---------------------------------------------------------------------------
// Duality between the core exceptions logic and the states logic

inline std::string dual_name(const std::string& n) {
  static const std::map<std::string, std::string> swap{
      {"subs==", "repl=="}, {"repl==", "subs=="}, {"subs~~", "repl~~"}, {"repl~~", "subs~~"},
      {"subs", "repl"},     {"repl", "subs"},     {"empty~~", "unit~~"}, {"unit~~", "empty~~"},
      {"initial", "unit"},  {"unit", "initial"}};
  auto it = swap.find(n);
  return it == swap.end() ? n : it->second;
}

inline TypeRef dual(const TypeRef& t) {
  if (t.var) return t;
  static const std::map<std::string, std::string> swap{{"Empty", "Unit"}, {"Unit", "Empty"}, {"P", "V"}, {"V", "P"}};
  auto it = swap.find(t.name);
  return it == swap.end() ? t : fixed(it->second);
}

inline Piece dual(const Piece& p) {
  Piece q = p;
  q.type = dual(p.type);
  switch (p.kind) {
    case PieceKind::Var:
    case PieceKind::Id: break;
    case PieceKind::Copa: q.kind = PieceKind::Pa; break;
    case PieceKind::Pa: q.kind = PieceKind::Copa; break;
    case PieceKind::Tag: q.kind = PieceKind::Lookup; break;
    case PieceKind::Lookup: q.kind = PieceKind::Tag; break;
    case PieceKind::Untag: q.kind = PieceKind::Update; break;
    case PieceKind::Update: q.kind = PieceKind::Untag; break;
    default: throw Error("piece has no dual");
  }
  return q;
}

inline Chain dual(const Chain& c) {
  Chain out;
  for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(dual(*it));
  return out;
}

inline Formula dual(const Formula& f) { return {dual(f.lhs), dual(f.rhs), f.strength}; }

inline Rule dual(const Rule& r) {
  Rule d{dual_name(r.name), r.kind, {}, {}, dual(r.conclusion), r.side};
  for (const auto& mv : r.metas) d.metas.push_back({mv.name, dual(mv.cod), dual(mv.dom), mv.bound});
  for (const auto& p : r.premises) d.premises.push_back(dual(p));
  return d;
}

/// Arrows reversed, tag/untag/copa/Empty/P traded for lookup/update/pa/Unit/V.
/// Only core rules are carried over.
inline RuleSet dual(const RuleSet& rs) {
  RuleSet out{rs.family == Family::Excore ? Family::States : Family::Excore, rs.pure_only, {}};
  for (const auto& r : rs.rules)
    if (r.kind == RuleKind::Core) out.rules.push_back(dual(r));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string print(const Chain& c);

inline std::string print(const Piece& p) {
  auto ty = [](const TypeRef& t) { return t.name; };
  switch (p.kind) {
    case PieceKind::Var: return p.var;
    case PieceKind::Id: return "id[" + ty(p.type) + "]";
    case PieceKind::Copa: return "copa[" + ty(p.type) + "]";
    case PieceKind::Pa: return "pa[" + ty(p.type) + "]";
    case PieceKind::Throw: return "throw[" + ty(p.type) + "]";
    case PieceKind::Tag: return "tag";
    case PieceKind::Untag: return "untag";
    case PieceKind::Lookup: return "lookup";
    case PieceKind::Update: return "update";
    case PieceKind::TryCatch: return "try (" + print(p.args[0]) + ") catch (" + print(p.args[1]) + ")";
    case PieceKind::TryCore: return "TRY(" + print(p.args[0]) + ", " + print(p.args[1]) + ")";
    case PieceKind::CatchCore: return "CATCH(" + print(p.args[0]) + ")";
  }
  return "?";
}

inline std::string print(const Chain& c) {
  std::string s;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s += (s.empty() ? "" : " . ") + print(*it);
  return s;
}

inline std::string print(const Formula& f) {
  return print(f.lhs) + (f.strength == Strength::Strong ? " == " : " ~~ ") + print(f.rhs);
}

inline std::string print(const Rule& r, Family fam) {
  std::ostringstream out;
  out << "(" << r.name << ")";
  for (const auto& mv : r.metas)
    out << " " << mv.name << ":" << mv.dom.name << "->" << mv.cod.name << ":" << bound_name(fam, mv.bound);
  out << " |";
  for (const auto& p : r.premises) out << " " << print(p) << ";";
  out << " => " << print(r.conclusion);
  if (!r.side.empty()) out << " [" << r.side << "]";
  return out.str();
}

/// Printed form with metavariables sorted by name and type variables renamed
/// by first occurrence, so alpha-equivalent rules compare equal.
inline std::string shape(const Rule& r, Family fam) {
  Rule c = r;
  std::sort(c.metas.begin(), c.metas.end(), [](const Meta& a, const Meta& b) { return a.name < b.name; });
  std::map<std::string, std::string> ren;
  auto rn = [&](TypeRef& t) {
    if (!t.var) return;
    auto it = ren.find(t.name);
    if (it == ren.end()) it = ren.emplace(t.name, "T" + std::to_string(ren.size())).first;
    t.name = it->second;
  };
  for (auto& mv : c.metas) {
    rn(mv.dom);
    rn(mv.cod);
  }
  std::function<void(Chain&)> chain = [&](Chain& ch) {
    for (auto& p : ch) {
      rn(p.type);
      for (auto& a : p.args) chain(a);
    }
  };
  for (auto& p : c.premises) {
    chain(p.lhs);
    chain(p.rhs);
  }
  chain(c.conclusion.lhs);
  chain(c.conclusion.rhs);
  return print(c, fam);
}

// ---------------------------------------------------------------------------
// Instantiation

struct Binding {
  std::map<std::string, Type> types;
  std::map<std::string, Term> terms;
};

struct Instance {
  std::vector<Equation> premises;
  Equation conclusion;
};

inline Type resolve(const TypeRef& t, const Binding& b, const Signature& sig) {
  if (t.var) return b.types.at(t.name);
  if (t.name == "P") return sig.P();
  if (t.name == "V") return sig.V();
  return Type{t.name};
}

inline std::optional<Term> build(const Chain& c, const Binding& b, const Signature& sig);

namespace detail {

inline Term piece_term(const Piece& p, const Binding& b, const Signature& sig) {
  auto arg = [&](std::size_t i) {
    auto t = build(p.args.at(i), b, sig);
    if (!t) throw TypeError("ill-typed argument");
    return *t;
  };
  switch (p.kind) {
    case PieceKind::Var: return b.terms.at(p.var);
    case PieceKind::Id: return identity(resolve(p.type, b, sig));
    case PieceKind::Copa: {
      const Type y = resolve(p.type, b, sig);
      return y.is_empty() ? identity(y) : single(atoms::copa(y));  // copa[Empty] is id[Empty]
    }
    case PieceKind::Pa: {
      const Type x = resolve(p.type, b, sig);
      return x.is_unit() ? identity(x) : single(atoms::pa(x));  // pa[Unit] is id[Unit]
    }
    case PieceKind::Throw: return single(atoms::throw_to(sig.P(), resolve(p.type, b, sig)));
    case PieceKind::Tag: return single(atoms::tag(sig.P()));
    case PieceKind::Untag: return single(atoms::untag(sig.P()));
    case PieceKind::Lookup: return single(atoms::lookup(sig.V()));
    case PieceKind::Update: return single(atoms::update(sig.V()));
    case PieceKind::TryCatch: return single(atoms::try_catch(sig.P(), arg(0), arg(1)));
    case PieceKind::TryCore: return single(atoms::try_core(arg(0), arg(1)));
    case PieceKind::CatchCore: return single(atoms::catch_core(sig.P(), arg(0)));
  }
  throw Error("bad piece");
}

// atoms contributed by a piece, once its metavariables are bound
inline bool bound_to(const Binding& b, const TypeRef& t, bool (Type::*pred)() const) {
  if (!t.var) return (Type{t.name}.*pred)();
  auto it = b.types.find(t.name);
  return it != b.types.end() && (it->second.*pred)();
}

inline int piece_size(const Piece& p, const Binding& b) {
  int n = 1;
  switch (p.kind) {
    case PieceKind::Var: return term_size(b.terms.at(p.var));
    case PieceKind::Id: return 0;
    case PieceKind::Copa: return bound_to(b, p.type, &Type::is_empty) ? 0 : 1;
    case PieceKind::Pa: return bound_to(b, p.type, &Type::is_unit) ? 0 : 1;
    default:
      for (const auto& a : p.args)
        for (const auto& q : a) n += piece_size(q, b);
      return n;
  }
}

inline void piece_vars(const Piece& p, std::set<std::string>& out) {
  if (p.kind == PieceKind::Var) out.insert(p.var);
  for (const auto& a : p.args)
    for (const auto& q : a) piece_vars(q, out);
}

inline void type_vars(const TypeRef& t, std::vector<std::string>& out) {
  if (t.var && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
}

}  // namespace detail

/// Builds a chain under a binding; nullopt when the pieces do not compose.
inline std::optional<Term> build(const Chain& c, const Binding& b, const Signature& sig) {
  try {
    std::optional<Term> t;
    for (const auto& p : c) {
      Term x = detail::piece_term(p, b, sig);
      t = t ? compose(x, *t) : x;
    }
    return t;
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

/// Candidate terms for a metavariable of type x -> y (before the bound is
/// applied).
/// Terms X -> Y in non-decreasing order of size.
using TermSupply = std::function<const std::vector<Term>&(const Type& x, const Type& y)>;

/// Calls `f` on every instance whose premise and conclusion terms all have
/// at most `max_size` atoms. Type variables range over sig.all_types().
inline void for_each_instance(const Rule& r, const Signature& sig, const TermSupply& supply, int max_size,
                              const std::function<void(const Instance&)>& f) {
  std::vector<std::string> tvars;
  for (const auto& mv : r.metas) {
    detail::type_vars(mv.dom, tvars);
    detail::type_vars(mv.cod, tvars);
  }
  std::vector<const Chain*> chains;
  for (const auto& p : r.premises) {
    chains.push_back(&p.lhs);
    chains.push_back(&p.rhs);
  }
  chains.push_back(&r.conclusion.lhs);
  chains.push_back(&r.conclusion.rhs);
  std::function<void(const Chain&)> chain_tvars = [&](const Chain& c) {
    for (const auto& p : c) {
      detail::type_vars(p.type, tvars);
      for (const auto& a : p.args) chain_tvars(a);
    }
  };
  for (const Chain* c : chains) chain_tvars(*c);

  // a chain is size-checked as soon as its last metavariable is bound
  std::vector<std::vector<const Chain*>> check_at(r.metas.size() + 1);
  for (const Chain* c : chains) {
    std::set<std::string> vs;
    for (const auto& p : *c) detail::piece_vars(p, vs);
    std::size_t last = 0;
    for (std::size_t i = 0; i < r.metas.size(); ++i)
      if (vs.count(r.metas[i].name)) last = i + 1;
    check_at[last].push_back(c);
  }

  const std::vector<Type> types = sig.all_types();
  Binding b;
  auto fits = [&](std::size_t level) {
    for (const Chain* c : check_at[level]) {
      int n = 0;
      for (const auto& p : *c) n += detail::piece_size(p, b);
      if (n > max_size) return false;
    }
    return true;
  };
  auto emit = [&] {
    Instance in;
    for (const auto& p : r.premises) {
      auto l = build(p.lhs, b, sig), rr = build(p.rhs, b, sig);
      if (!l || !rr) return;
      in.premises.push_back({*l, *rr, p.strength});
    }
    auto l = build(r.conclusion.lhs, b, sig), rr = build(r.conclusion.rhs, b, sig);
    if (!l || !rr) return;
    in.conclusion = {*l, *rr, r.conclusion.strength};
    f(in);
  };
  std::function<void(std::size_t)> metas = [&](std::size_t i) {
    if (i == r.metas.size()) return emit();
    const Meta& mv = r.metas[i];
    const Type x = resolve(mv.dom, b, sig), y = resolve(mv.cod, b, sig);
    for (const Term& t : supply(x, y)) {
      if (term_size(t) > max_size) break;
      if (decoration_of(t) > bound_grade(mv.bound)) continue;
      b.terms[mv.name] = t;
      if (!fits(i + 1)) break;  // later terms are no smaller
      metas(i + 1);
    }
    b.terms.erase(mv.name);
  };
  std::function<void(std::size_t)> tys = [&](std::size_t i) {
    if (i == tvars.size()) {
      if (fits(0)) metas(0);
      return;
    }
    for (const Type& t : types) {
      b.types[tvars[i]] = t;
      tys(i + 1);
    }
    b.types.erase(tvars[i]);
  };
  try {
    tys(0);
  } catch (const TypeError&) {
    // a fixed type the signature lacks (P or V): the rule has no instances
  }
}

// ---------------------------------------------------------------------------
// Soundness audit

struct AuditReport {
  std::size_t models = 0, instances = 0, violations = 0;
  std::map<std::string, std::size_t> per_rule;  // instances checked
  std::vector<std::string> skipped;              // assumption rules
  std::vector<std::string> samples;              // first violations

  bool ok() const { return violations == 0; }
};

/// Checks every instance of every non-assumption rule (all terms of at most
/// `depth` atoms) in every model: if the premises hold, so must the
/// conclusion.
inline AuditReport audit(const RuleSet& rs, const Signature& sig, int depth, const ModelBounds& bounds) {
  AuditReport rep;
  const std::vector<FiniteModel> models = enumerate_models(sig, bounds);
  rep.models = models.size();

  EnumConfig cfg;
  cfg.max_size = depth;
  TermEnumerator en(sig, cfg);
  const auto mode = sig.family == Family::Excore ? TermEnumerator::Mode::Handler : TermEnumerator::Mode::General;
  std::map<std::pair<std::string, std::string>, std::vector<Term>> supply_cache;
  TermSupply supply = [&](const Type& x, const Type& y) -> const std::vector<Term>& {
    auto key = std::pair{x.name, y.name};
    auto it = supply_cache.find(key);
    if (it == supply_cache.end()) {
      std::vector<Term> ts = en.up_to(depth, x, y, mode);
      if (rs.pure_only) std::erase_if(ts, [](const Term& t) { return !is_pure(t); });
      it = supply_cache.emplace(key, std::move(ts)).first;
    }
    return it->second;
  };

  // denotations per distinct term; verdicts per model as bitsets
  using Bits = std::vector<std::uint64_t>;
  const std::size_t words = (models.size() + 63) / 64;
  std::unordered_map<std::string, int> ids;
  std::vector<std::vector<Denotation>> dens;
  auto term_id = [&](const Term& t) {
    const std::string k = print(t);
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    std::vector<Denotation> ds;
    ds.reserve(models.size());
    for (const auto& m : models) ds.push_back(eval(t, m));
    dens.push_back(std::move(ds));
    return ids.emplace(k, static_cast<int>(dens.size()) - 1).first->second;
  };
  std::unordered_map<std::uint64_t, Bits> verdicts;
  auto holds_ids = [&](std::uint64_t a, std::uint64_t b, Strength s) -> const Bits& {
    const std::uint64_t key = (a << 33) | (b << 1) | (s == Strength::Weak ? 1 : 0);
    auto it = verdicts.find(key);
    if (it != verdicts.end()) return it->second;
    Bits v(words, 0);
    for (std::size_t i = 0; i < models.size(); ++i)
      if (denotations_agree(dens[a][i], dens[b][i], s)) v[i / 64] |= std::uint64_t{1} << (i % 64);
    return verdicts.emplace(key, std::move(v)).first->second;
  };
  auto holds = [&](const Equation& e) -> const Bits& {
    const std::uint64_t a = term_id(e.lhs), b = term_id(e.rhs);
    return holds_ids(a, b, e.strength);
  };
  auto judge = [&](const Rule& r, const std::vector<const Bits*>& ps, const Bits& c, auto&& describe) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t pre = ~std::uint64_t{0};
      for (const auto* p : ps) pre &= (*p)[w];
      std::uint64_t bad = pre & ~c[w];
      if (w + 1 == words && models.size() % 64) bad &= (std::uint64_t{1} << (models.size() % 64)) - 1;
      if (!bad) continue;
      ++rep.violations;
      if (rep.samples.size() < 10)
        rep.samples.push_back("(" + r.name + ") " + describe() + " fails in model #" +
                              std::to_string(w * 64 + static_cast<std::size_t>(std::countr_zero(bad))));
      return;
    }
  };

  // rules stated on bare metavariables of one common type X -> Y (refl,
  // sym, trans, ==to~~, eq1) are checked on term ids directly
  auto bare = [](const Rule& r) {
    if (r.metas.empty()) return false;
    for (const auto& mv : r.metas)
      if (!mv.dom.var || !mv.cod.var || mv.dom != r.metas[0].dom || mv.cod != r.metas[0].cod) return false;
    auto var = [](const Chain& c) { return c.size() == 1 && c[0].kind == PieceKind::Var; };
    for (const auto& f : r.premises)
      if (!var(f.lhs) || !var(f.rhs)) return false;
    return var(r.conclusion.lhs) && var(r.conclusion.rhs) && r.metas[0].dom != r.metas[0].cod;
  };

  for (const Rule& r : rs.rules) {
    if (r.kind == RuleKind::Assumption) {
      rep.skipped.push_back(r.name);
      continue;
    }
    std::size_t& count = rep.per_rule[r.name];
    if (bare(r)) {
      std::map<std::string, std::size_t> slot;
      for (std::size_t i = 0; i < r.metas.size(); ++i) slot[r.metas[i].name] = i;
      const auto types = sig.all_types();
      std::vector<int> pick(r.metas.size());
      for (const Type& x : types)
        for (const Type& y : types) {
          std::vector<std::vector<int>> cand(r.metas.size());
          for (std::size_t i = 0; i < r.metas.size(); ++i)
            for (const Term& t : supply(x, y))
              if (term_size(t) <= depth && decoration_of(t) <= bound_grade(r.metas[i].bound))
                cand[i].push_back(term_id(t));
          std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == r.metas.size()) {
              ++count;
              ++rep.instances;
              auto at = [&](const Chain& c) { return static_cast<std::uint64_t>(pick[slot.at(c[0].var)]); };
              std::vector<const Bits*> ps;
              for (const auto& f : r.premises) ps.push_back(&holds_ids(at(f.lhs), at(f.rhs), f.strength));
              const Bits& c = holds_ids(at(r.conclusion.lhs), at(r.conclusion.rhs), r.conclusion.strength);
              judge(r, ps, c, [&] { return x.name + " -> " + y.name + " instance"; });
              return;
            }
            for (int t : cand[i]) {
              pick[i] = t;
              go(i + 1);
            }
          };
          go(0);
        }
      continue;
    }
    for_each_instance(r, sig, supply, depth, [&](const Instance& in) {
      ++count;
      ++rep.instances;
      std::vector<const Bits*> ps;
      for (const auto& p : in.premises) ps.push_back(&holds(p));
      judge(r, ps, holds(in.conclusion), [&] {
        std::string s;
        for (const auto& p : in.premises) s += deco::print(p) + "; ";
        return s + "=> " + deco::print(in.conclusion);
      });
    });
  }
  return rep;
}

}  // namespace deco::rules
