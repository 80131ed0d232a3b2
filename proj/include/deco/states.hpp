// A single mutable location of type V: lookup / update, weak and strong
// equations over the state.
#pragma once

#include <map>

#include "deco/reduction.hpp"

namespace deco::states {

/// Pure part of an accessor canonical form: either a pure term or
/// v ∘ lookup ∘ pa_X.
struct AccessorPart {
  bool pure = true;
  Term t;  // pure: the term itself; otherwise v : V -> Y
};

/// Canonical shapes:
///   Pure      u
///   Accessor  v ∘ lookup ∘ pa_X           (pa_X omitted when X = Unit)
///   Modifier  u ∘ lookup ∘ update ∘ a     (a : X -> V canonical accessor)
struct Canonical {
  enum class Kind { Pure, Accessor, Modifier };
  Kind kind = Kind::Pure;
  Term u;          // Pure: term; Accessor: v; Modifier: u
  AccessorPart a;  // Modifier only
  Type dom, cod;

  Term reify(const Type& v) const;
  std::string describe(const Type& v) const;
};

/// lookup ∘ pa_X, or lookup alone on Unit.
inline Term read(const Type& x, const Type& v) {
  Term t = single(atoms::lookup(v));
  return x.is_unit() ? t : compose(t, single(atoms::pa(x)));
}

inline Term reify_accessor(const AccessorPart& a, const Type& x, const Type& v) {
  return a.pure ? a.t : compose(a.t, read(x, v));
}

inline Term Canonical::reify(const Type& v) const {
  switch (kind) {
    case Kind::Pure: return u;
    case Kind::Accessor: return compose(u, read(dom, v));
    case Kind::Modifier:
      return compose(u, single(atoms::lookup(v)), single(atoms::update(v)), reify_accessor(a, dom, v));
  }
  return u;
}

inline std::string Canonical::describe(const Type& v) const {
  switch (kind) {
    case Kind::Pure: return "pure " + print(u);
    case Kind::Accessor: return "accessor v=" + print(u) + " : " + print(reify(v));
    case Kind::Modifier:
      return "modifier u=" + print(u) + " a=" + print(reify_accessor(a, dom, v)) + " : " + print(reify(v));
  }
  return "";
}

/// Every pure prefix ending in Unit equals pa_X; keep only the last one.
inline Term unit_simplify(const Term& t) {
  std::size_t cut = 0;
  bool hit = false;
  for (std::size_t i = 0; i < t.atoms.size(); ++i)
    if (t.atoms[i].cod.is_unit()) {
      cut = i + 1;
      hit = true;
    }
  if (!hit) return t;
  Term out = t.dom.is_unit() ? identity(t.dom) : single(atoms::pa(t.dom));
  for (std::size_t i = cut; i < t.atoms.size(); ++i) out = compose(single(t.atoms[i]), out);
  return out;
}

namespace detail {

struct Normalizer {
  Type v;
  Trace* tr = nullptr;

  Canonical pure(const Term& u) const {
    Term s = unit_simplify(u);
    return {Canonical::Kind::Pure, s, {}, s.dom, s.cod};
  }
  Canonical accessor(const Type& x, const Term& w) const {
    Term s = unit_simplify(w);
    return {Canonical::Kind::Accessor, s, {}, x, s.cod};
  }
  Canonical modifier(const Term& u, AccessorPart a, const Type& x) const {
    Term s = unit_simplify(u);
    a.t = unit_simplify(a.t);
    return {Canonical::Kind::Modifier, s, std::move(a), x, s.cod};
  }

  static AccessorPart as_part(const Canonical& c) {
    return {c.kind == Canonical::Kind::Pure, c.u};
  }

  Canonical step(const Canonical& c, const Atom& op) const {
    switch (op.kind) {
      case AtomKind::Gen:
        if (op.grade != kPure) throw NormalizeError("effectful generator " + op.name);
        [[fallthrough]];
      case AtomKind::Pa: {
        Canonical out = c;
        out.u = unit_simplify(compose(single(op), c.u));
        out.cod = op.cod;
        return out;
      }
      case AtomKind::Lookup:
        // what precedes is X -> Unit: pa_X for pure/accessor, and
        // u ∘ lookup == id for a modifier's pure tail
        if (c.kind == Canonical::Kind::Modifier) {
          note(tr, "(unit) " + print(c.u) + " . lookup == id[Unit]");
          return modifier(identity(v), c.a, c.dom);
        }
        return accessor(c.dom, identity(v));
      case AtomKind::Update:
        if (c.kind == Canonical::Kind::Modifier) {
          // update ∘ w ∘ lookup ∘ update ∘ b == update ∘ (w ∘ b)
          const Term wb = compose(c.u, reify_accessor(c.a, c.dom, v));
          note(tr, "(ax) update . " + print(c.u) + " . lookup . update == update . " + print(c.u));
          return modifier(single(atoms::pa(v)), as_part(run(wb)), c.dom);
        }
        return modifier(single(atoms::pa(v)), as_part(c), c.dom);
      default:
        throw NormalizeError("non-states atom " + print(op));
    }
  }

  Canonical run(const Term& t) const {
    Canonical c = pure(identity(t.dom));
    for (const auto& op : t.atoms) c = step(c, op);
    return c;
  }
};

}  // namespace detail

/// Canonical form of a pure term, accessor or modifier.
inline Canonical normalize(const Term& f, const Type& v, Trace* tr = nullptr) {
  validate(f, Family::States);
  return detail::Normalizer{v, tr}.run(f);
}

/// Witness constants k_X : Unit -> X per base type; Unit is witnessed by id.
struct InhabitationMap {
  std::map<std::string, Term> witness;

  static InhabitationMap from(const Signature& sig) {
    InhabitationMap m;
    for (const auto& op : sig.ops)
      if (op.grade == kPure && op.dom.is_unit() && !op.cod.is_unit() && !m.witness.count(op.cod.name))
        m.witness[op.cod.name] = single(atoms::gen(op));
    return m;
  }

  Term k(const Type& x) const {
    if (x.is_unit()) return identity(x);
    auto it = witness.find(x.name);
    if (it == witness.end()) throw Error("type " + x.name + " is non-empty but has no witness constant");
    return it->second;
  }
};

namespace detail {

struct Decider {
  Type v;
  const InhabitationMap& inhab;
  const Emptiness& empty;
  Trace* tr;

  Canonical norm(const Term& t) const { return Normalizer{v, tr}.run(t); }

  void add(PureReduction& r, const Term& l, const Term& rr) const {
    r.add({unit_simplify(l), unit_simplify(rr), Strength::Strong});
  }

  /// Equation between two accessors (weak and strong coincide).
  PureReduction accessors(const Term& l, const Term& rr) const {
    if (empty(l.dom)) return PureReduction::empty_domain();
    const Canonical a = norm(l), b = norm(rr);
    const Type x = l.dom;
    PureReduction out;
    if (a.kind == b.kind) {
      add(out, a.u, b.u);
      return out;
    }
    const Canonical& acc = a.kind == Canonical::Kind::Accessor ? a : b;
    const Canonical& pur = a.kind == Canonical::Kind::Accessor ? b : a;
    // v1 ∘ lookup ∘ pa_X == v2  iff  v1 == v2∘k_X∘pa_V  and  v2 == v2∘k_X∘pa_X
    const Term w2 = compose(pur.u, inhab.k(x));
    note(tr, "accessor vs pure via witness " + print(inhab.k(x)));
    add(out, acc.u, compose(w2, single(atoms::pa(v))));
    add(out, pur.u, x.is_unit() ? w2 : compose(w2, single(atoms::pa(x))));
    return out;
  }

  PureReduction decide(const Equation& e) const {
    PureReduction r;
    if (empty(e.lhs.dom)) {
      r.kind = PureReduction::Kind::EmptyDomain;
      note(&r.trace, "(empty) domain " + e.lhs.dom.name + " is empty");
      return r;
    }
    const Canonical f1 = norm(e.lhs), f2 = norm(e.rhs);
    const bool m1 = f1.kind == Canonical::Kind::Modifier, m2 = f2.kind == Canonical::Kind::Modifier;
    const bool weak = e.strength == Strength::Weak;
    const Type x = e.lhs.dom;

    auto sub = [&](const Term& l, const Term& rr) {
      note(&r.trace, "accessor equation " + print(l) + " == " + print(rr));
      r.merge(accessors(l, rr));
    };
    if (m1 && m2) {
      sub(compose(f1.u, reify_accessor(f1.a, x, v)), compose(f2.u, reify_accessor(f2.a, x, v)));
      if (!weak) sub(reify_accessor(f1.a, x, v), reify_accessor(f2.a, x, v));
    } else if (m1 || m2) {
      const Canonical& m = m1 ? f1 : f2;
      const Canonical& g = m1 ? f2 : f1;
      sub(compose(m.u, reify_accessor(m.a, x, v)), g.reify(v));
      if (!weak) sub(reify_accessor(m.a, x, v), read(x, v));
    } else {
      note(&r.trace, "(eq1) both sides are accessors");
      r.merge(accessors(f1.reify(v), f2.reify(v)));
    }
    return r;
  }
};

}  // namespace detail

/// Reduces a weak or strong state equation to pure equations.
inline PureReduction decide(const Equation& e, const Signature& sig, const Emptiness& empty,
                            const InhabitationMap& inhab) {
  validate(e, Family::States);
  const Type& v = sig.V();
  if (empty(v)) throw Error("the value type must be non-empty");
  PureReduction r;
  detail::Decider d{v, inhab, empty, &r.trace};
  PureReduction out = d.decide(e);
  out.trace.insert(out.trace.begin(), r.trace.begin(), r.trace.end());
  return out;
}

inline PureReduction decide(const Equation& e, const Signature& sig, const Emptiness& empty) {
  return decide(e, sig, empty, InhabitationMap::from(sig));
}

inline bool check(const Equation& e, const Signature& sig, const FiniteModel& m) {
  return pure_eqs_hold(decide(e, sig, model_emptiness(m)), m);
}

}  // namespace deco::states
