// Core exceptions: tag/untag with weak and strong equations, plus the
// TRY/CATCH constructs used to express try/catch.
#pragma once

#include <variant>

#include "deco/reduction.hpp"

namespace deco::excore {

/// Canonical shapes:
///   Pure     u
///   Tag      copa_Y ∘ tag ∘ v          (v : X -> P pure; for Y = Empty just tag ∘ v)
///   Catcher  a ∘ untag ∘ tag ∘ u       (a : P -> Y canonical propagator, u : X -> P pure)
struct Canonical {
  enum class Kind { Pure, Tag, Catcher };
  Kind kind = Kind::Pure;
  Term u;   // Pure: the term; Tag: v; Catcher: u
  Term a;   // Catcher only
  Type dom, cod;

  bool is_propagator() const { return kind != Kind::Catcher; }

  Term reify(const Type& p) const {
    switch (kind) {
      case Kind::Pure: return u;
      case Kind::Tag: {
        Term t = compose(atoms::tag(p), u);
        return cod.is_empty() ? t : compose(atoms::copa(cod), t);
      }
      case Kind::Catcher:
        return compose(a, compose(atoms::untag(p), compose(atoms::tag(p), u)));
    }
    return u;
  }

  std::string describe(const Type& p) const {
    switch (kind) {
      case Kind::Pure: return "pure " + print(u);
      case Kind::Tag: return "tag v=" + print(u) + " : " + print(reify(p));
      case Kind::Catcher: return "catcher a=" + print(a) + " u=" + print(u) + " : " + print(reify(p));
    }
    return "";
  }
};

namespace detail {

struct Normalizer {
  Type p;
  Trace* tr = nullptr;

  Canonical pure(Term u) const {
    Canonical c{Canonical::Kind::Pure, std::move(u), {}, {}, {}};
    c.dom = c.u.dom;
    c.cod = c.u.cod;
    return c;
  }
  Canonical tagged(Term v, const Type& y) const {
    Canonical c{Canonical::Kind::Tag, std::move(v), {}, {}, y};
    c.dom = c.u.dom;
    return c;
  }
  Canonical catcher(Term a, Term u) const {
    Canonical c{Canonical::Kind::Catcher, std::move(u), std::move(a), {}, {}};
    c.dom = c.u.dom;
    c.cod = c.a.cod;
    return c;
  }

  /// Propagator post-processing: domain Empty collapses to copa_Y, pure
  /// terms into Empty become tag ∘ (copa_P ∘ u).
  Canonical finish_propagator(Canonical c) const {
    if (c.kind == Canonical::Kind::Catcher) return c;
    if (c.dom.is_empty()) {
      Term t = c.cod.is_empty() ? identity(c.cod) : single(atoms::copa(c.cod));
      if (!(c.kind == Canonical::Kind::Pure && c.u == t))
        note(tr, "(initial) propagator from Empty: == " + print(t));
      return pure(t);
    }
    if (c.kind == Canonical::Kind::Pure && c.cod.is_empty())
      return tagged(compose(atoms::copa(p), c.u), c.cod);
    return c;
  }

  /// a ∘ untag ∘ tag ∘ u with a == copa_Y ∘ tag is the propagator copa_Y ∘ tag ∘ u.
  Canonical finish(Canonical c) const {
    if (c.kind == Canonical::Kind::Catcher) {
      Canonical a = prop(c.a);
      if (a.kind == Canonical::Kind::Tag && a.u == identity(p)) {
        note(tr, "(eq1) copa ∘ tag ∘ untag == copa: " + print(c.reify(p)) + " == tag form");
        return finish_propagator(tagged(c.u, c.cod));
      }
      c.a = a.reify(p);
      return c;
    }
    return finish_propagator(std::move(c));
  }

  /// Canonical propagator of a term known to be grade <= 1.
  Canonical prop(const Term& t) const {
    Canonical c = run(t, false);
    if (c.kind == Canonical::Kind::Catcher)
      throw NormalizeError("expected a propagator, got catcher " + print(t));
    return c;
  }

  /// g ∘ c for a canonical propagator g.
  Canonical after_propagator(const Canonical& c, const Canonical& g) const {
    switch (c.kind) {
      case Canonical::Kind::Pure:
        if (g.kind == Canonical::Kind::Pure) return pure(compose(g.u, c.u));
        return tagged(compose(g.u, c.u), g.cod);
      case Canonical::Kind::Tag:
        return tagged(c.u, g.cod);  // (propagate)
      case Canonical::Kind::Catcher:
        return catcher(prop(compose(g.reify(p), c.a)).reify(p), c.u);
    }
    return c;
  }

  Canonical collapse_weak(const Canonical& c) const {
    if (c.kind != Canonical::Kind::Catcher) return c;
    Term w = compose(c.a, c.u);
    note(tr, "(ax) " + print(c.reify(p)) + " ~~ " + print(w));
    return prop(w);
  }

  Canonical step(const Canonical& c, const Atom& x, bool weak) const {
    switch (x.kind) {
      case AtomKind::Gen:
        if (x.grade != kPure) throw NormalizeError("effectful generator " + x.name);
        [[fallthrough]];
      case AtomKind::Copa:
        return after_propagator(c, pure(single(x)));
      case AtomKind::Tag:
        switch (c.kind) {
          case Canonical::Kind::Pure: return tagged(c.u, Type::empty());
          case Canonical::Kind::Tag: return tagged(c.u, Type::empty());
          case Canonical::Kind::Catcher:
            return catcher(prop(compose(atoms::tag(p), c.a)).reify(p), c.u);
        }
        break;
      case AtomKind::Untag:
        switch (c.kind) {
          case Canonical::Kind::Pure: {
            Term w = compose(atoms::copa(p), c.u);
            if (weak) return pure(w);
            return catcher(identity(p), w);
          }
          case Canonical::Kind::Tag:
            if (weak) {
              note(tr, "(ax) untag ∘ tag ∘ " + print(c.u) + " ~~ " + print(c.u));
              return pure(c.u);
            }
            return catcher(identity(p), c.u);
          case Canonical::Kind::Catcher: {
            // untag ∘ tag ∘ w ∘ untag ∘ tag ∘ u == w ∘ untag ∘ tag ∘ u
            Canonical a = prop(c.a);
            Term w = a.kind == Canonical::Kind::Tag ? a.u : compose(atoms::copa(p), a.u);
            return catcher(w, c.u);
          }
        }
        break;
      case AtomKind::TryCore: {
        Canonical g = eliminate_try(x);
        return after_propagator(c, g);
      }
      case AtomKind::CatchCore: {
        const Term& b = x.subs[0];
        if (c.kind == Canonical::Kind::Tag) {
          Canonical res = catcher(prop(b).reify(p), c.u);
          note(tr, "(catch) CATCH(" + print(b) + ") ∘ copa == " + print(b) + " ∘ untag: " +
                       print(res.reify(p)));
          return res;
        }
        if (c.kind == Canonical::Kind::Catcher) {
          Canonical a = prop(c.a);
          if (a.kind == Canonical::Kind::Tag)
            return catcher(prop(compose(b, a.u)).reify(p), c.u);
        }
        if (weak) {
          note(tr, "(catch) CATCH(" + print(b) + ") ~~ id on a non-exceptional argument");
          return c;
        }
        throw NormalizeError("CATCH(" + print(b) +
                             ") applied to a result that may be a value has no canonical form "
                             "outside a TRY");
      }
      default:
        throw NormalizeError("non-excore atom " + print(x));
    }
    return c;
  }

  /// TRY(a, k) ~~ k ∘ a; being a propagator it is strongly equal to the
  /// weak value of k ∘ a.
  Canonical eliminate_try(const Atom& x) const {
    const Term ka = compose(x.subs[1], x.subs[0]);
    note(tr, "(try) " + print(x) + " ~~ " + print(ka));
    Canonical g = run(ka, true);
    note(tr, "(eq1) " + print(x) + " == " + print(g.reify(p)));
    return g;
  }

  Canonical run(const Term& t, bool weak) const {
    Canonical c = pure(identity(t.dom));
    for (const auto& x : t.atoms) {
      c = step(c, x, weak);
      if (weak) c = collapse_weak(c);
      c = finish(std::move(c));
    }
    return finish(std::move(c));
  }
};

}  // namespace detail

/// Canonical form of a catcher or propagator in the core language.
inline Canonical normalize(const Term& f, const Type& p, Trace* tr = nullptr) {
  validate(f, Family::Excore);
  return detail::Normalizer{p, tr}.run(f, false);
}

/// Canonical form of a propagator (no untag/CATCH outside TRY).
inline Canonical normalize_prop(const Term& a, const Type& p, Trace* tr = nullptr) {
  validate(a, Family::Excore);
  for (const auto& x : a.atoms)
    if (x.grade > kPropagator) throw NormalizeError("catcher atom " + print(x) + " in a propagator");
  return detail::Normalizer{p, tr}.prop(a);
}

namespace detail {

inline PureReduction decide_propagators(const Term& l, const Term& r, const Type& p,
                                        const Emptiness& empty, Trace* tr) {
  if (empty(l.dom)) return PureReduction::empty_domain();
  Normalizer n{p, tr};
  Canonical a = n.prop(l), b = n.prop(r);
  PureReduction out;
  if (a.kind != b.kind) {
    note(tr, "clash: " + print(l) + " vs " + print(r));
    return PureReduction::inconsistent();
  }
  out.add({a.u, b.u, Strength::Strong});
  return out;
}

}  // namespace detail

/// Reduces a weak or strong core equation to pure equations.
inline PureReduction decide(const Equation& e, const Signature& sig, const Emptiness& empty) {
  validate(e, Family::Excore);
  const Type& p = sig.P();
  if (empty(p)) throw Error("the parameter type must be non-empty");
  PureReduction r;
  Trace* tr = &r.trace;
  detail::Normalizer n{p, tr};
  const Canonical f1 = n.run(e.lhs, false);
  const Canonical f2 = n.run(e.rhs, false);
  const bool x_empty = empty(e.lhs.dom);
  const bool weak = e.strength == Strength::Weak;

  auto sub = [&](const Term& l, const Term& rr) {
    note(tr, "propagator equation " + print(l) + " == " + print(rr));
    r.merge(detail::decide_propagators(l, rr, p, empty, nullptr));
  };

  if (x_empty && (weak || (f1.is_propagator() && f2.is_propagator()))) {
    note(tr, "(empty) domain " + e.lhs.dom.name + " is empty");
    return {PureReduction::Kind::EmptyDomain, {}, r.trace};
  }
  r.kind = x_empty ? PureReduction::Kind::EmptyDomain : PureReduction::Kind::PureEqs;

  if (!f1.is_propagator() && !f2.is_propagator()) {
    sub(compose(f1.a, f1.u), compose(f2.a, f2.u));
    if (!weak) sub(f1.a, f2.a);
  } else if (!f1.is_propagator() || !f2.is_propagator()) {
    const Canonical& c = f1.is_propagator() ? f2 : f1;
    const Canonical& g = f1.is_propagator() ? f1 : f2;
    sub(compose(c.a, c.u), g.reify(p));
    if (!weak) {
      Term thrower = compose(atoms::copa(c.cod), single(atoms::tag(p)));
      if (c.cod.is_empty()) thrower = single(atoms::tag(p));
      sub(c.a, thrower);
    }
  } else {
    // (eq1): weak and strong coincide on propagators
    PureReduction pr = detail::decide_propagators(f1.reify(p), f2.reify(p), p, empty, tr);
    pr.trace.insert(pr.trace.begin(), r.trace.begin(), r.trace.end());
    return pr;
  }
  return r;
}

inline bool check(const Equation& e, const Signature& sig, const FiniteModel& m) {
  return pure_eqs_hold(decide(e, sig, model_emptiness(m)), m);
}

}  // namespace deco::excore
