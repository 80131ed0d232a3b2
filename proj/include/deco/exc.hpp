// Programmer-level exceptions: throw and try/catch over a pure signature.
#pragma once

#include "deco/reduction.hpp"

namespace deco::exc {

/// Either a pure term u : X -> Y, or throw_Y ∘ u with u : X -> P pure.
struct Canonical {
  enum class Kind { Pure, Thrown };
  Kind kind = Kind::Pure;
  Term u;
  Type cod;  // Y

  Term reify(const Type& p) const {
    if (kind == Kind::Pure) return u;
    return compose(atoms::throw_to(p, cod), u);
  }
};

namespace detail {

inline Term slice(const Term& t, std::size_t from, std::size_t to, const Type& dom) {
  Term out{dom, dom, {}};
  for (std::size_t i = from; i < to; ++i) out.atoms.push_back(t.atoms[i]);
  if (!out.atoms.empty()) out.cod = out.atoms.back().cod;
  return out;
}

}  // namespace detail

/// Canonical form by the four-case structural induction: locate the first
/// effect atom op in a = b ∘ op ∘ v (v pure) and rewrite.
inline Canonical normalize(const Term& a, const Type& p, Trace* tr = nullptr) {
  validate(a, Family::Exc);
  std::size_t k = 0;
  while (k < a.atoms.size() && a.atoms[k].grade == kPure) {
    if (a.atoms[k].kind != AtomKind::Gen && a.atoms[k].kind != AtomKind::Copa)
      throw NormalizeError("non-exc atom " + print(a.atoms[k]));
    ++k;
  }
  if (k == a.atoms.size()) return {Canonical::Kind::Pure, a, a.cod};

  const Atom& op = a.atoms[k];
  Term v = detail::slice(a, 0, k, a.dom);
  Term b = detail::slice(a, k + 1, a.atoms.size(), op.cod);

  if (op.kind == AtomKind::Throw) {
    Canonical c{Canonical::Kind::Thrown, v, a.cod};
    if (!b.is_identity()) note(tr, "(propagate) " + print(a) + " == " + print(c.reify(p)));
    return c;
  }
  if (op.kind != AtomKind::TryCatch) throw NormalizeError("non-exc atom " + print(op));

  const Term& body = op.subs[0];
  const Term& handler = op.subs[1];
  Canonical inner = normalize(body, p, tr);
  Term rest;
  if (inner.kind == Canonical::Kind::Pure) {
    rest = compose(b, inner.u, v);
    note(tr, "(try0) " + print(a) + " == " + print(rest));
  } else {
    rest = compose(b, handler, inner.u, v);
    note(tr, "(try1) " + print(a) + " == " + print(rest));
  }
  return normalize(rest, p, tr);
}

/// Reduces a strong L_exc equation to pure equations.
inline PureReduction decide(const Equation& e, const Signature& sig, const Emptiness& empty) {
  if (e.strength != Strength::Strong) throw TypeError("the exc logic has no weak equations");
  validate(e, Family::Exc);
  const Type& p = sig.P();
  if (empty(p)) throw Error("the parameter type must be non-empty");

  PureReduction r;
  if (empty(e.lhs.dom)) {
    r.kind = PureReduction::Kind::EmptyDomain;
    r.trace.push_back("(initial1) domain " + e.lhs.dom.name + " is empty");
    return r;
  }
  Canonical l = normalize(e.lhs, p, &r.trace);
  Canonical rr = normalize(e.rhs, p, &r.trace);
  if (l.kind != rr.kind) {
    r.kind = PureReduction::Kind::Inconsistent;
    r.trace.push_back("clash between a thrown and a pure canonical form");
    return r;
  }
  if (l.kind == Canonical::Kind::Thrown) r.trace.push_back("(recover)");
  r.add({l.u, rr.u, Strength::Strong});
  return r;
}

/// decide + evaluation of the produced pure equations in the model.
inline bool check(const Equation& e, const Signature& sig, const FiniteModel& m) {
  return pure_eqs_hold(decide(e, sig, model_emptiness(m)), m);
}

}  // namespace deco::exc
