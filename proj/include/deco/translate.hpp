// Translation of throw / try-catch into the core language:
//   throw_Y             ↦  copa_Y ∘ tag
//   try (a) catch (b)   ↦  TRY(a', CATCH(b'))
#pragma once

#include "deco/exc.hpp"
#include "deco/excore.hpp"

namespace deco {

inline Term translate(const Term& t, const Type& p) {
  Term out = identity(t.dom);
  for (const auto& a : t.atoms) {
    switch (a.kind) {
      case AtomKind::Throw:
        out = compose(compose(atoms::copa(a.cod), single(atoms::tag(p))), out);
        break;
      case AtomKind::TryCatch: {
        Term body = translate(a.subs[0], p);
        Term handler = single(atoms::catch_core(p, translate(a.subs[1], p)));
        out = compose(atoms::try_core(std::move(body), std::move(handler)), out);
        break;
      }
      case AtomKind::Gen:
      case AtomKind::Copa:
        out = compose(a, out);
        break;
      default:
        throw TypeError("atom " + print(a) + " is not part of the exc logic");
    }
  }
  return out;
}

inline Equation translate(const Equation& e, const Type& p) {
  return {translate(e.lhs, p), translate(e.rhs, p), e.strength};
}

/// The same signature viewed in the core family.
inline Signature core_signature(Signature sig) {
  sig.family = Family::Excore;
  return sig;
}

inline FiniteModel core_model(FiniteModel m) {
  m.family = Family::Excore;
  return m;
}

struct TranslationReport {
  bool decisions_agree = true;   // check_exc == check_core per model
  bool semantics_agree = true;   // sem_holds agrees per model
  bool terms_commute = true;     // exc denotation == core denotation of the image
  bool rule_images = true;       // the five rule images are derived facts
  std::vector<std::string> failures;

  bool ok() const { return decisions_agree && semantics_agree && terms_commute && rule_images; }
};

/// Replays the images of (propagate), (recover), (try), (try0), (try1) as
/// facts of the core decider. `a` : X -> Y is any exc term, `w` : X -> Y,
/// `u1`, `u2` : X -> P are pure and `b` : P -> Y.
/// Rules whose pure operand is absent are skipped.
inline std::vector<std::pair<std::string, bool>> rule_images(const Term& a, const std::optional<Term>& w,
                                                             const std::optional<Term>& u1,
                                                             const std::optional<Term>& u2,
                                                             const Term& b, const Signature& sig) {
  const Type& p = sig.P();
  const Signature core = core_signature(sig);
  const Emptiness empty = default_emptiness();
  const Type x = a.dom, y = a.cod;
  auto core_decide = [&](const Term& l, const Term& r) {
    return excore::decide(Equation{translate(l, p), translate(r, p), Strength::Strong}, core, empty);
  };
  auto thrown = [&](const Term& u) { return compose(atoms::throw_to(p, y), u); };
  std::vector<std::pair<std::string, bool>> out;

  out.push_back({"propagate",
                 core_decide(compose(a, single(atoms::throw_to(p, x))), single(atoms::throw_to(p, y)))
                     .trivially_true()});

  if (u1 && u2) {
    PureReduction rec = core_decide(thrown(*u1), thrown(*u2));
    out.push_back({"recover", rec.kind == PureReduction::Kind::PureEqs && rec.eqs.size() == 1 &&
                                  rec.eqs[0] == Equation{*u1, *u2, Strength::Strong}});
  }

  // a is provably equal to its canonical form, so both try blocks must be too
  const Term a2 = exc::normalize(a, p).reify(p);
  const bool premise = core_decide(a, a2).trivially_true();
  const bool concl = core_decide(single(atoms::try_catch(p, a, b)), single(atoms::try_catch(p, a2, b)))
                         .trivially_true();
  out.push_back({"try", premise && concl});

  if (w) out.push_back({"try0", core_decide(single(atoms::try_catch(p, *w, b)), *w).trivially_true()});

  if (u1)
    out.push_back({"try1", core_decide(single(atoms::try_catch(p, thrown(*u1), b)), compose(b, *u1))
                               .trivially_true()});
  return out;
}

/// Checks a translated equation against the exc-side decision and semantics.
inline TranslationReport verify_translation(const Equation& e, const Signature& sig,
                                            const std::vector<FiniteModel>& models) {
  TranslationReport rep;
  const Type& p = sig.P();
  const Signature core = core_signature(sig);
  const Equation te = translate(e, p);
  for (const auto& m : models) {
    const FiniteModel cm = core_model(m);
    if (exc::check(e, sig, m) != excore::check(te, core, cm)) {
      rep.decisions_agree = false;
      rep.failures.push_back("decision differs on " + print(e));
    }
    if (sem_holds(e, m) != sem_holds(te, cm)) {
      rep.semantics_agree = false;
      rep.failures.push_back("semantics differs on " + print(e));
    }
    for (const Term* t : {&e.lhs, &e.rhs}) {
      if (!(eval(*t, m).table == eval(translate(*t, p), cm).table)) {
        rep.terms_commute = false;
        rep.failures.push_back("denotation differs for " + print(*t));
      }
    }
  }
  // rule images instantiated on the equation's own pieces
  const exc::Canonical cl = exc::normalize(e.lhs, p), cr = exc::normalize(e.rhs, p);
  std::optional<Term> w, u1, u2;
  if (cl.kind == exc::Canonical::Kind::Pure) w = cl.u;
  else if (cr.kind == exc::Canonical::Kind::Pure) w = cr.u;
  if (cl.kind == exc::Canonical::Kind::Thrown) u1 = cl.u;
  if (cr.kind == exc::Canonical::Kind::Thrown) u2 = cr.u;
  if (!u2) u2 = u1;
  if (!u1) u1 = u2;
  const Term b = single(atoms::throw_to(p, e.lhs.cod));
  for (const auto& [rule, ok] : rule_images(e.lhs, w, u1, u2, b, sig)) {
    if (!ok) {
      rep.rule_images = false;
      rep.failures.push_back("rule image (" + rule + ") is not derived");
    }
  }
  return rep;
}

}  // namespace deco
