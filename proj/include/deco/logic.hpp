// Family dispatch for the deciders, and the verdict reported per equation.
#pragma once

#include "deco/exc.hpp"
#include "deco/excore.hpp"
#include "deco/states.hpp"

namespace deco {

/// E_0 for one equation, by the decider of the signature's family.
inline PureReduction reduce_to_pure(const Equation& e, const Signature& sig,
                                    const Emptiness& empty = default_emptiness()) {
  switch (sig.family) {
    case Family::Exc: return exc::decide(e, sig, empty);
    case Family::Excore: return excore::decide(e, sig, empty);
    case Family::States: return states::decide(e, sig, empty);
  }
  throw Error("unknown family");
}

inline bool check(const Equation& e, const Signature& sig, const FiniteModel& m) {
  switch (sig.family) {
    case Family::Exc: return exc::check(e, sig, m);
    case Family::Excore: return excore::check(e, sig, m);
    case Family::States: return states::check(e, sig, m);
  }
  throw Error("unknown family");
}

enum class Verdict { Equal, NotEqual, Inconsistent, EmptyDom };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "EQUAL";
    case Verdict::NotEqual: return "NOTEQUAL";
    case Verdict::Inconsistent: return "INCONSISTENT";
    case Verdict::EmptyDom: return "EMPTYDOM";
  }
  return "?";
}

/// EQUAL when every produced pure equation holds in every model given (and
/// at least one model is given, unless the equations are reflexive).
inline Verdict verdict(const PureReduction& r, const std::vector<FiniteModel>& models) {
  switch (r.kind) {
    case PureReduction::Kind::EmptyDomain: return Verdict::EmptyDom;
    case PureReduction::Kind::Inconsistent: return Verdict::Inconsistent;
    case PureReduction::Kind::PureEqs: break;
  }
  if (r.trivially_true()) return Verdict::Equal;
  if (models.empty()) return Verdict::NotEqual;
  for (const auto& m : models)
    if (!pure_eqs_hold(r, m)) return Verdict::NotEqual;
  return Verdict::Equal;
}

/// One line per carrier and generator table, e.g. "P = 2; f = [1, 0]; c = 0".
inline std::string describe_model(const FiniteModel& m, const Signature& sig) {
  std::string s;
  auto sep = [&] { return s.empty() ? "" : "; "; };
  for (const auto& t : sig.types) s += sep() + t.name + " = " + std::to_string(m.size(t));
  for (const auto& op : sig.ops) {
    auto it = m.tables.find(op.name);
    if (it == m.tables.end()) continue;
    if (op.dom.is_unit() && it->second.size() == 1) {
      s += sep() + op.name + " = " + m.element_name(op.cod, it->second[0]);
      continue;
    }
    std::string row;
    for (int v : it->second) row += (row.empty() ? "" : ", ") + m.element_name(op.cod, v);
    s += sep() + op.name + " = [" + row + "]";
  }
  return s;
}

}  // namespace deco
