// Outcome of reducing a decorated equation to equations of the pure sublogic.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "deco/model.hpp"
#include "deco/term.hpp"

namespace deco {

class NormalizeError : public Error {
 public:
  using Error::Error;
};

struct PureReduction {
  enum class Kind { PureEqs, Inconsistent, EmptyDomain };
  Kind kind = Kind::PureEqs;
  std::vector<Equation> eqs;  // strong equations between pure terms
  std::vector<std::string> trace;

  static PureReduction empty_domain() { return {Kind::EmptyDomain, {}, {}}; }
  static PureReduction inconsistent() { return {Kind::Inconsistent, {}, {}}; }

  /// Adds a pure equation unless an identical one is already present.
  void add(Equation e) {
    e.strength = Strength::Strong;
    for (const auto& x : eqs)
      if (x == e) return;
    eqs.push_back(std::move(e));
  }

  /// Union of two reductions: inconsistency absorbs, empty domain is neutral.
  void merge(const PureReduction& o) {
    trace.insert(trace.end(), o.trace.begin(), o.trace.end());
    if (kind == Kind::Inconsistent) return;
    if (o.kind == Kind::Inconsistent) {
      kind = Kind::Inconsistent;
      eqs.clear();
      return;
    }
    if (o.kind == Kind::EmptyDomain) return;
    if (kind == Kind::EmptyDomain) kind = Kind::PureEqs;
    for (const auto& e : o.eqs) add(e);
  }

  /// True when the reduction is provable outright: empty domain, or every
  /// produced equation is syntactically reflexive.
  bool trivially_true() const {
    if (kind == Kind::EmptyDomain) return true;
    if (kind == Kind::Inconsistent) return false;
    for (const auto& e : eqs)
      if (!(e.lhs == e.rhs)) return false;
    return true;
  }
};

inline const char* kind_name(PureReduction::Kind k) {
  switch (k) {
    case PureReduction::Kind::PureEqs: return "pure-eqs";
    case PureReduction::Kind::Inconsistent: return "inconsistent";
    case PureReduction::Kind::EmptyDomain: return "empty-domain";
  }
  return "?";
}

/// Which object types are empty.
using Emptiness = std::function<bool(const Type&)>;

/// Empty is empty, everything else inhabited.
inline Emptiness default_emptiness() {
  return [](const Type& t) { return t.is_empty(); };
}

inline Emptiness model_emptiness(const FiniteModel& m) {
  return [m](const Type& t) { return m.size(t) == 0; };
}

/// Pure equations checked by evaluation in a model.
inline bool pure_eqs_hold(const PureReduction& r, const FiniteModel& m) {
  switch (r.kind) {
    case PureReduction::Kind::EmptyDomain: return true;
    case PureReduction::Kind::Inconsistent: return false;
    case PureReduction::Kind::PureEqs:
      for (const auto& e : r.eqs)
        if (!sem_holds(e, m)) return false;
      return true;
  }
  return false;
}

/// Optional step log; pass nullptr to skip.
using Trace = std::vector<std::string>;

inline void note(Trace* tr, std::string s) {
  if (tr) tr->push_back(std::move(s));
}

}  // namespace deco
