// Finite-set intended models: propagators as X -> Y+E, catchers as
// X+E -> Y+E, accessors/modifiers as S x X -> S x Y.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deco/term.hpp"

namespace deco {

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Carriers and generator tables. Elements of each carrier are the ids
/// 0..n-1; `elements` keeps display names.
///
/// Exceptions: E is a tagged copy of carrier(P), tag(p) = p.
/// States: S is carrier(V) and lookup is the identity.
struct FiniteModel {
  Family family = Family::Exc;
  std::map<std::string, std::vector<std::string>> elements;  // base type -> names
  std::map<std::string, std::vector<int>> tables;            // generator -> outputs
  std::optional<Type> param, value;

  int size(const Type& t) const {
    if (t.is_empty()) return 0;
    if (t.is_unit()) return 1;
    auto it = elements.find(t.name);
    if (it == elements.end()) throw EvalError("model has no carrier for type " + t.name);
    return static_cast<int>(it->second.size());
  }

  /// |E| for exception families, |S| for states.
  int extra() const {
    if (family == Family::States) return value ? size(*value) : 1;
    return param ? size(*param) : 0;
  }

  std::string element_name(const Type& t, int id) const {
    if (t.is_unit()) return "*";
    auto it = elements.find(t.name);
    if (it == elements.end() || id < 0 || id >= static_cast<int>(it->second.size()))
      return std::to_string(id);
    return it->second[id];
  }

  bool is_empty_type(const Type& t) const { return size(t) == 0; }
};

/// A total function table. Point encoding:
///   exc/excore: 0..|X|-1 are values, |X|+e is exception e.
///   states:     s*|X| + x.
struct Denotation {
  Family family = Family::Exc;
  int dom_size = 0, cod_size = 0, extra = 0;
  std::vector<int> table;

  int dom_points() const { return family == Family::States ? extra * dom_size : dom_size + extra; }
  bool operator==(const Denotation&) const = default;
};

inline Denotation identity_denotation(Family f, int n, int extra) {
  Denotation d{f, n, n, extra, {}};
  d.table.resize(d.dom_points());
  for (int i = 0; i < d.dom_points(); ++i) d.table[i] = i;
  return d;
}

/// second ∘ first
inline Denotation then(const Denotation& first, const Denotation& second) {
  Denotation d{first.family, first.dom_size, second.cod_size, first.extra, {}};
  d.table.resize(first.table.size());
  for (std::size_t i = 0; i < first.table.size(); ++i) d.table[i] = second.table[first.table[i]];
  return d;
}

namespace detail {

inline Denotation eval_term(const Term& t, const FiniteModel& m);

inline Denotation eval_atom(const Atom& a, const FiniteModel& m) {
  const Family f = m.family;
  const int nx = m.size(a.dom), ny = m.size(a.cod), ne = m.extra();
  Denotation d{f, nx, ny, ne, {}};
  d.table.assign(d.dom_points(), -1);

  if (f != Family::States) {
    // exceptional inputs propagate unless the atom is a catcher
    for (int e = 0; e < ne; ++e) d.table[nx + e] = ny + e;
    switch (a.kind) {
      case AtomKind::Gen: {
        auto it = m.tables.find(a.name);
        if (it == m.tables.end()) throw EvalError("no interpretation for generator '" + a.name + "'");
        if (static_cast<int>(it->second.size()) != nx)
          throw EvalError("table of '" + a.name + "' has wrong size");
        for (int x = 0; x < nx; ++x) d.table[x] = it->second[x];
        break;
      }
      case AtomKind::Copa: break;
      case AtomKind::Throw:
      case AtomKind::Tag:
        for (int p = 0; p < nx; ++p) d.table[p] = ny + p;
        break;
      case AtomKind::Untag:
        for (int e = 0; e < ne; ++e) d.table[nx + e] = e;
        break;
      case AtomKind::TryCatch: {
        const Denotation body = eval_term(a.subs[0], m);
        const Denotation handler = eval_term(a.subs[1], m);
        for (int x = 0; x < nx; ++x) {
          const int r = body.table[x];
          d.table[x] = r < ny ? r : handler.table[r - ny];
        }
        break;
      }
      case AtomKind::TryCore: {
        const Denotation body = eval_term(a.subs[0], m);
        const Denotation k = eval_term(a.subs[1], m);
        for (int x = 0; x < nx; ++x) d.table[x] = k.table[body.table[x]];
        break;
      }
      case AtomKind::CatchCore: {
        const Denotation handler = eval_term(a.subs[0], m);
        for (int y = 0; y < nx; ++y) d.table[y] = y;
        for (int e = 0; e < ne; ++e) d.table[nx + e] = handler.table[e];
        break;
      }
      default:
        throw EvalError("atom '" + print(a) + "' has no meaning in the exceptions model");
    }
    return d;
  }

  for (int s = 0; s < ne; ++s) {
    for (int x = 0; x < nx; ++x) {
      int s2 = s, y = 0;
      switch (a.kind) {
        case AtomKind::Gen: {
          auto it = m.tables.find(a.name);
          if (it == m.tables.end()) throw EvalError("no interpretation for generator '" + a.name + "'");
          y = it->second.at(x);
          break;
        }
        case AtomKind::Pa: y = 0; break;
        case AtomKind::Lookup: y = s; break;
        case AtomKind::Update: s2 = x; y = 0; break;
        default:
          throw EvalError("atom '" + print(a) + "' has no meaning in the states model");
      }
      d.table[s * nx + x] = s2 * ny + y;
    }
  }
  return d;
}

inline Denotation eval_term(const Term& t, const FiniteModel& m) {
  Denotation d = identity_denotation(m.family, m.size(t.dom), m.extra());
  for (const auto& a : t.atoms) d = then(d, eval_atom(a, m));
  return d;
}

}  // namespace detail

/// Compositional denotation of a well-formed term.
inline Denotation eval(const Term& t, const FiniteModel& m) {
  validate(t, m.family);
  return detail::eval_term(t, m);
}

/// Strong: equal on every point. Weak: equal on values (exceptions) or on
/// returned values ignoring the final state (states).
inline bool denotations_agree(const Denotation& a, const Denotation& b, Strength s) {
  if (s == Strength::Strong) return a.table == b.table;
  if (a.family != Family::States) {
    for (int x = 0; x < a.dom_size; ++x)
      if (a.table[x] != b.table[x]) return false;
    return true;
  }
  const int ny = a.cod_size;
  if (ny == 0) return true;
  for (std::size_t i = 0; i < a.table.size(); ++i)
    if (a.table[i] % ny != b.table[i] % ny) return false;
  return true;
}

inline bool sem_holds(const Equation& e, const FiniteModel& m) {
  return denotations_agree(eval(e.lhs, m), eval(e.rhs, m), e.strength);
}

/// Grade-0 behaviour: no exceptions raised or caught / state untouched.
inline bool behaves_purely(const Denotation& d) {
  if (d.family != Family::States) {
    for (int x = 0; x < d.dom_size; ++x)
      if (d.table[x] >= d.cod_size) return false;
    for (int e = 0; e < d.extra; ++e)
      if (d.table[d.dom_size + e] != d.cod_size + e) return false;
    return true;
  }
  for (int s = 0; s < d.extra; ++s)
    for (int x = 0; x < d.dom_size; ++x)
      if (d.table[s * d.dom_size + x] / d.cod_size != s) return false;
  return true;
}

/// `x -> y` lines sorted by input id; exceptional points are written `!e`,
/// state points `(s,x)`.
inline std::string dump_denotation(const Denotation& d, const FiniteModel& m, const Type& dom,
                                   const Type& cod) {
  std::ostringstream out;
  const Type st = m.value.value_or(Type::unit());
  const Type pt = m.param.value_or(Type::unit());
  auto exc_point = [&](const Type& t, int n, int v) {
    return v < n ? m.element_name(t, v) : "!" + m.element_name(pt, v - n);
  };
  for (int i = 0; i < d.dom_points(); ++i) {
    const int o = d.table[i];
    if (d.family != Family::States) {
      out << exc_point(dom, d.dom_size, i) << " -> " << exc_point(cod, d.cod_size, o) << "\n";
    } else {
      out << "(" << m.element_name(st, i / d.dom_size) << "," << m.element_name(dom, i % d.dom_size)
          << ") -> (" << m.element_name(st, o / d.cod_size) << "," << m.element_name(cod, o % d.cod_size)
          << ")\n";
    }
  }
  return out.str();
}

/// Size limits per base type for model enumeration.
struct ModelBounds {
  int min_size = 1;
  int max_size = 4;
  std::map<std::string, std::pair<int, int>> per_type;

  std::pair<int, int> range(const std::string& t) const {
    auto it = per_type.find(t);
    return it == per_type.end() ? std::pair{min_size, max_size} : it->second;
  }
};

/// Raw enumeration of every carrier assignment and every generator table
/// within the bounds. Restartable: `reset()` rewinds it.
class ModelEnumerator {
 public:
  ModelEnumerator(const Signature& sig, ModelBounds bounds) : sig_(sig), bounds_(std::move(bounds)) {
    for (const auto& t : sig_.types) {
      auto [lo, hi] = bounds_.range(t.name);
      if (hi < lo) throw Error("empty size range for type " + t.name);
      const bool designated = (sig_.param && *sig_.param == t) || (sig_.value && *sig_.value == t);
      bool is_domain = designated;
      for (const auto& op : sig_.ops) is_domain = is_domain || op.dom == t;
      if (hi == 0 && is_domain) throw Error("bound of zero for type " + t.name + " used as a domain");
    }
    for (const auto& op : sig_.ops)
      if (op.grade != kPure) throw Error("model enumeration supports pure generators only");
    reset();
  }

  void reset() {
    sizes_.clear();
    for (const auto& t : sig_.types) sizes_.push_back(bounds_.range(t.name).first);
    tables_done_ = true;  // forces table initialisation on first next()
    exhausted_ = false;
    first_ = true;
  }

  std::optional<FiniteModel> next() {
    while (!exhausted_) {
      if (first_ || tables_done_) {
        if (!first_ && !advance_sizes()) {
          exhausted_ = true;
          break;
        }
        first_ = false;
        if (!init_tables()) {
          tables_done_ = true;
          continue;
        }
        tables_done_ = false;
        return build();
      }
      if (!advance_tables()) {
        tables_done_ = true;
        continue;
      }
      return build();
    }
    return std::nullopt;
  }

  std::vector<FiniteModel> all() {
    std::vector<FiniteModel> out;
    reset();
    while (auto m = next()) out.push_back(std::move(*m));
    return out;
  }

 private:
  int size_of(const Type& t) const {
    if (t.is_empty()) return 0;
    if (t.is_unit()) return 1;
    for (std::size_t i = 0; i < sig_.types.size(); ++i)
      if (sig_.types[i] == t) return sizes_[i];
    throw Error("undeclared type " + t.name);
  }

  bool advance_sizes() {
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      auto [lo, hi] = bounds_.range(sig_.types[i].name);
      if (sizes_[i] < hi) {
        ++sizes_[i];
        return true;
      }
      sizes_[i] = lo;
    }
    return false;
  }

  // false if some generator has no possible table (non-empty domain, empty codomain)
  bool init_tables() {
    tables_.clear();
    for (const auto& op : sig_.ops) {
      const int nx = size_of(op.dom), ny = size_of(op.cod);
      if (nx > 0 && ny == 0) return false;
      tables_.push_back(std::vector<int>(nx, 0));
    }
    return true;
  }

  bool advance_tables() {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      const int ny = size_of(sig_.ops[i].cod);
      for (auto& v : tables_[i]) {
        if (v + 1 < ny) {
          ++v;
          return true;
        }
        v = 0;
      }
    }
    return false;
  }

  FiniteModel build() const {
    FiniteModel m;
    m.family = sig_.family;
    m.param = sig_.param;
    m.value = sig_.value;
    for (std::size_t i = 0; i < sig_.types.size(); ++i) {
      std::vector<std::string> names;
      for (int k = 0; k < sizes_[i]; ++k) names.push_back(std::to_string(k));
      m.elements[sig_.types[i].name] = std::move(names);
    }
    for (std::size_t i = 0; i < sig_.ops.size(); ++i) m.tables[sig_.ops[i].name] = tables_[i];
    return m;
  }

  Signature sig_;
  ModelBounds bounds_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> tables_;
  bool tables_done_ = true;
  bool exhausted_ = false;
  bool first_ = true;
};

inline std::vector<FiniteModel> enumerate_models(const Signature& sig, ModelBounds bounds) {
  return ModelEnumerator(sig, std::move(bounds)).all();
}

}  // namespace deco
