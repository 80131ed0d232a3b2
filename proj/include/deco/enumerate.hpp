// Exhaustive and random generation of well-typed terms and equations.
//
// Terms are listed by size (atoms, nested ones included), then in the order
// atoms are offered: generators in declaration order, then the family's
// constants by type declaration order.
#pragma once

#include <map>
#include <random>
#include <tuple>

#include "deco/term.hpp"

namespace deco {

struct EnumConfig {
  int max_size = 3;
  std::vector<std::string> gens;  // generator names to use; empty = all
  bool weak = true;                // also list weak equations (not for exc)
  bool with_try = true;            // excore: TRY(a, k) with CATCH inside k
};

class TermEnumerator {
 public:
  /// Which atoms may appear.
  ///   General: every atom of the family except a bare CATCH
  ///   Propagator: grade <= 1 only
  ///   Handler: General plus CATCH (the second argument of TRY)
  enum class Mode { General, Propagator, Handler };

  TermEnumerator(Signature sig, EnumConfig cfg) : sig_(std::move(sig)), cfg_(std::move(cfg)) {
    for (const auto& op : sig_.ops)
      if (cfg_.gens.empty() || std::find(cfg_.gens.begin(), cfg_.gens.end(), op.name) != cfg_.gens.end())
        gens_.push_back(op);
    types_ = sig_.all_types();
  }

  const std::vector<Type>& types() const { return types_; }

  /// Terms X -> Y of exactly `size` atoms.
  const std::vector<Term>& exactly(int size, const Type& x, const Type& y, Mode mode = Mode::General) {
    const Key k{size, x.name, y.name, static_cast<int>(mode)};
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size == 0) {
      if (x == y) out.push_back(identity(x));
    } else {
      // last atom z -> y of size k, prefix x -> z of size size-k
      for (int ka = 1; ka <= size; ++ka)
        for (const Type& z : types_) {
          const std::vector<Term>& prefixes = exactly(size - ka, x, z, mode);
          if (prefixes.empty()) continue;
          for (const Atom& a : atoms_of_size(ka, z, y, mode))
            for (const Term& p : prefixes) out.push_back(compose(single(a), p));
        }
    }
    return memo_.emplace(k, std::move(out)).first->second;
  }

  /// Terms X -> Y of size <= max, smallest first.
  std::vector<Term> up_to(int max, const Type& x, const Type& y, Mode mode = Mode::General) {
    std::vector<Term> out;
    for (int s = 0; s <= max; ++s) {
      const auto& v = exactly(s, x, y, mode);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  /// Every term of size <= max with any domain and codomain.
  std::vector<Term> all_terms(int max) {
    std::vector<Term> out;
    for (int s = 0; s <= max; ++s)
      for (const Type& x : types_)
        for (const Type& y : types_) {
          const auto& v = exactly(s, x, y);
          out.insert(out.end(), v.begin(), v.end());
        }
    return out;
  }

  /// Unordered pairs {l, r} (l listed no later than r) of parallel terms,
  /// strong and, where the family has them, weak.
  std::vector<Equation> equations(int max) {
    std::vector<Equation> out;
    const bool weak = cfg_.weak && sig_.family != Family::Exc;
    for (const Type& x : types_)
      for (const Type& y : types_) {
        const std::vector<Term> ts = up_to(max, x, y);
        for (std::size_t i = 0; i < ts.size(); ++i)
          for (std::size_t j = i; j < ts.size(); ++j) {
            out.push_back({ts[i], ts[j], Strength::Strong});
            if (weak) out.push_back({ts[i], ts[j], Strength::Weak});
          }
      }
    return out;
  }

 private:
  using Key = std::tuple<int, std::string, std::string, int>;

  std::vector<Atom> atoms_of_size(int k, const Type& z, const Type& y, Mode mode) {
    std::vector<Atom> out;
    const Family f = sig_.family;
    if (k == 1) {
      for (const auto& op : gens_)
        if (op.dom == z && op.cod == y) out.push_back(atoms::gen(op));
      if (f != Family::States && z.is_empty() && !y.is_empty()) out.push_back(atoms::copa(y));
      if (f == Family::Exc && sig_.param && z == *sig_.param) out.push_back(atoms::throw_to(z, y));
      if (f == Family::Excore && sig_.param) {
        const Type& p = *sig_.param;
        if (z == p && y.is_empty()) out.push_back(atoms::tag(p));
        if (mode != Mode::Propagator && z.is_empty() && y == p) out.push_back(atoms::untag(p));
      }
      if (f == Family::States && sig_.value) {
        const Type& v = *sig_.value;
        if (y.is_unit() && !z.is_unit() && !z.is_empty()) out.push_back(atoms::pa(z));
        if (z.is_unit() && y == v) out.push_back(atoms::lookup(v));
        if (mode != Mode::Propagator && z == v && y.is_unit()) out.push_back(atoms::update(v));
      }
    }
    if (f == Family::Exc && sig_.param) {
      // try (a) catch (b): 1 + |a| + |b| = k
      const Type& p = *sig_.param;
      for (int ka = 0; ka <= k - 1; ++ka) {
        const auto& as = exactly(ka, z, y, Mode::Propagator);
        if (as.empty()) continue;
        const auto& bs = exactly(k - 1 - ka, p, y, Mode::Propagator);
        for (const Term& a : as)
          for (const Term& b : bs) out.push_back(atoms::try_catch(p, a, b));
      }
    }
    if (f == Family::Excore && sig_.param) {
      const Type& p = *sig_.param;
      if (cfg_.with_try && z == y) {
        for (int ka = 0; ka <= k - 1; ++ka) {
          const auto& as = exactly(ka, z, y, Mode::Propagator);
          if (as.empty()) continue;
          const auto& ks = exactly(k - 1 - ka, y, y, Mode::Handler);
          for (const Term& a : as)
            for (const Term& h : ks) out.push_back(atoms::try_core(a, h));
        }
      }
      if (mode == Mode::Handler && z == y) {
        // CATCH(b) : y -> y, 1 + |b| = k
        for (const Term& b : exactly(k - 1, p, y, Mode::Propagator)) out.push_back(atoms::catch_core(p, b));
      }
    }
    return out;
  }

  Signature sig_;
  EnumConfig cfg_;
  std::vector<OpDecl> gens_;
  std::vector<Type> types_;
  std::map<Key, std::vector<Term>> memo_;
};

/// Random well-typed term of at most `budget` atoms, starting at a random
/// type. Used for round-trip testing.
class RandomTerms {
 public:
  RandomTerms(Signature sig, std::uint64_t seed) : sig_(std::move(sig)), rng_(seed) {}

  Term next(int budget) {
    const auto ts = sig_.all_types();
    return walk(ts[pick(ts.size())], budget, false);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Term walk(const Type& from, int budget, bool propagator) {
    Term t = identity(from);
    const int len = static_cast<int>(pick(static_cast<std::size_t>(budget) + 1));
    for (int i = 0; i < len; ++i) {
      auto opts = options(t.cod, budget - i, propagator);
      if (opts.empty()) break;
      t = compose(single(opts[pick(opts.size())]), t);
    }
    return t;
  }

  // candidate atoms from `z`; compound atoms get random sub-terms
  std::vector<Atom> options(const Type& z, int budget, bool propagator) {
    std::vector<Atom> out;
    const Family f = sig_.family;
    const auto ts = sig_.all_types();
    for (const auto& op : sig_.ops)
      if (op.dom == z && op.grade == kPure) out.push_back(atoms::gen(op));
    if (f != Family::States && z.is_empty())
      for (const auto& y : ts)
        if (!y.is_empty()) out.push_back(atoms::copa(y));
    if (f == Family::Exc && sig_.param && z == *sig_.param)
      for (const auto& y : ts) out.push_back(atoms::throw_to(z, y));
    if (f == Family::Excore && sig_.param) {
      const Type& p = *sig_.param;
      if (z == p) out.push_back(atoms::tag(p));
      if (!propagator && z.is_empty()) out.push_back(atoms::untag(p));
    }
    if (f == Family::States && sig_.value) {
      const Type& v = *sig_.value;
      if (!z.is_unit() && !z.is_empty()) out.push_back(atoms::pa(z));
      if (z.is_unit()) out.push_back(atoms::lookup(v));
      if (!propagator && z == v) out.push_back(atoms::update(v));
    }
    if (budget >= 2 && sig_.param && (f == Family::Exc || f == Family::Excore) && pick(3) == 0) {
      const Type& p = *sig_.param;
      Term a = walk(z, budget / 2, true);
      if (f == Family::Exc) {
        Term b = walk_to(p, a.cod, budget / 2);
        if (b.cod == a.cod) out.push_back(atoms::try_catch(p, a, b));
      } else {
        Term b = walk_to(p, a.cod, budget / 2);
        if (b.cod == a.cod && a.cod == z) {
          Term k = single(atoms::catch_core(p, b));
          out.push_back(atoms::try_core(a, k));
        } else if (a.cod == z) {
          out.push_back(atoms::try_core(a, identity(z)));
        }
      }
    }
    return out;
  }

  // a propagator from `from` that ends at `to` if a short walk finds one
  Term walk_to(const Type& from, const Type& to, int budget) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Term t = walk(from, budget, true);
      if (t.cod == to) return t;
    }
    return identity(from);
  }

  Signature sig_;
  std::mt19937_64 rng_;
};

}  // namespace deco
