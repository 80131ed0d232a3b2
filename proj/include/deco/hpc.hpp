// Bounded theories.
//
// A Universe is every well-typed term of at most `depth` atoms. A theory is
// represented inside it by two partitions, strong and weak, closed under a
// rule set by saturation. Rules are interpreted as follows:
//   refl/sym/trans      the partitions are equivalences (union-find)
//   subs/repl           congruence under one-atom pre/post composition,
//                       restricted to the grade bound of the rule's `h`
//   try                 congruence of try (-) catch (b)
//   ==to~~              strong merges are also weak merges
//   premise-free rules  instantiated once over the universe as seeds
//   pair rules          premises C[x1] R C[x2] concluding x1 R' x2 (eq1, eq2,
//                       eq3, recover, copa-mono): found by grouping the terms
//                       on the classes of their images
//   clash               a clash-shaped term equal to a pure one adds every
//                       pure equation; clash-converse the other way round
// Each closure starts from the closure of the empty set and is rolled back
// afterwards, so an Engine answers many queries cheaply.
#pragma once

#include <chrono>
#include <memory>
#include <random>
#include <unordered_map>

#include "deco/logic.hpp"
#include "deco/parser.hpp"
#include "deco/rules.hpp"

namespace deco::hpc {

class Universe {
 public:
  Universe(Signature sig, int depth, std::vector<std::string> gens = {}, bool pure_only = false,
           std::size_t cap = 500000)
      : sig_(std::move(sig)), depth_(depth), pure_only_(pure_only) {
    if (depth < 1) throw Error("universe depth must be at least 1");
    EnumConfig cfg;
    cfg.max_size = depth;
    cfg.gens = std::move(gens);
    TermEnumerator en(sig_, cfg);
    const auto mode = sig_.family == Family::Excore ? TermEnumerator::Mode::Handler : TermEnumerator::Mode::General;
    for (const Type& x : en.types())
      for (const Type& y : en.types()) {
        std::vector<Term> ts;
        for (int s = 0; s <= depth; ++s) {
          for (const Term& t : en.exactly(s, x, y, mode))
            if (!pure_only || is_pure(t)) ts.push_back(t);
          if (terms_.size() + ts.size() > cap)
            throw Error("universe exceeds the cap of " + std::to_string(cap) + " terms");
        }
        if (ts.empty()) continue;
        std::vector<int>& ids = homs_[{x.name, y.name}];
        for (const Term& t : ts) {
          ids.push_back(static_cast<int>(terms_.size()));
          index_.emplace(print(t), static_cast<int>(terms_.size()));
          terms_.push_back(t);
        }
        supply_[{x.name, y.name}] = std::move(ts);
        homsets_.push_back({x, y});
      }
  }

  const Signature& signature() const { return sig_; }
  int depth() const { return depth_; }
  bool pure_only() const { return pure_only_; }
  std::size_t size() const { return terms_.size(); }
  const Term& term(int i) const { return terms_[i]; }

  std::optional<int> find(const Term& t) const {
    auto it = index_.find(print(t));
    if (it == index_.end() || terms_[it->second].dom != t.dom) return std::nullopt;
    return it->second;
  }
  bool contains(const Equation& e) const { return find(e.lhs) && find(e.rhs); }

  const std::vector<std::pair<Type, Type>>& homsets() const { return homsets_; }

  const std::vector<int>& hom(const Type& x, const Type& y) const {
    static const std::vector<int> none;
    auto it = homs_.find({x.name, y.name});
    return it == homs_.end() ? none : it->second;
  }

  const std::vector<Term>& terms_of(const Type& x, const Type& y) const {
    static const std::vector<Term> none;
    auto it = supply_.find({x.name, y.name});
    return it == supply_.end() ? none : it->second;
  }

 private:
  using Key = std::pair<std::string, std::string>;
  Signature sig_;
  int depth_;
  bool pure_only_;
  std::vector<Term> terms_;
  std::unordered_map<std::string, int> index_;
  std::map<Key, std::vector<int>> homs_;
  std::map<Key, std::vector<Term>> supply_;
  std::vector<std::pair<Type, Type>> homsets_;
};

/// A theory inside a universe: the axioms it was generated from and the
/// strong and weak partitions of its closure. Class labels are the least
/// term id of each class.
struct TheoryApprox {
  std::shared_ptr<const Universe> universe;
  std::vector<Equation> axioms;
  std::vector<int> strong, weak;  // weak is empty for logics without weak equations

  int depth() const { return universe->depth(); }
  bool has_weak() const { return !weak.empty(); }

  bool same(int a, int b, Strength s) const {
    if (s == Strength::Weak && has_weak()) return weak[a] == weak[b];
    return strong[a] == strong[b];
  }

  /// False also when a side lies outside the universe.
  bool contains(const Equation& e) const {
    auto l = universe->find(e.lhs), r = universe->find(e.rhs);
    return l && r && same(*l, *r, e.strength);
  }

  bool subset_of(const TheoryApprox& o) const {
    for (std::size_t i = 0; i < strong.size(); ++i) {
      if (o.strong[i] != o.strong[strong[i]]) return false;
      if (has_weak() && o.has_weak() && o.weak[i] != o.weak[weak[i]]) return false;
    }
    return true;
  }

  bool operator==(const TheoryApprox& o) const { return strong == o.strong && weak == o.weak; }

  /// Number of equations (reflexive ones included) in the closure.
  std::size_t size() const {
    auto pairs = [](const std::vector<int>& lab) {
      std::map<int, std::size_t> n;
      for (int l : lab) ++n[l];
      std::size_t s = 0;
      for (auto [l, k] : n) s += k * (k + 1) / 2;
      return s;
    };
    return pairs(strong) + (has_weak() ? pairs(weak) : 0);
  }

  /// Every equation of the universe.
  bool maximal() const {
    for (const auto& [x, y] : universe->homsets()) {
      const auto& ids = universe->hom(x, y);
      for (int i : ids)
        if (strong[i] != strong[ids.front()]) return false;
    }
    return true;
  }

  /// All non-reflexive strong equations, each class as a star on its label.
  std::vector<Equation> strong_equations() const {
    std::vector<Equation> out;
    for (std::size_t i = 0; i < strong.size(); ++i)
      if (strong[i] != static_cast<int>(i))
        out.push_back({universe->term(strong[i]), universe->term(static_cast<int>(i)), Strength::Strong});
    return out;
  }
};

class Engine {
 public:
  Engine(std::shared_ptr<const Universe> u, rules::RuleSet rs) : u_(std::move(u)), rs_(std::move(rs)) {
    if (rs_.family != u_->signature().family) throw Error("rule set and universe belong to different logics");
    setup();
    saturate(true);
    base_ = snapshot({});
    logging_ = true;
  }

  const Universe& universe() const { return *u_; }
  std::shared_ptr<const Universe> universe_ptr() const { return u_; }
  const rules::RuleSet& rules() const { return rs_; }
  bool has_weak() const { return weak_on_; }

  /// Closure of the empty set of axioms.
  const TheoryApprox& base() const { return base_; }

  /// Closure of the axioms. Axioms with a side outside the universe are
  /// dropped; `dropped` counts them.
  TheoryApprox closure(const std::vector<Equation>& axioms, std::size_t* dropped = nullptr) {
    Scope s(*this);
    add(axioms, dropped);
    saturate();
    return snapshot(axioms);
  }

  /// Whether every goal lies in the closure of the axioms (within the
  /// universe; a goal outside it is not derivable).
  bool derives(const std::vector<Equation>& axioms, const std::vector<Equation>& goals) {
    std::vector<std::tuple<int, int, Strength>> ids;
    for (const auto& g : goals) {
      auto l = u_->find(g.lhs), r = u_->find(g.rhs);
      if (!l || !r) return false;
      ids.emplace_back(*l, *r, g.strength);
    }
    // once (clash) has fired every pure equation is a conclusion
    auto reached = [&] {
      for (auto [l, r, st] : ids)
        if (!same(l, r, st) && !(max0_ && pure_[l] && pure_[r])) return false;
      return true;
    };
    Scope s(*this);
    add(axioms, nullptr);
    saturate(false, reached);
    return reached();
  }

  /// Every pure equation of the universe (stars per hom-set).
  std::vector<Equation> all_pure_equations() const {
    std::vector<Equation> out;
    for (const auto& [x, y] : u_->homsets()) {
      int first = -1;
      for (int i : u_->hom(x, y)) {
        if (!pure_[i]) continue;
        if (first < 0)
          first = i;
        else
          out.push_back({u_->term(first), u_->term(i), Strength::Strong});
      }
    }
    return out;
  }

 private:
  enum { S = 0, W = 1 };

  struct Rel {
    std::vector<int> parent, size, next;
    std::vector<std::vector<std::pair<int, int>>> out;  // per term: (op, result)
    std::unordered_map<std::uint64_t, int> table;        // (op, root) -> a result
  };

  struct Undo {
    int rel;
    int a, b;              // union: root a absorbed b; insert: a = -1
    std::uint64_t key;
  };

  // strong/weak congruence-key images for a pair rule
  struct PairScan {
    std::string name;
    Strength conclusion;
    std::vector<Strength> rels;
    struct Entry {
      int term, ctx;
      std::vector<int> images;
    };
    std::vector<Entry> entries;
  };

  struct Scope {
    Engine& e;
    std::size_t mark;
    bool max0;
    explicit Scope(Engine& en) : e(en), mark(en.log_.size()), max0(en.max0_) {}
    ~Scope() {
      e.rollback(mark);
      e.max0_ = max0;
    }
  };

  // ---- setup ---------------------------------------------------------------

  static bool is_pair_rule(const rules::Rule& r) {
    if (r.metas.size() != 2 || r.premises.empty()) return false;
    const auto& a = r.metas[0];
    const auto& b = r.metas[1];
    if (a.dom != b.dom || a.cod != b.cod || a.bound != b.bound) return false;
    if (r.conclusion.lhs != rules::Chain{rules::notation::m(a.name)} ||
        r.conclusion.rhs != rules::Chain{rules::notation::m(b.name)})
      return false;
    for (const auto& p : r.premises)
      if (rename(p.lhs, a.name, b.name) != p.rhs) return false;
    return r.premises.size() <= 2;
  }

  static rules::Chain rename(rules::Chain c, const std::string& from, const std::string& to) {
    for (auto& p : c) {
      if (p.kind == rules::PieceKind::Var && p.var == from) p.var = to;
      for (auto& a : p.args) a = rename(a, from, to);
    }
    return c;
  }

  bool bound_ok(const rules::Rule& r, const std::string& meta, Grade g) const {
    for (const auto& mv : r.metas)
      if (mv.name == meta) return g <= rules::bound_grade(mv.bound);
    throw Error("rule (" + r.name + ") has no metavariable " + meta);
  }

  const rules::Rule* rule(std::initializer_list<const char*> names) const {
    for (const char* n : names)
      if (const auto* r = rs_.find(n)) return r;
    return nullptr;
  }

  void setup() {
    const std::size_t n = u_->size();
    const Signature& sig = u_->signature();
    pure_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pure_[i] = is_pure(u_->term(static_cast<int>(i)));

    const bool strong_eq = rule({"trans", "trans=="}) && rule({"sym", "sym=="}) && rule({"refl", "refl=="});
    if (!strong_eq) throw Error("the rule set lacks the strong equivalence rules");
    weak_on_ = rs_.has("refl~~");
    if (weak_on_ && !(rs_.has("sym~~") && rs_.has("trans~~"))) throw Error("the rule set lacks the weak equivalence rules");
    s2w_ = rs_.has("==to~~");

    const rules::Rule* subs[2] = {rule({"subs", "subs=="}), rs_.find("subs~~")};
    const rules::Rule* repl[2] = {rule({"repl", "repl=="}), rs_.find("repl~~")};
    const rules::Rule* tryr = rs_.find("try");

    std::unordered_map<std::string, int> ops;
    auto op = [&](const std::string& k) { return ops.emplace(k, static_cast<int>(ops.size())).first->second; };
    for (int r = 0; r < (weak_on_ ? 2 : 1); ++r) {
      rel_[r].parent.resize(n);
      rel_[r].size.assign(n, 1);
      rel_[r].next.resize(n);
      rel_[r].out.assign(n, {});
      for (std::size_t i = 0; i < n; ++i) rel_[r].parent[i] = rel_[r].next[i] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Term& x = u_->term(static_cast<int>(i));
      if (x.atoms.empty()) continue;
      const Atom& last = x.atoms.back();
      const Atom& first = x.atoms.front();
      Term prefix{x.dom, last.dom, {x.atoms.begin(), x.atoms.end() - 1}};
      Term suffix{first.cod, x.cod, {x.atoms.begin() + 1, x.atoms.end()}};
      const int pi = *u_->find(prefix), si = *u_->find(suffix);
      const int post = op("post " + print(last)), pre = op("pre " + print(first));
      for (int r = 0; r < (weak_on_ ? 2 : 1); ++r) {
        if (repl[r] && bound_ok(*repl[r], "h", last.grade)) rel_[r].out[pi].push_back({post, static_cast<int>(i)});
        if (subs[r] && bound_ok(*subs[r], "h", first.grade)) rel_[r].out[si].push_back({pre, static_cast<int>(i)});
      }
      if (tryr && x.atoms.size() == 1 && last.kind == AtomKind::TryCatch) {
        const int ai = *u_->find(last.subs[0]);
        rel_[S].out[ai].push_back({op("try " + print(last.subs[1])), static_cast<int>(i)});
      }
    }
    for (int r = 0; r < (weak_on_ ? 2 : 1); ++r)
      for (std::size_t i = 0; i < n; ++i)
        for (auto [o, res] : rel_[r].out[i]) rel_[r].table.emplace(key(o, static_cast<int>(i)), res);

    rules::TermSupply supply = [this](const Type& x, const Type& y) -> const std::vector<Term>& {
      return u_->terms_of(x, y);
    };
    static const std::set<std::string> structural{"refl", "sym", "trans", "subs", "repl", "refl==", "sym==",
                                                  "trans==", "subs==", "repl==", "refl~~", "sym~~", "trans~~",
                                                  "subs~~", "repl~~", "==to~~", "try"};
    for (const auto& r : rs_.rules) {
      if (structural.count(r.name)) continue;
      if (r.name == "clash" || r.name == "clash-converse") {
        setup_clash(r);
        continue;
      }
      if (r.premises.empty() && r.side.empty()) {
        rules::for_each_instance(r, sig, supply, u_->depth(), [&](const rules::Instance& in) {
          auto l = u_->find(in.conclusion.lhs), rr = u_->find(in.conclusion.rhs);
          if (l && rr) seed(in.conclusion.strength, *l, *rr);
        });
        continue;
      }
      if (is_pair_rule(r)) {
        setup_pair(r);
        continue;
      }
      throw Error("no saturation procedure for rule (" + r.name + ")");
    }
  }

  void seed(Strength s, int a, int b) {
    if (s == Strength::Weak && !weak_on_) throw Error("weak seed in a logic without weak equations");
    pending_.push_back({s == Strength::Strong ? S : W, a, b});
  }

  // candidate instantiations of metavariable `mv` with its type variables bound
  template <class F>
  void each_candidate(const rules::Meta& mv, F&& f) const {
    const Signature& sig = u_->signature();
    for (const auto& [x, y] : u_->homsets()) {
      rules::Binding b;
      auto bind = [&](const rules::TypeRef& t, const Type& ty) {
        if (!t.var) return rules::resolve(t, b, sig) == ty;
        auto it = b.types.find(t.name);
        if (it != b.types.end()) return it->second == ty;
        b.types[t.name] = ty;
        return true;
      };
      if (!bind(mv.dom, x) || !bind(mv.cod, y)) continue;
      for (int i : u_->hom(x, y)) {
        if (decoration_of(u_->term(i)) > rules::bound_grade(mv.bound)) continue;
        b.terms[mv.name] = u_->term(i);
        f(i, b);
      }
    }
  }

  // extends a binding over the type variables of `chains` left unbound
  void each_completion(const rules::Binding& b, const std::vector<const rules::Chain*>& chains,
                       const std::function<void(const rules::Binding&, int)>& f) const {
    std::vector<std::string> free;
    std::function<void(const rules::Chain&)> walk = [&](const rules::Chain& c) {
      for (const auto& p : c) {
        if (p.type.var && !b.types.count(p.type.name) &&
            std::find(free.begin(), free.end(), p.type.name) == free.end())
          free.push_back(p.type.name);
        for (const auto& a : p.args) walk(a);
      }
    };
    for (const auto* c : chains) walk(*c);
    const auto types = u_->signature().all_types();
    rules::Binding cur = b;
    int ctx = 0;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == free.size()) return f(cur, ctx++);
      for (const auto& t : types) {
        cur.types[free[i]] = t;
        go(i + 1);
      }
    };
    go(0);
  }

  void setup_pair(const rules::Rule& r) {
    PairScan ps{r.name, r.conclusion.strength, {}, {}};
    std::vector<const rules::Chain*> chains;
    for (const auto& p : r.premises) {
      ps.rels.push_back(p.strength);
      chains.push_back(&p.lhs);
      if (p.strength == Strength::Weak && !weak_on_) throw Error("(" + r.name + ") needs weak equations");
    }
    const Signature& sig = u_->signature();
    each_candidate(r.metas[0], [&](int t, const rules::Binding& b) {
      each_completion(b, chains, [&](const rules::Binding& full, int ctx) {
        PairScan::Entry e{t, ctx, {}};
        for (const auto* c : chains) {
          auto img = rules::build(*c, full, sig);
          std::optional<int> id = img ? u_->find(*img) : std::nullopt;
          if (!id) return;
          e.images.push_back(*id);
        }
        ps.entries.push_back(std::move(e));
      });
    });
    pairs_.push_back(std::move(ps));
  }

  void setup_clash(const rules::Rule& r) {
    // the clash-shaped side is the lhs of the premise (clash) or conclusion (clash-converse)
    const rules::Chain& shape = r.premises.empty() ? r.conclusion.lhs : r.premises[0].lhs;
    const Signature& sig = u_->signature();
    std::vector<int>& out = r.name == "clash" ? clash_ : clash_converse_;
    each_candidate(r.metas[0], [&](int t, const rules::Binding& b) {
      if (u_->term(t).dom.is_empty()) return;  // side condition: non-empty domain
      each_completion(b, {&shape}, [&](const rules::Binding& full, int) {
        auto img = rules::build(shape, full, sig);
        if (auto id = img ? u_->find(*img) : std::nullopt) out.push_back(*id);
      });
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (r.name == "clash") clash_on_ = true;
    else clash_converse_on_ = true;
  }

  // ---- union-find with undo ------------------------------------------------

  static std::uint64_t key(int op, int root) {
    return (static_cast<std::uint64_t>(op) << 32) | static_cast<std::uint32_t>(root);
  }

  int find(int r, int x) const {
    const auto& p = rel_[r].parent;
    while (p[x] != x) x = p[x];
    return x;
  }

  bool same(int a, int b, Strength s) const {
    if (s == Strength::Weak && weak_on_) return find(W, a) == find(W, b);
    return find(S, a) == find(S, b);
  }

  void merge(int r, int a, int b) {
    Rel& R = rel_[r];
    int ra = find(r, a), rb = find(r, b);
    if (ra == rb) return;
    if (R.size[ra] < R.size[rb]) std::swap(ra, rb);
    int m = rb;
    do {
      for (auto [o, res] : R.out[m]) {
        const std::uint64_t k = key(o, ra);
        auto it = R.table.find(k);
        if (it != R.table.end()) {
          pending_.push_back({r, res, it->second});
        } else {
          R.table.emplace(k, res);
          if (logging_) log_.push_back({r, -1, 0, k});
        }
      }
      m = R.next[m];
    } while (m != rb);
    R.parent[rb] = ra;
    ++merges_;
    R.size[ra] += R.size[rb];
    std::swap(R.next[ra], R.next[rb]);
    if (logging_) log_.push_back({r, ra, rb, 0});
    if (r == S && weak_on_ && s2w_) pending_.push_back({W, a, b});
  }

  void rollback(std::size_t mark) {
    pending_.clear();
    while (log_.size() > mark) {
      const Undo u = log_.back();
      log_.pop_back();
      Rel& R = rel_[u.rel];
      if (u.a < 0) {
        R.table.erase(u.key);
      } else {
        std::swap(R.next[u.a], R.next[u.b]);
        R.size[u.a] -= R.size[u.b];
        R.parent[u.b] = u.b;
      }
    }
  }

  void drain() {
    while (!pending_.empty()) {
      auto [r, a, b] = pending_.back();
      pending_.pop_back();
      merge(r, a, b);
    }
  }

  // ---- saturation ----------------------------------------------------------

  void add(const std::vector<Equation>& axioms, std::size_t* dropped) {
    for (const auto& e : axioms) {
      auto l = u_->find(e.lhs), r = u_->find(e.rhs);
      if (!l || !r) {
        if (dropped) ++*dropped;
        continue;
      }
      pending_.push_back({e.strength == Strength::Weak && weak_on_ ? W : S, *l, *r});
    }
  }

  bool run_pairs() {
    bool changed = false;
    std::unordered_map<std::uint64_t, int> seen;
    for (const auto& ps : pairs_) {
      seen.clear();
      const int cr = ps.conclusion == Strength::Weak && weak_on_ ? W : S;
      for (const auto& e : ps.entries) {
        std::uint64_t k = static_cast<std::uint64_t>(e.ctx) << 48;
        int shift = 24;
        for (std::size_t i = 0; i < e.images.size(); ++i, shift -= 24) {
          const int rr = ps.rels[i] == Strength::Weak && weak_on_ ? W : S;
          k |= static_cast<std::uint64_t>(find(rr, e.images[i])) << shift;
        }
        auto [it, fresh] = seen.emplace(k, e.term);
        if (!fresh && find(cr, it->second) != find(cr, e.term)) {
          pending_.push_back({cr, it->second, e.term});
          changed = true;
        }
      }
    }
    return changed;
  }

  bool all_pure_merged() const {
    for (const auto& [x, y] : u_->homsets()) {
      int first = -1;
      for (int i : u_->hom(x, y)) {
        if (!pure_[i]) continue;
        if (first < 0) first = i;
        else if (find(S, i) != find(S, first)) return false;
      }
    }
    return true;
  }

  int first_pure(const Term& t) const {
    for (int i : u_->hom(t.dom, t.cod))
      if (pure_[i]) return i;
    return -1;
  }

  bool run_clash() {
    bool changed = false;
    if (clash_on_ && !max0_) {
      std::vector<char> has_pure(u_->size(), 0);
      for (std::size_t i = 0; i < u_->size(); ++i)
        if (pure_[i]) has_pure[find(S, static_cast<int>(i))] = 1;
      for (int c : clash_)
        if (has_pure[find(S, c)]) {
          max0_ = true;
          for (const auto& e : all_pure_equations()) pending_.push_back({S, *u_->find(e.lhs), *u_->find(e.rhs)});
          changed = true;
          break;
        }
    }
    if (clash_converse_on_ && all_pure_merged()) {
      for (int c : clash_converse_) {
        const int p = first_pure(u_->term(c));
        if (p >= 0 && find(S, p) != find(S, c)) {
          pending_.push_back({S, p, c});
          changed = true;
        }
      }
    }
    return changed;
  }

  // the scans only run after a round that merged something; the state left
  // by the constructor is saturated
  void saturate(bool force = false, const std::function<bool()>& done = {}) {
    std::size_t seen = force ? merges_ - 1 : merges_;
    for (;;) {
      drain();
      if (merges_ == seen || (done && done())) break;
      seen = merges_;
      bool changed = run_pairs();
      changed = run_clash() || changed;
      if (!changed || (done && done())) break;
    }
  }

  TheoryApprox snapshot(std::vector<Equation> axioms) const {
    TheoryApprox t{u_, std::move(axioms), {}, {}};
    auto labels = [&](int r) {
      std::vector<int> lab(u_->size()), least(u_->size(), -1);
      for (std::size_t i = 0; i < u_->size(); ++i) {
        const int root = find(r, static_cast<int>(i));
        if (least[root] < 0) least[root] = static_cast<int>(i);
        lab[i] = least[root];
      }
      return lab;
    };
    t.strong = labels(S);
    if (weak_on_) t.weak = labels(W);
    return t;
  }

  std::shared_ptr<const Universe> u_;
  rules::RuleSet rs_;
  Rel rel_[2];
  std::vector<char> pure_;
  bool weak_on_ = false, s2w_ = false;
  std::vector<PairScan> pairs_;
  std::vector<int> clash_, clash_converse_;
  bool clash_on_ = false, clash_converse_on_ = false, max0_ = false;
  std::vector<std::tuple<int, int, int>> pending_;
  std::vector<Undo> log_;
  bool logging_ = false;
  std::size_t merges_ = 0;
  TheoryApprox base_;
};

/// Closure of a set of axioms under a rule set, at a depth.
inline TheoryApprox closure(const std::vector<Equation>& axioms, const rules::RuleSet& rs, const Signature& sig,
                            int depth, std::vector<std::string> gens = {}) {
  auto u = std::make_shared<const Universe>(sig, depth, std::move(gens), rs.pure_only);
  Engine e(u, rs);
  return e.closure(axioms);
}

// ---------------------------------------------------------------------------
// The Galois connection between the pure sublogic and the full logic

class Galois {
 public:
  Galois(const Signature& sig, int depth, std::vector<std::string> gens = {})
      : pure_(std::make_shared<const Universe>(sig, depth, gens, true), rules::pure_rules(sig.family)),
        full_(std::make_shared<const Universe>(sig, depth, gens, false), rules::rules_for(sig.family)) {}

  Engine& pure() { return pure_; }
  Engine& full() { return full_; }

  /// Theory of the full logic generated by the equations of T0.
  TheoryApprox F(const TheoryApprox& t0) { return full_.closure(t0.strong_equations()); }

  /// The pure theorems of T.
  TheoryApprox G(const TheoryApprox& t) {
    const Universe& pu = pure_.universe();
    TheoryApprox g{pure_.universe_ptr(), {}, std::vector<int>(pu.size()), {}};
    std::map<int, int> first;  // label in T -> least pure id
    for (std::size_t i = 0; i < pu.size(); ++i) {
      const int j = *full_.universe().find(pu.term(static_cast<int>(i)));
      auto [it, fresh] = first.emplace(t.strong[j], static_cast<int>(i));
      g.strong[i] = it->second;
    }
    g.axioms = g.strong_equations();
    return g;
  }

 private:
  Engine pure_, full_;
};

// ---------------------------------------------------------------------------
// Completeness sweep

struct SweepConfig {
  Family family = Family::Excore;
  int depth = 3;        // equations between terms of at most this many atoms
  int slack = 2;        // the universe holds terms of up to depth + slack atoms
  int carrier_max = 2;  // largest carrier of the oracle models
  std::vector<std::string> gens;  // generators used; empty = all
  std::optional<Signature> sig;   // default: the builtin signature of the family
  bool oracle = true;
  std::size_t cap = 500000;
};

struct SweepEntry {
  Equation eq;
  PureReduction e0;
  bool forward = false;   // e derivable from E_0
  bool backward = false;  // E_0 derivable from e
  bool oracle = true;     // decider agrees with evaluation in every model
  std::string note;

  bool ok() const { return forward && backward && oracle && note.empty(); }
};

struct Witness {
  Equation eq;
  Verdict verdict = Verdict::Equal;
  bool derivable = true;           // inside the bounded closure of the empty set
  std::optional<std::string> countermodel;

  bool ok() const { return verdict != Verdict::Equal && !derivable && countermodel.has_value(); }
};

struct SweepReport {
  SweepConfig config;
  std::size_t universe_size = 0;
  std::size_t models = 0;
  std::vector<SweepEntry> entries;
  Witness witness;

  std::size_t ok_count() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.ok(); }));
  }
  std::size_t mismatches() const { return entries.size() - ok_count(); }
  bool ok() const { return mismatches() == 0 && witness.ok(); }

  std::string text() const {
    std::vector<std::string> lines;
    for (const auto& e : entries) {
      std::string s = "SWEEP " + print(e.eq) + (e.ok() ? " OK" : " MISMATCH");
      if (!e.ok()) {
        if (!e.note.empty()) s += " " + e.note;
        if (!e.forward) s += " forward";
        if (!e.backward) s += " backward";
        if (!e.oracle) s += " oracle";
      }
      lines.push_back(s);
    }
    std::sort(lines.begin(), lines.end());
    std::ostringstream out;
    out << "# logic=" << family_name(config.family) << " depth=" << config.depth
        << " universe-depth=" << config.depth + config.slack << " universe-terms=" << universe_size
        << " carrier-max=" << config.carrier_max << " models=" << models << "\n";
    for (const auto& l : lines) out << l << "\n";
    out << "WITNESS " << print(witness.eq) << " " << verdict_name(witness.verdict)
        << (witness.derivable ? " derivable" : " underivable");
    if (witness.countermodel) out << " countermodel: " << *witness.countermodel;
    out << "\n";
    out << "SUMMARY total=" << entries.size() << " ok=" << ok_count() << " mismatch=" << mismatches() << "\n";
    return out.str();
  }
};

/// The equation that must stay underivable for the family's theory to be
/// consistent.
inline Equation consistency_witness(const Signature& sig) {
  switch (sig.family) {
    case Family::Exc: return parse_equation("throw[" + sig.P().name + "] == id[" + sig.P().name + "]", sig);
    case Family::Excore: return parse_equation("untag == copa[" + sig.P().name + "]", sig);
    case Family::States: return parse_equation("update == pa[" + sig.V().name + "]", sig);
  }
  throw Error("unknown family");
}

/// Verdict of the witness over models whose distinguished type has exactly
/// two elements, the first model falsifying it, and its bounded
/// derivability.
inline Witness check_witness(const Signature& sig, Engine& engine) {
  Witness w;
  w.eq = consistency_witness(sig);
  ModelBounds b;
  b.min_size = 1;
  b.max_size = 2;
  const Type& d = sig.family == Family::States ? sig.V() : sig.P();
  b.per_type[d.name] = {2, 2};
  const auto models = enumerate_models(sig, b);
  w.verdict = verdict(reduce_to_pure(w.eq, sig), models);
  for (const auto& m : models)
    if (!sem_holds(w.eq, m)) {
      w.countermodel = describe_model(m, sig);
      break;
    }
  w.derivable = engine.base().contains(w.eq);
  return w;
}

inline SweepReport sweep(const SweepConfig& cfg) {
  const Signature sig = cfg.sig ? *cfg.sig : builtin_signature(cfg.family);
  if (sig.family != cfg.family) throw Error("signature and sweep logic differ");
  SweepReport rep;
  rep.config = cfg;
  auto u = std::make_shared<const Universe>(sig, cfg.depth + cfg.slack, cfg.gens, false, cfg.cap);
  rep.universe_size = u->size();
  Engine engine(u, rules::rules_for(sig.family));
  const std::vector<Equation> max0 = engine.all_pure_equations();
  std::optional<TheoryApprox> top;  // closure of every pure equation

  ModelBounds mb;
  mb.max_size = cfg.carrier_max;
  // one-element value types are left out: the state theory may collapse there
  if (sig.family == Family::States) mb.per_type[sig.V().name] = {std::min(2, cfg.carrier_max), cfg.carrier_max};
  const std::vector<FiniteModel> models = cfg.oracle ? enumerate_models(sig, mb) : std::vector<FiniteModel>{};
  rep.models = models.size();

  EnumConfig ec;
  ec.max_size = cfg.depth;
  ec.gens = cfg.gens;
  TermEnumerator en(sig, ec);
  for (const Equation& e : en.equations(cfg.depth)) {
    SweepEntry s{e, {}, false, false, true, ""};
    try {
      s.e0 = reduce_to_pure(e, sig);
    } catch (const Error& err) {
      s.note = "decider-error";
      rep.entries.push_back(std::move(s));
      continue;
    }
    switch (s.e0.kind) {
      case PureReduction::Kind::EmptyDomain:
        s.forward = engine.base().contains(e);
        s.backward = true;
        break;
      case PureReduction::Kind::Inconsistent:
        if (!top) top = engine.closure(max0);
        s.forward = top->contains(e);
        s.backward = engine.derives({e}, max0);
        break;
      case PureReduction::Kind::PureEqs:
        for (const auto& p : s.e0.eqs)
          if (!u->contains(p)) s.note = "outside-universe";
        s.forward = engine.derives(s.e0.eqs, {e});
        s.backward = engine.derives({e}, s.e0.eqs);
        break;
    }
    for (const auto& m : models)
      if (check(e, sig, m) != sem_holds(e, m)) {
        s.oracle = false;
        break;
      }
    rep.entries.push_back(std::move(s));
  }
  rep.witness = check_witness(sig, engine);
  return rep;
}

}  // namespace deco::hpc
