#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "deco/hpc.hpp"

using namespace deco;
using deco::testing::E;

namespace {

// s : N -> N and zero : Unit -> N, no exceptions in sight
Signature peano() {
  Signature s;
  s.name = "peano";
  s.family = Family::Exc;
  s.types = {Type{"N"}};
  s.ops = {{"s", Type{"N"}, Type{"N"}, kPure}, {"zero", Type::unit(), Type{"N"}, kPure}};
  return s;
}

hpc::Engine pure_engine(const Signature& sig, int depth) {
  return hpc::Engine(std::make_shared<const hpc::Universe>(sig, depth, std::vector<std::string>{}, true),
                     rules::pure_rules(sig.family));
}

std::vector<Equation> eqs(std::initializer_list<const char*> xs, const Signature& sig) {
  std::vector<Equation> out;
  for (const char* x : xs) out.push_back(E(x, sig));
  return out;
}

Equation random_equation(const hpc::Universe& u, std::mt19937_64& rng, Strength s = Strength::Strong) {
  for (;;) {
    const auto& hs = u.homsets();
    const auto& [x, y] = hs[std::uniform_int_distribution<std::size_t>(0, hs.size() - 1)(rng)];
    const auto& ids = u.hom(x, y);
    if (ids.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    return {u.term(ids[pick(rng)]), u.term(ids[pick(rng)]), s};
  }
}

}  // namespace

TEST(Universe, IndexesEveryTermOnce) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Universe u(sig, 3);
  for (std::size_t i = 0; i < u.size(); ++i) {
    ASSERT_EQ(u.find(u.term(static_cast<int>(i))), static_cast<int>(i));
    EXPECT_LE(term_size(u.term(static_cast<int>(i))), 3);
  }
  EXPECT_THROW(hpc::Universe(sig, 6, {}, false, 1000), Error);
}

TEST(Universe, PureOnlyKeepsPureTerms) {
  hpc::Universe u(builtin_signature(Family::Exc), 3, {}, true);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_TRUE(is_pure(u.term(static_cast<int>(i))));
}

TEST(PeanoFixture, TwoAxiomsStopShortOfIdentity) {
  const auto sig = peano();
  auto en = pure_engine(sig, 4);
  const auto t = en.closure(eqs({"s . zero == zero", "s . s == s"}, sig));
  EXPECT_FALSE(t.contains(E("s == id[N]", sig)));
  EXPECT_TRUE(t.contains(E("s . s . s == s . s", sig)));
  EXPECT_TRUE(t.contains(E("s . s . s . zero == zero", sig)));
  EXPECT_TRUE(t.contains(E("s . s . zero == s . zero", sig)));
  EXPECT_FALSE(t.maximal());
}

TEST(PeanoFixture, AddingIdentityFillsTheUniverse) {
  const auto sig = peano();
  auto en = pure_engine(sig, 4);
  const auto t = en.closure(eqs({"s . zero == zero", "s . s == s", "s == id[N]"}, sig));
  EXPECT_TRUE(t.maximal());
  for (const auto& [x, y] : en.universe().homsets())
    for (int i : en.universe().hom(x, y)) EXPECT_EQ(t.strong[i], en.universe().hom(x, y).front());
}

TEST(PeanoFixture, PeriodicSuccessor) {
  const auto sig = peano();
  auto en = pure_engine(sig, 7);
  const auto t = en.closure(eqs({"s . s . s . s . s . s == id[N]"}, sig));
  EXPECT_TRUE(t.contains(E("s . s . s . s . s . s . s == s", sig)));
  EXPECT_TRUE(t.contains(E("s . s . s . s . s . s . zero == zero", sig)));
  EXPECT_FALSE(t.contains(E("s . s . s == id[N]", sig)));
}

TEST(PeanoFixture, EmptyClosureOnlyIdentifiesMapsOutOfEmpty) {
  const auto sig = peano();
  auto en = pure_engine(sig, 4);
  const auto& u = en.universe();
  std::size_t nontrivial = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (en.base().strong[i] != static_cast<int>(i)) {
      ++nontrivial;
      EXPECT_TRUE(u.term(static_cast<int>(i)).dom.is_empty()) << print(u.term(static_cast<int>(i)));
    }
  EXPECT_GT(nontrivial, 0u);
  EXPECT_TRUE(en.closure({}) == en.base());
}

TEST(Closure, ExtensiveMonotoneIdempotent) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 3), rules::exc_rules());
  std::mt19937_64 rng(7);
  for (int k = 0; k < 40; ++k) {
    std::vector<Equation> a{random_equation(en.universe(), rng)};
    std::vector<Equation> b = a;
    b.push_back(random_equation(en.universe(), rng));
    const auto ta = en.closure(a), tb = en.closure(b);
    for (const auto& e : a) EXPECT_TRUE(ta.contains(e));
    EXPECT_TRUE(en.base().subset_of(ta));
    EXPECT_TRUE(ta.subset_of(tb)) << print(a[0]) << " / " << print(b[1]);
    EXPECT_TRUE(en.closure(ta.strong_equations()) == ta);
    EXPECT_TRUE(en.closure(a) == ta);  // rollback leaves no trace
  }
}

TEST(Closure, WeakEquationsFollowStrongOnes) {
  const auto sig = builtin_signature(Family::Excore);
  hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 3), rules::excore_rules());
  std::mt19937_64 rng(11);
  for (int k = 0; k < 40; ++k) {
    const auto t = en.closure({random_equation(en.universe(), rng)});
    for (std::size_t i = 0; i < t.strong.size(); ++i)
      ASSERT_EQ(t.weak[t.strong[i]], t.weak[i]) << print(en.universe().term(static_cast<int>(i)));
  }
}

TEST(Galois, LawsOnSampledTheories) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Galois g(sig, 3);
  std::mt19937_64 rng(2024);
  const auto& pu = g.pure().universe();
  const auto& fu = g.full().universe();
  for (int k = 0; k < 100; ++k) {
    std::vector<Equation> a0, a;
    for (int i = 0, n = k % 3; i < n; ++i) a0.push_back(random_equation(pu, rng));
    for (int i = 0, n = 1 + k % 2; i < n; ++i) a.push_back(random_equation(fu, rng));
    const auto t0 = g.pure().closure(a0);
    const auto t = g.full().closure(a);
    const auto ft0 = g.F(t0), gt = g.G(t);
    EXPECT_EQ(ft0.subset_of(t), t0.subset_of(gt)) << k;
    EXPECT_TRUE(t0.subset_of(g.G(ft0))) << k;
    EXPECT_TRUE(g.F(gt).subset_of(t)) << k;
    // G of a closed theory is closed in the pure logic
    EXPECT_TRUE(g.pure().closure(gt.strong_equations()) == gt) << k;
  }
}

TEST(Galois, MonotoneOnSampledChains) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Galois g(sig, 3);
  std::mt19937_64 rng(99);
  for (int k = 0; k < 50; ++k) {
    std::vector<Equation> a0{random_equation(g.pure().universe(), rng)};
    std::vector<Equation> b0 = a0;
    b0.push_back(random_equation(g.pure().universe(), rng));
    std::vector<Equation> a{random_equation(g.full().universe(), rng)};
    std::vector<Equation> b = a;
    b.push_back(random_equation(g.full().universe(), rng));
    EXPECT_TRUE(g.F(g.pure().closure(a0)).subset_of(g.F(g.pure().closure(b0)))) << k;
    EXPECT_TRUE(g.G(g.full().closure(a)).subset_of(g.G(g.full().closure(b)))) << k;
  }
}

// a theory extended by pure equations is recovered from the theory and the
// image under F of its pure part
TEST(Galois, PureExtensionIsRecoveredThroughTheConnection) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Galois g(sig, 3);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    std::vector<Equation> a{random_equation(g.full().universe(), rng)};
    std::vector<Equation> ext = a;
    ext.push_back(random_equation(g.pure().universe(), rng));
    const auto t = g.full().closure(a);
    const auto t2 = g.full().closure(ext);
    ASSERT_TRUE(t.subset_of(t2));
    std::vector<Equation> both = a;
    for (const auto& e : g.F(g.G(t2)).strong_equations()) both.push_back(e);
    EXPECT_TRUE(g.full().closure(both) == t2) << k;
  }
}

TEST(Galois, ConnectionIsNotTrivialOnSamples) {
  const auto sig = builtin_signature(Family::Exc);
  hpc::Galois g(sig, 3);
  const auto t0 = g.pure().closure({E("f . f == f", sig)});
  const auto t = g.full().closure({E("f == throw[P] . f", sig)});
  EXPECT_FALSE(g.F(t0).subset_of(g.full().base()));
  EXPECT_TRUE(g.G(t).maximal());  // an exception-raising f forces every pure equation
}

TEST(Derivation, TagUntagCollapsesOnEmpty) {
  const auto sig = builtin_signature(Family::Excore);
  auto u = std::make_shared<const hpc::Universe>(sig, 3);
  const auto goal = E("tag . untag == id[Empty]", sig);
  hpc::Engine full(u, rules::excore_rules());
  EXPECT_TRUE(full.base().contains(goal));
  hpc::Engine cut(u, rules::excore_rules().without("eq3"));
  EXPECT_FALSE(cut.base().contains(goal));
  EXPECT_TRUE(cut.base().contains(E("untag . tag ~~ id[P]", sig)));
}

TEST(Derivation, WeakRulesStayWeak) {
  const auto sig = builtin_signature(Family::Excore);
  hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 3), rules::excore_rules());
  EXPECT_TRUE(en.base().contains(E("untag . tag ~~ id[P]", sig)));
  EXPECT_FALSE(en.base().contains(E("untag . tag == id[P]", sig)));
}

TEST(Derivation, ReductionAgreesWithClosure) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto sig = builtin_signature(f);
    hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 4), rules::rules_for(f));
    std::vector<std::string> cases = {"f . f == f", "f . c == c"};
    if (f == Family::Exc) {
      cases.push_back("f . throw[P] . c == throw[P] . f . c");
      cases.push_back("throw[P] . f == throw[P] . f . f");
    }
    if (f == Family::Excore) {
      cases.push_back("f . untag . tag . f == untag . tag . f . f");
      cases.push_back("f . untag . tag ~~ untag . tag . f . f");
    }
    if (f == Family::States) cases.push_back("f . lookup . update == lookup . update . f");
    for (const auto& text : cases) {
      const auto e = E(text, sig);
      const auto r = reduce_to_pure(e, sig);
      ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs) << text;
      EXPECT_TRUE(en.closure({e}) == en.closure(r.eqs)) << family_name(f) << ": " << text;
    }
  }
}

TEST(Derivation, PureEquationReducesToItself) {
  const auto sig = builtin_signature(Family::Exc);
  const auto e = E("f . f . c == f . c", sig);
  const auto r = reduce_to_pure(e, sig);
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  EXPECT_EQ(r.eqs, std::vector<Equation>{e});
}

TEST(Derivation, EmptyDomainEquationsAreInTheBase) {
  const auto sig = builtin_signature(Family::Excore);
  hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 3), rules::excore_rules());
  TermEnumerator te(sig, EnumConfig{3, {}, true, true});
  std::size_t n = 0;
  for (const auto& e : te.equations(3)) {
    if (reduce_to_pure(e, sig).kind != PureReduction::Kind::EmptyDomain) continue;
    ++n;
    EXPECT_TRUE(en.base().contains(e)) << print(e);
  }
  EXPECT_GT(n, 10u);
}

TEST(Sweep, SmallSweepsAreClean) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    hpc::SweepConfig c;
    c.family = f;
    c.depth = 2;
    const auto r = hpc::sweep(c);
    EXPECT_GT(r.entries.size(), 50u);
    EXPECT_EQ(r.mismatches(), 0u) << r.text();
    EXPECT_TRUE(r.witness.ok()) << r.text();
  }
}

TEST(Sweep, ReportIsDeterministic) {
  hpc::SweepConfig c;
  c.family = Family::States;
  c.depth = 2;
  const auto a = hpc::sweep(c).text(), b = hpc::sweep(c).text();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# logic=states depth=2", 0), 0u);
  EXPECT_NE(a.find("\nSUMMARY total="), std::string::npos);
}

TEST(Sweep, TooSmallUniverseIsReported) {
  // without slack some reductions need terms larger than the equations
  hpc::SweepConfig c;
  c.family = Family::States;
  c.depth = 3;
  c.slack = 0;
  c.oracle = false;
  EXPECT_GT(hpc::sweep(c).mismatches(), 0u);
}

TEST(Witness, EachFamilyHasAnUnderivableCountermodel) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto sig = builtin_signature(f);
    hpc::Engine en(std::make_shared<const hpc::Universe>(sig, 3), rules::rules_for(f));
    const auto w = hpc::check_witness(sig, en);
    EXPECT_NE(w.verdict, Verdict::Equal);
    EXPECT_FALSE(w.derivable);
    ASSERT_TRUE(w.countermodel.has_value());
    EXPECT_NE(w.countermodel->find(f == Family::States ? "V = 2" : "P = 2"), std::string::npos);
  }
}
