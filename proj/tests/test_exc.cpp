#include <gtest/gtest.h>

#include "common.hpp"
#include "deco/exc.hpp"

using namespace deco;
using deco::testing::E;
using deco::testing::T;

namespace {

const Signature& nat() {
  static const Signature s = deco::testing::nat_signature(Family::Exc);
  return s;
}

std::vector<FiniteModel> small_models() {
  return enumerate_models(deco::testing::small_signature(Family::Exc), ModelBounds{1, 3, {}});
}

}  // namespace

TEST(ExcNormalize, PropagateThroughPureSuffix) {
  const auto c = exc::normalize(T("s . throw[N] . three", nat()), Type{"N"});
  EXPECT_EQ(c.kind, exc::Canonical::Kind::Thrown);
  EXPECT_EQ(c.u, T("three", nat()));
}

TEST(ExcNormalize, TryCatchRecoversIntoHandler) {
  const auto c = exc::normalize(T("try (s . throw[N] . three) catch (p)", nat()), Type{"N"});
  EXPECT_EQ(c.kind, exc::Canonical::Kind::Pure);
  EXPECT_EQ(c.u, T("p . three", nat()));
}

TEST(ExcNormalize, PureIsFixed) {
  const Term u = T("s . p . s . three", nat());
  const auto c = exc::normalize(u, Type{"N"});
  EXPECT_EQ(c.kind, exc::Canonical::Kind::Pure);
  EXPECT_EQ(c.u, u);
}

TEST(ExcNormalize, TryAroundPureBodyDisappears) {
  const auto c = exc::normalize(T("s . try (p) catch (s . s)", nat()), Type{"N"});
  EXPECT_EQ(c.kind, exc::Canonical::Kind::Pure);
  EXPECT_EQ(c.u, T("s . p", nat()));
}

TEST(ExcNormalize, HandlerMayRethrow) {
  const auto c = exc::normalize(T("try (throw[N] . two) catch (throw[N] . s)", nat()), Type{"N"});
  EXPECT_EQ(c.kind, exc::Canonical::Kind::Thrown);
  EXPECT_EQ(c.u, T("s . two", nat()));
}

TEST(ExcNormalize, MatchesDenotationOnNaturals) {
  const FiniteModel m = deco::testing::nat_model(Family::Exc, 4);
  for (const char* src : {"s . throw[N] . three", "try (s . throw[N] . three) catch (p)",
                          "try (try (throw[N] . s) catch (throw[N] . p)) catch (s . s)",
                          "p . try (s) catch (throw[N])"}) {
    const Term t = T(src, nat());
    EXPECT_EQ(eval(t, m), eval(exc::normalize(t, Type{"N"}).reify(Type{"N"}), m)) << src;
  }
}

TEST(ExcDecide, RecoverGivesArgumentEquation) {
  const auto r = exc::decide(E("throw[N] . s == throw[N] . p", nat()), nat(), default_emptiness());
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  ASSERT_EQ(r.eqs.size(), 1u);
  EXPECT_EQ(r.eqs[0], E("s == p", nat()));
}

TEST(ExcDecide, ThrownVersusPureClashes) {
  const auto r = exc::decide(E("throw[N] . three == two", nat()), nat(), default_emptiness());
  EXPECT_EQ(r.kind, PureReduction::Kind::Inconsistent);
}

TEST(ExcDecide, EmptyDomainShortCircuits) {
  const auto r = exc::decide(E("throw[N] . copa[N] == copa[N]", nat()), nat(), default_emptiness());
  EXPECT_EQ(r.kind, PureReduction::Kind::EmptyDomain);
}

TEST(ExcDecide, RejectsWeakEquations) {
  Equation e{T("s", nat()), T("p", nat()), Strength::Weak};
  EXPECT_THROW(exc::decide(e, nat(), default_emptiness()), TypeError);
}

TEST(ExcCheck, ExampleOnModFour) {
  const FiniteModel m = deco::testing::nat_model(Family::Exc, 4);
  const Equation e = E("try (s . throw[N] . three) catch (p) == two", nat());
  EXPECT_TRUE(exc::check(e, nat(), m));
  const auto r = exc::decide(e, nat(), model_emptiness(m));
  ASSERT_EQ(r.eqs.size(), 1u);
  EXPECT_EQ(r.eqs[0], E("p . three == two", nat()));
}

TEST(ExcCheck, ThrowIsNotIdentity) {
  const Signature sig = deco::testing::small_signature(Family::Exc);
  const Equation e = E("throw[P] == id[P]", sig);
  for (const auto& m : small_models()) {
    EXPECT_FALSE(exc::check(e, sig, m));
    EXPECT_FALSE(sem_holds(e, m));
  }
}

TEST(ExcCheck, RecoverFaithfulInEveryModel) {
  const Signature sig = deco::testing::small_signature(Family::Exc);
  for (const auto& m : small_models()) {
    for (const char* a : {"id[P]", "f", "f . f"})
      for (const char* b : {"id[P]", "f", "f . f"}) {
        const Equation lifted = E(std::string("throw[P] . ") + a + " == throw[P] . " + b, sig);
        const Equation plain = E(std::string(a) + " == " + b, sig);
        EXPECT_EQ(sem_holds(lifted, m), sem_holds(plain, m));
        EXPECT_EQ(exc::check(lifted, sig, m), sem_holds(plain, m));
      }
  }
}

TEST(ExcCheck, Reflexivity) {
  const Signature sig = deco::testing::small_signature(Family::Exc);
  const Equation e = E("try (throw[P] . f) catch (f) == try (throw[P] . f) catch (f)", sig);
  for (const auto& m : small_models()) EXPECT_TRUE(exc::check(e, sig, m));
}
