#include <gtest/gtest.h>

#include "common.hpp"
#include "deco/states.hpp"

using namespace deco;
using deco::testing::E;
using deco::testing::T;
using Kind = states::Canonical::Kind;

namespace {

const Signature& sig() {
  static const Signature s = deco::testing::small_signature(Family::States);
  return s;
}

std::vector<FiniteModel> models(int lo = 1, int hi = 3) {
  return enumerate_models(sig(), ModelBounds{lo, hi, {}});
}

const Type V{"V"};

}  // namespace

TEST(StatesNormalize, PureIsFixed) {
  const auto c = states::normalize(T("f . f", sig()), V);
  EXPECT_EQ(c.kind, Kind::Pure);
  EXPECT_EQ(c.u, T("f . f", sig()));
}

TEST(StatesNormalize, AccessorThroughLookup) {
  const auto c = states::normalize(T("f . lookup . pa[V] . f", sig()), V);
  ASSERT_EQ(c.kind, Kind::Accessor);
  EXPECT_EQ(c.u, T("f", sig()));
  EXPECT_EQ(c.reify(V), T("f . lookup . pa[V]", sig()));
}

TEST(StatesNormalize, UpdateIsModifierOverIdentity) {
  const auto c = states::normalize(T("update", sig()), V);
  ASSERT_EQ(c.kind, Kind::Modifier);
  EXPECT_EQ(c.u, T("pa[V]", sig()));
  EXPECT_TRUE(c.a.pure);
  EXPECT_EQ(c.a.t, identity(V));
  for (const auto& m : models())
    EXPECT_TRUE(sem_holds(Equation{T("update", sig()), c.reify(V), Strength::Strong}, m));
}

TEST(StatesNormalize, DoubleUpdateKeepsLastWrite) {
  const Term t = T("update . f . lookup . update . f", sig());
  const auto c = states::normalize(t, V);
  ASSERT_EQ(c.kind, Kind::Modifier);
  EXPECT_EQ(c.a.t, T("f . f", sig()));
  for (const auto& m : models()) EXPECT_EQ(eval(t, m), eval(c.reify(V), m));
}

TEST(StatesNormalize, LookupAfterModifierReadsWrittenValue) {
  const Term t = T("f . lookup . update . lookup . pa[V]", sig());
  const auto c = states::normalize(t, V);
  ASSERT_EQ(c.kind, Kind::Modifier);
  EXPECT_EQ(c.u, T("f", sig()));
  for (const auto& m : models()) EXPECT_EQ(eval(t, m), eval(c.reify(V), m));
}

TEST(StatesDecide, ModifiersWeakReduceToComposite) {
  const auto r = states::decide(E("f . lookup . update . f ~~ lookup . update . f . f", sig()), sig(),
                                default_emptiness());
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  ASSERT_EQ(r.eqs.size(), 1u);
  EXPECT_EQ(r.eqs[0], E("f . f == f . f", sig()));
}

TEST(StatesDecide, AccessorsReduceToPureLegs) {
  const auto r = states::decide(E("f . lookup . pa[V] == f . f . lookup . pa[V]", sig()), sig(),
                                default_emptiness());
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  ASSERT_EQ(r.eqs.size(), 1u);
  EXPECT_EQ(r.eqs[0], E("f == f . f", sig()));
}

TEST(StatesDecide, AccessorVersusPureUsesWitness) {
  const auto r = states::decide(E("lookup . pa[V] == f", sig()), sig(), default_emptiness());
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  ASSERT_EQ(r.eqs.size(), 2u);
  EXPECT_EQ(r.eqs[0], E("id[V] == f . c . pa[V]", sig()));
  EXPECT_EQ(r.eqs[1], E("f == f . c . pa[V]", sig()));
}

TEST(StatesDecide, MissingWitnessIsAnError) {
  Signature s = sig();
  s.ops.pop_back();  // drop c
  EXPECT_THROW(states::decide(E("lookup . pa[V] == f", s), s, default_emptiness()), Error);
}

TEST(StatesCheck, UpdateIsNotDiscard) {
  const Equation e = E("update == pa[V]", sig());
  EXPECT_FALSE(states::decide(e, sig(), default_emptiness()).trivially_true());
  for (const auto& m : models()) {
    const bool big = m.size(V) >= 2;
    EXPECT_EQ(states::check(e, sig(), m), !big);
    EXPECT_EQ(sem_holds(e, m), !big);
  }
}

TEST(StatesCheck, FundamentalEquations) {
  for (const auto& m : models()) {
    EXPECT_TRUE(states::check(E("lookup . update ~~ id[V]", sig()), sig(), m));
    EXPECT_TRUE(states::check(E("update . lookup == id[Unit]", sig()), sig(), m));
    EXPECT_EQ(states::check(E("lookup . update == id[V]", sig()), sig(), m), m.size(V) == 1);
  }
}

TEST(StatesCheck, PureLegsLiftThroughLookup) {
  for (const auto& m : models())
    for (const char* a : {"id[V]", "f", "f . f"})
      for (const char* b : {"id[V]", "f", "f . f"}) {
        const bool plain = states::check(E(std::string(a) + " == " + b, sig()), sig(), m);
        EXPECT_EQ(plain, states::check(E(std::string(a) + " . lookup == " + b + " . lookup", sig()), sig(), m));
        EXPECT_EQ(plain, states::check(E(std::string(a) + " . lookup . update == " + b + " . lookup . update", sig()),
                                       sig(), m));
        EXPECT_EQ(plain, sem_holds(E(std::string(a) + " . lookup == " + b + " . lookup", sig()), m));
      }
}

TEST(StatesCheck, WeakStrongCoincideOnAccessors) {
  for (const auto& m : models())
    for (const char* l : {"f", "lookup . pa[V]", "f . lookup . pa[V] . f"})
      for (const char* r : {"f . f", "f . lookup . pa[V]", "id[V]"}) {
        const bool s = states::check(E(std::string(l) + " == " + r, sig()), sig(), m);
        const bool w = states::check(E(std::string(l) + " ~~ " + r, sig()), sig(), m);
        EXPECT_EQ(s, w);
        EXPECT_EQ(s, sem_holds(E(std::string(l) + " == " + r, sig()), m));
      }
}
