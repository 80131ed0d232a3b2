#include <gtest/gtest.h>

#include "common.hpp"
#include "deco/translate.hpp"

using namespace deco;
using deco::testing::E;
using deco::testing::T;

namespace {

const Signature& nat() {
  static const Signature s = deco::testing::nat_signature(Family::Exc);
  return s;
}
const Signature& nat_core() {
  static const Signature s = deco::testing::nat_signature(Family::Excore);
  return s;
}

}  // namespace

TEST(Translate, ThrowBecomesTag) {
  EXPECT_EQ(translate(T("throw[N] . three", nat()), Type{"N"}), T("copa[N] . tag . three", nat_core()));
}

TEST(Translate, TryCatchBecomesCore) {
  EXPECT_EQ(translate(T("try (s . throw[N] . three) catch (p)", nat()), Type{"N"}),
            T("TRY(s . copa[N] . tag . three, CATCH(p))", nat_core()));
}

TEST(Translate, PureUnchanged) {
  const Term u = T("s . p . three", nat());
  EXPECT_EQ(translate(u, Type{"N"}), u);
}

TEST(Translate, ImagesArePropagators) {
  for (const char* src : {"throw[N]", "try (throw[N]) catch (s)", "try (try (throw[N] . s) catch (throw[N])) catch (p)"})
    EXPECT_LE(decoration_of(translate(T(src, nat()), Type{"N"})), kPropagator) << src;
}

TEST(Translate, ExampleReductionChain) {
  const Equation e = translate(E("try (s . throw[N] . three) catch (p) == two", nat()), Type{"N"});
  const auto r = excore::decide(e, nat_core(), default_emptiness());
  ASSERT_EQ(r.kind, PureReduction::Kind::PureEqs);
  ASSERT_EQ(r.eqs.size(), 1u);
  EXPECT_EQ(r.eqs[0], E("p . three == two", nat_core()));
  bool saw_catch = false;
  for (const auto& line : r.trace) saw_catch = saw_catch || line.find("untag") != std::string::npos;
  EXPECT_TRUE(saw_catch);
}

TEST(Translate, VerifyExample) {
  const std::vector<FiniteModel> ms = {deco::testing::nat_model(Family::Exc, 4),
                                       deco::testing::nat_model(Family::Exc, 3)};
  const auto rep = verify_translation(E("try (s . throw[N] . three) catch (p) == two", nat()), nat(), ms);
  EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
}

TEST(Translate, RuleImagesHold) {
  const Signature sig = deco::testing::small_signature(Family::Exc);
  for (const char* a : {"f", "throw[P] . f", "try (throw[P]) catch (f)"})
    for (const char* u : {"id[P]", "f", "f . f"})
      for (const char* b : {"f", "throw[P]", "throw[P] . f"}) {
        const auto imgs = rule_images(T(a, sig), T(u, sig), T(u, sig), T("f . f", sig), T(b, sig), sig);
        ASSERT_EQ(imgs.size(), 5u);
        for (const auto& [rule, ok] : imgs) EXPECT_TRUE(ok) << rule << " a=" << a << " u=" << u << " b=" << b;
      }
}

TEST(Translate, TryOneImageIsSemanticallyValid) {
  const Signature sig = deco::testing::small_signature(Family::Excore);
  for (const auto& m : enumerate_models(sig, ModelBounds{1, 3, {}}))
    for (const std::string u : {"id[P]", "f", "f . f"})
      for (const std::string b : {"f", "copa[P] . tag", "copa[P] . tag . f"}) {
        const Equation e = E("TRY(copa[P] . tag . " + u + ", CATCH(" + b + ")) ~~ " + b + " . " + u, sig);
        EXPECT_TRUE(sem_holds(e, m));
        EXPECT_TRUE(excore::check(e, sig, m));
      }
}

TEST(Translate, DecisionsCommuteOnSmallModels) {
  const Signature sig = deco::testing::small_signature(Family::Exc);
  const auto ms = enumerate_models(sig, ModelBounds{1, 3, {}});
  for (const char* src : {"throw[P] == id[P]", "try (throw[P]) catch (f) == f", "try (f) catch (f . f) == f",
                          "throw[P] . f == throw[P] . f . f"}) {
    const auto rep = verify_translation(E(src, sig), sig, ms);
    EXPECT_TRUE(rep.ok()) << src << ": " << (rep.failures.empty() ? "" : rep.failures.front());
  }
}
