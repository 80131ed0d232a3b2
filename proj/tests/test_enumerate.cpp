#include <gtest/gtest.h>

#include <set>

#include "common.hpp"
#include "deco/enumerate.hpp"

using namespace deco;
using deco::testing::T;

namespace {

std::set<std::string> printed(const std::vector<Term>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(print(t));
  return out;
}

}  // namespace

TEST(Enumerate, HandCountedStateHomSet) {
  const auto sig = builtin_signature(Family::States);
  TermEnumerator en(sig, EnumConfig{2, {"f"}, true, true});
  const Type v{"V"};
  EXPECT_EQ(printed(en.up_to(2, v, v)),
            (std::set<std::string>{"id[V]", "f", "f . f", "lookup . pa[V]", "lookup . update"}));
}

TEST(Enumerate, SizeOneHandlersAreListed) {
  const auto exc = builtin_signature(Family::Exc);
  TermEnumerator a(exc, EnumConfig{1, {"f"}, true, true});
  const Type p{"P"};
  EXPECT_EQ(printed(a.exactly(1, p, p)), (std::set<std::string>{"f", "throw[P]", "try (id[P]) catch (id[P])"}));

  const auto core = builtin_signature(Family::Excore);
  TermEnumerator b(core, EnumConfig{1, {"f"}, true, true});
  const auto general = printed(b.exactly(1, p, p));
  const auto handler = printed(b.exactly(1, p, p, TermEnumerator::Mode::Handler));
  EXPECT_TRUE(general.count("TRY(id[P], id[P])"));
  EXPECT_FALSE(general.count("CATCH(id[P])"));
  EXPECT_TRUE(handler.count("CATCH(id[P])"));
}

TEST(Enumerate, TermsAreDistinctWellTypedAndSized) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto sig = builtin_signature(f);
    TermEnumerator en(sig, EnumConfig{4, {}, true, true});
    const auto all = en.all_terms(4);
    EXPECT_EQ(printed(all).size(), all.size()) << family_name(f);
    for (const auto& t : all) {
      EXPECT_NO_THROW(validate(t, f)) << print(t);
      EXPECT_LE(term_size(t), 4);
    }
  }
}

TEST(Enumerate, UpToIsOrderedBySize) {
  TermEnumerator en(builtin_signature(Family::Exc), EnumConfig{4, {}, true, true});
  const Type p{"P"};
  int last = 0;
  for (const auto& t : en.up_to(4, p, p)) {
    EXPECT_GE(term_size(t), last);
    last = term_size(t);
  }
}

TEST(Enumerate, Deterministic) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    TermEnumerator a(builtin_signature(f), EnumConfig{3, {}, true, true});
    TermEnumerator b(builtin_signature(f), EnumConfig{3, {}, true, true});
    const auto x = a.equations(3), y = b.equations(3);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(print(x[i]), print(y[i]));
  }
}

TEST(Enumerate, WeakEquationsOnlyWhereTheLogicHasThem) {
  TermEnumerator exc(builtin_signature(Family::Exc), EnumConfig{2, {}, true, true});
  for (const auto& e : exc.equations(2)) EXPECT_EQ(e.strength, Strength::Strong);
  TermEnumerator st(builtin_signature(Family::States), EnumConfig{2, {}, true, true});
  const auto es = st.equations(2);
  EXPECT_EQ(std::count_if(es.begin(), es.end(), [](const Equation& e) { return e.strength == Strength::Weak; }) * 2,
            static_cast<long>(es.size()));
}

// every small random term shows up in the exhaustive enumeration
TEST(Enumerate, CoversRandomTerms) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto sig = builtin_signature(f);
    TermEnumerator en(sig, EnumConfig{4, {}, true, true});
    const auto all = printed(en.all_terms(4));
    RandomTerms rnd(sig, 99);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
      const Term t = rnd.next(4);
      if (term_size(t) > 4) continue;
      ++checked;
      EXPECT_TRUE(all.count(print(t))) << family_name(f) << ": " << print(t);
    }
    EXPECT_GT(checked, 500);
  }
}

TEST(RoundTrip, ParsePrintOnSeededRandomTerms) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto sig = builtin_signature(f);
    RandomTerms rnd(sig, 20261016);
    for (int i = 0; i < 1000; ++i) {
      const Term t = rnd.next(6);
      const std::string s = print(t);
      const Term back = T(s, sig);
      ASSERT_EQ(back, t) << s;
      EXPECT_EQ(print(back), s);
    }
  }
}
