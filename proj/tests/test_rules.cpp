#include <gtest/gtest.h>

#include "common.hpp"
#include "deco/rules.hpp"

using namespace deco;
using namespace deco::rules;

namespace {

const ModelBounds kSmall{1, 3, {}};

RuleSet widen(RuleSet rs, const std::string& rule, Bound b) {
  for (auto& r : rs.rules)
    if (r.name == rule)
      for (auto& mv : r.metas) mv.bound = b;
  return rs;
}

std::string samples(const AuditReport& r) {
  std::string s;
  for (const auto& x : r.samples) s += x + "\n";
  return s;
}

}  // namespace

TEST(Audit, PureRulesAreSound) {
  for (Family f : {Family::Exc, Family::Excore, Family::States}) {
    const auto r = audit(pure_rules(f), builtin_signature(f), 3, kSmall);
    EXPECT_GT(r.instances, 0u);
    EXPECT_EQ(r.violations, 0u) << samples(r);
  }
}

TEST(Audit, StatesRulesAreSound) {
  const auto r = audit(states_rules(), builtin_signature(Family::States), 3, kSmall);
  EXPECT_EQ(r.violations, 0u) << samples(r);
  for (const auto& rule : states_rules().rules) EXPECT_GT(r.per_rule.at(rule.name), 0u) << rule.name;
}

TEST(Audit, ExcoreRulesAreSound) {
  const auto r = audit(excore_rules(), builtin_signature(Family::Excore), 3, kSmall);
  EXPECT_EQ(r.violations, 0u) << samples(r);
  EXPECT_EQ(r.skipped, (std::vector<std::string>{"copa-mono", "clash", "clash-converse"}));
  for (const auto& rule : excore_rules().rules)
    if (rule.kind != RuleKind::Assumption) {
      EXPECT_GT(r.per_rule.at(rule.name), 0u) << rule.name;
    }
}

TEST(Audit, ExcRulesAreSound) {
  const auto r = audit(exc_rules(), builtin_signature(Family::Exc), 3, kSmall);
  EXPECT_EQ(r.violations, 0u) << samples(r);
  for (const auto& rule : exc_rules().rules)
    if (rule.kind != RuleKind::Assumption) {
      EXPECT_GT(r.per_rule.at(rule.name), 0u) << rule.name;
    }
}

// the decoration guards are what keep the rules sound
TEST(Audit, DroppingAGuardIsCaught) {
  const auto core = builtin_signature(Family::Excore);
  EXPECT_GT(audit(widen(excore_rules(), "eq1", Bound::Any), core, 2, kSmall).violations, 0u);
  EXPECT_GT(audit(widen(excore_rules(), "subs~~", Bound::Any), core, 2, kSmall).violations, 0u);
  const auto st = builtin_signature(Family::States);
  EXPECT_GT(audit(widen(states_rules(), "repl~~", Bound::Any), st, 2, kSmall).violations, 0u);
  EXPECT_GT(audit(widen(states_rules(), "eq1", Bound::Any), st, 2, kSmall).violations, 0u);
  const auto exc = builtin_signature(Family::Exc);
  EXPECT_GT(audit(widen(exc_rules(), "try0", Bound::Propagator), exc, 2, kSmall).violations, 0u);
}

TEST(Duality, CoreExceptionRulesDualiseToStateRules) {
  const RuleSet d = dual(excore_rules());
  const RuleSet st = states_rules();
  ASSERT_EQ(d.rules.size(), st.rules.size());
  for (const auto& r : d.rules) {
    const Rule* s = st.find(r.name);
    ASSERT_NE(s, nullptr) << r.name;
    EXPECT_EQ(shape(r, Family::States), shape(*s, Family::States)) << r.name;
  }
}

TEST(Duality, IsAnInvolutionOnCoreRules) {
  for (const auto& r : excore_rules().rules) {
    if (r.kind != RuleKind::Core) continue;
    EXPECT_EQ(shape(dual(dual(r)), Family::Excore), shape(r, Family::Excore)) << r.name;
  }
  EXPECT_THROW(dual(*excore_rules().find("catch==")), Error);
}

TEST(Instances, RespectTheSizeBound) {
  const auto sig = builtin_signature(Family::Excore);
  TermEnumerator en(sig, EnumConfig{2, {}, true, true});
  std::map<std::pair<std::string, std::string>, std::vector<Term>> cache;
  TermSupply supply = [&](const Type& x, const Type& y) -> const std::vector<Term>& {
    auto [it, fresh] = cache.try_emplace({x.name, y.name});
    if (fresh) it->second = en.up_to(2, x, y, TermEnumerator::Mode::Handler);
    return it->second;
  };
  std::size_t n = 0;
  for_each_instance(*excore_rules().find("subs=="), sig, supply, 2, [&](const Instance& in) {
    ++n;
    for (const auto& e : in.premises) EXPECT_LE(std::max(term_size(e.lhs), term_size(e.rhs)), 2);
    EXPECT_LE(std::max(term_size(in.conclusion.lhs), term_size(in.conclusion.rhs)), 2);
  });
  EXPECT_GT(n, 0u);
}

TEST(Instances, MissingParameterTypeMeansNoInstances) {
  Signature s;
  s.family = Family::Exc;
  s.types = {Type{"N"}};
  s.ops = {{"s", Type{"N"}, Type{"N"}, kPure}};
  EXPECT_EQ(audit(exc_rules(), s, 2, kSmall).per_rule.at("try1"), 0u);
}
