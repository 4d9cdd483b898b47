#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "chorsem/activity_semantics.hpp"
#include "chorsem/dsl.hpp"
#include "support/rule_cases.hpp"

namespace chorsem::testing {
void PrintTo(const RuleCase& c, std::ostream* os) { *os << c.rule; }
}  // namespace chorsem::testing

using namespace chorsem;
using chorsem::testing::RuleCase;
using chorsem::testing::rule_cases;

namespace {

class RuleCaseTest : public ::testing::TestWithParam<RuleCase> {};

std::string case_name(const ::testing::TestParamInfo<RuleCase>& info) {
  return info.param.rule;
}

const OpTable& ops() {
  static const OpTable table = [] {
    OpTable t;
    OpDef set = parse_op("op set() { if true then y := x + 10; }");
    OpDef bump = parse_op("op bump(p) { if true then y := p * 2; }");
    t.emplace(set.name, set);
    t.emplace(bump.name, bump);
    return t;
  }();
  return table;
}

std::vector<ActivityStep> steps(const std::string& text, const VarStore& sigma,
                                const ResourceStore& rho = {},
                                Mode mode = Mode::closed()) {
  return action_steps(parse_activity(text), sigma, rho,
                      StepContext{&ops(), "O1", std::move(mode)});
}

std::vector<std::string> labels(const std::vector<ActivityStep>& s) {
  std::vector<std::string> out;
  for (const auto& step : s) out.push_back(step.label.text);
  return out;
}

}  // namespace

TEST_P(RuleCaseTest, Positive) {
  EXPECT_EQ(GetParam().positive(), "");
}

TEST_P(RuleCaseTest, Negative) {
  EXPECT_EQ(GetParam().negative(), "");
}

INSTANTIATE_TEST_SUITE_P(Rules, RuleCaseTest, ::testing::ValuesIn(rule_cases()),
                         case_name);

TEST(RuleTable, NamesAreUniqueAndGrouped) {
  std::set<std::string> names;
  std::set<std::string> groups{"activity", "delay", "notification",
                               "choreography"};
  std::size_t tabled = 0;
  for (const auto& c : rule_cases()) {
    EXPECT_TRUE(names.insert(c.rule).second) << c.rule;
    EXPECT_TRUE(groups.count(c.group)) << c.rule << " in " << c.group;
    if (c.tabled) ++tabled;
  }
  EXPECT_EQ(tabled, 46u);
  EXPECT_EQ(rule_cases().size(), 48u);
}

TEST(ActionSteps, ClosedModeSilencesCommunication) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  for (const char* text :
       {"receive(pl,set,x)", "invoke(pl,set,x)", "reply(pl,x)",
        "replybar(pl,x)", "pick{ on(pl,set,x){empty} alarm(2){exit} }",
        "wait(3)", "empty"}) {
    EXPECT_TRUE(steps(text, sigma).empty()) << text;
  }
}

TEST(ActionSteps, OpenModeBindsEveryDomainValue) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  auto s = steps("receive(pl,bump,x)", sigma, {}, Mode::open_with({3, 4}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].label.text, "receive(pl,bump,3)");
  EXPECT_EQ(s[0].sigma_after, (VarStore{{"x", 3}, {"y", 6}}));
  EXPECT_EQ(s[1].sigma_after, (VarStore{{"x", 4}, {"y", 8}}));
  s = steps("replybar(pl,y)", sigma, {}, Mode::open_with({7}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].sigma_after.at("y"), 7);
}

TEST(ActionSteps, PickOffersEveryBranchInOrder) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  auto s = steps("pick{ on(a,set,x){exit} on(b,bump,y){empty} alarm(2){throw} }",
                 sigma, {}, Mode::open_with({5}));
  EXPECT_EQ(labels(s), (std::vector<std::string>{"pick(a,set,5)",
                                                 "pick(b,bump,5)"}));
  EXPECT_EQ(s[0].residual, Activity::exit());
  EXPECT_EQ(s[0].sigma_after, (VarStore{{"x", 5}, {"y", 15}}));
  EXPECT_EQ(s[1].sigma_after, (VarStore{{"x", 1}, {"y", 10}}));
}

TEST(ActionSteps, ParallelInterleavesBothSides) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  auto s = steps("(assign(2,x) || assign(3,y))", sigma);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].rules, (std::vector<std::string>{"Assign", "Par1"}));
  EXPECT_EQ(s[0].residual, parse_activity("(empty || assign(3,y))"));
  EXPECT_EQ(s[1].rules, (std::vector<std::string>{"Assign", "Par2"}));
  EXPECT_EQ(s[1].residual, parse_activity("(assign(2,x) || empty)"));
}

TEST(ActionSteps, NestedRulesAreInnermostFirst) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  auto s = steps("((assign(2,x); exit) || wait(1))", sigma);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].rules, (std::vector<std::string>{"Assign", "Seq2", "Par1"}));
  s = steps("((exit; assign(2,x)) || wait(1))", sigma);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].rules, (std::vector<std::string>{"Exit", "Seq3", "Par3"}));
  EXPECT_TRUE(s[0].residual.is_empty());
}

TEST(ActionSteps, WhileUnfoldsOnce) {
  VarStore sigma{{"x", 2}, {"y", 0}};
  auto s = steps("while(x > 0){assign(x - 1,x)}", sigma);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].residual,
            parse_activity("assign(x - 1,x); while(x > 0){assign(x - 1,x)}"));
  EXPECT_TRUE(s[0].label.kind == LabelKind::Tau);
}

TEST(ActionSteps, CreateResourceKeepsExistingEntry) {
  VarStore sigma{{"x", 1}, {"y", 0}};
  auto first = steps("createResource(E,4,3){assign(1,y)}", sigma);
  ASSERT_EQ(first.size(), 1u);
  ASSERT_TRUE(first[0].rho_after.count("E"));
  const Resource& r = first[0].rho_after.at("E");
  EXPECT_EQ(r.value, 4);
  EXPECT_EQ(r.lifetime, 3);
  EXPECT_EQ(r.creator, "O1");
  EXPECT_EQ(r.expiry_handler, parse_activity("assign(1,y)"));
  auto again = steps("createResource(E,9,9){empty}", sigma, first[0].rho_after);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0].rho_after, first[0].rho_after);
}

TEST(ActionSteps, AssignOverflowPropagates) {
  VarStore sigma{{"x", std::numeric_limits<Value>::max()}, {"y", 0}};
  EXPECT_THROW(steps("assign(x + 1,y)", sigma), ArithmeticOverflow);
}

TEST(Delay, WaitCountsDownToEmpty) {
  Activity a = parse_activity("wait(2)");
  a = delay_step(a);
  EXPECT_EQ(a, Activity::wait(1));
  a = delay_step(a);
  EXPECT_TRUE(a.is_empty());
}

TEST(Delay, PickFallsBackToAlarm) {
  Activity p = parse_activity("pick{ on(pl,set,x){empty} alarm(2){exit} }");
  EXPECT_EQ(delay_rules(p), (std::vector<std::string>{"Pick2D"}));
  Activity q = delay_step(p);
  EXPECT_EQ(q.timeout(), 1);
  EXPECT_EQ(delay_rules(q), (std::vector<std::string>{"Pick1D"}));
  EXPECT_EQ(delay_step(q), Activity::exit());
}

TEST(Delay, SequenceDelaysOnlyItsHead) {
  Activity a = parse_activity("wait(1); wait(3)");
  EXPECT_EQ(delay_rules(a), (std::vector<std::string>{"Wait2D", "SequenceD"}));
  EXPECT_EQ(delay_step(a), Activity::wait(3));
}

TEST(Delay, ParallelNeedsBothSides) {
  EXPECT_TRUE(can_delay(parse_activity("(wait(2) || receive(pl,set,x))")));
  EXPECT_FALSE(can_delay(parse_activity("(wait(2) || assign(1,x))")));
  EXPECT_EQ(delay_step(parse_activity("(wait(2) || invoke(pl,set,x))")),
            parse_activity("(wait(1) || invoke(pl,set,x))"));
}

TEST(Delay, UrgentActivitiesRefuseTime) {
  for (const char* text : {"assign(1,x)", "reply(pl,x)", "replybar(pl,x)",
                           "throw", "exit", "while(true){empty}",
                           "getProp(E,x)", "setProp(E,1)", "setTimeout(E,2)",
                           "createResource(E,1,1){empty}",
                           "subscribe(O1,E,EPR > 0){empty}"}) {
    Activity a = parse_activity(text);
    EXPECT_FALSE(can_delay(a)) << text;
    EXPECT_THROW(delay_step(a), NotDelayable) << text;
    EXPECT_THROW(delay_rules(a), NotDelayable) << text;
  }
}

TEST(SyncOffers, ReachOnlyNextActions) {
  auto offers = sync_offers(parse_activity(
      "((receive(a,set,x); reply(a,x)) || pick{ on(b,bump,y){empty} "
      "alarm(1){empty} })"));
  ASSERT_EQ(offers.size(), 2u);
  EXPECT_EQ(offers[0], (SyncOffer{ActivityKind::Receive, "a", "set", "x"}));
  EXPECT_EQ(offers[1], (SyncOffer{ActivityKind::Pick, "b", "bump", "y"}));
  EXPECT_TRUE(sync_offers(parse_activity("assign(1,x); invoke(a,set,x)")).empty());
  EXPECT_EQ(sync_offers(parse_activity("replybar(a,y)"))[0].op, "");
}
