#include <gtest/gtest.h>

#include "chorsem/choreography.hpp"
#include "chorsem/dsl.hpp"
#include "support/files.hpp"

using namespace chorsem;
using chorsem::testing::load_fixture;

namespace {

std::vector<std::string> texts(const std::vector<ChorEdge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges) out.push_back(e.label.text);
  return out;
}

// Applies the unique edge with `text`.
ChorState take(const ChoreographyDef& def, const ChorState& cs,
               const std::string& text) {
  std::optional<ChorState> found;
  for (auto& e : chor_action_steps(def, cs)) {
    if (e.label.text != text) continue;
    EXPECT_FALSE(found) << "two edges labelled " << text;
    found = e.target;
  }
  EXPECT_TRUE(found) << "no edge labelled " << text;
  return found ? *found : cs;
}

ChoreographyDef model(const std::string& body) {
  return parse_model("choreography t {\n" + body + "\n}");
}

}  // namespace

TEST(Initial, LoadsDeclaredStartHandlers) {
  ChoreographyDef def = model(R"(
    orchestrator A {
      vars x = 3;
      fault exit;
      handler at-start wait(2);
      handler exit;
      main = empty;
    })");
  ChorState cs = initial_state(def);
  ASSERT_EQ(cs.locals.size(), 1u);
  EXPECT_EQ(cs.locals[0].sigma, (VarStore{{"x", 3}}));
  ASSERT_EQ(cs.locals[0].pool.size(), 1u);
  EXPECT_EQ(cs.locals[0].pool[0].origin, HandlerOrigin::declared(0));
  EXPECT_FALSE(is_terminal(cs));
  EXPECT_TRUE(cs.rho.empty());
}

TEST(Example1, StepsInterleaveThenSynchronise) {
  ChoreographyDef def = load_fixture("example1.brf");
  ChorState s0 = initial_state(def);
  auto e0 = chor_action_steps(def, s0);
  EXPECT_EQ(texts(e0), (std::vector<std::string>{"assign(5,v1)", "assign(1,v2)"}));
  for (const auto& e : e0) EXPECT_EQ(e.rule, "Chor2");

  ChorState s1 = take(def, take(def, s0, "assign(5,v1)"), "assign(1,v2)");
  auto e1 = chor_action_steps(def, s1);
  ASSERT_EQ(e1.size(), 1u);
  EXPECT_EQ(e1[0].label.text, "invoke(pl1,add,v2)");
  EXPECT_EQ(e1[0].rule, "Chor4");
  EXPECT_EQ(e1[0].actors, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(e1[0].target.locals[0].sigma.at("v3"), 6);

  DelayResult blocked = chor_delay(def, s1);
  EXPECT_FALSE(blocked.state);
  EXPECT_EQ(blocked.reason, BlockReason::CommPending);

  ChorState s2 = e1[0].target;
  auto e2 = chor_action_steps(def, s2);
  ASSERT_EQ(e2.size(), 1u);
  EXPECT_EQ(e2[0].label.text, "reply(pl1,6)");
  EXPECT_EQ(e2[0].rule, "Chor5");
  EXPECT_TRUE(is_terminal(e2[0].target));
  EXPECT_EQ(e2[0].target.locals[1].sigma.at("v4"), 6);
}

TEST(Example1, TerminalStateStillDelays) {
  ChoreographyDef def = load_fixture("example1.brf");
  ChorState s = initial_state(def);
  for (const char* l : {"assign(5,v1)", "assign(1,v2)", "invoke(pl1,add,v2)",
                        "reply(pl1,6)"})
    s = take(def, s, l);
  DelayResult d = chor_delay(def, s);
  ASSERT_TRUE(d.state);
  EXPECT_EQ(*d.state, s);
}

TEST(Chor1, ExitStopsEveryOrchestrator) {
  ChoreographyDef def = model(R"(
    orchestrator A { vars x = 0; fault exit; main = exit; }
    orchestrator B { vars x = 0; fault exit; handler at-start wait(3); main = wait(5); })");
  auto edges = chor_action_steps(def, initial_state(def));
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].rule, "Chor1");
  EXPECT_EQ(edges[0].rules, (std::vector<std::string>{"Exit", "Notif4", "Chor1"}));
  EXPECT_TRUE(is_terminal(edges[0].target));
}

TEST(Chor6, PickBranchReceivesInvoke) {
  ChoreographyDef def = model(R"(
    op go(p) { if true then y := p + 1; }
    partnerlink pl = (A -> B);
    orchestrator A { vars x = 4; fault exit; main = invoke(pl,go,x); }
    orchestrator B { vars x = 0, y = 0; fault exit;
      main = pick{ on(pl,go,x){assign(1,x)} alarm(2){empty} }; })");
  auto edges = chor_action_steps(def, initial_state(def));
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].rule, "Chor6");
  const auto& b = edges[0].target.locals[1];
  EXPECT_EQ(b.sigma, (VarStore{{"x", 4}, {"y", 5}}));
  EXPECT_EQ(b.activity, parse_activity("assign(1,x)"));
}

TEST(Sync, WrongOperationDoesNotMatch) {
  ChoreographyDef def = model(R"(
    op go() { if true then x := x; }
    op stop() { if true then x := x; }
    partnerlink pl = (A -> B);
    orchestrator A { vars x = 4; fault exit; main = invoke(pl,go,x); }
    orchestrator B { vars x = 0; fault exit; main = receive(pl,stop,x); })");
  ChorState s = initial_state(def);
  EXPECT_TRUE(chor_action_steps(def, s).empty());
  DelayResult d = chor_delay(def, s);
  ASSERT_TRUE(d.state);
  EXPECT_EQ(*d.state, s);
}

TEST(Env, OpenDomainFeedsUnmatchedReceive) {
  ChoreographyDef def = model(R"(
    op go() { if true then y := x * 2; }
    partnerlink pl = (E -> B);
    config { open-domain = {1, 3}; }
    orchestrator B { vars x = 0, y = 0; fault exit; main = receive(pl,go,x); })");
  auto edges = chor_action_steps(def, initial_state(def));
  ASSERT_EQ(edges.size(), 2u);
  for (const auto& e : edges) EXPECT_EQ(e.rule, "Env");
  EXPECT_EQ(edges[0].target.locals[0].sigma, (VarStore{{"x", 1}, {"y", 2}}));
  EXPECT_EQ(edges[1].target.locals[0].sigma, (VarStore{{"x", 3}, {"y", 6}}));
}

TEST(Delay, ExpiryHandlerGoesToConfiguredTarget) {
  const std::string body = R"(
    orchestrator A { vars x = 0; fault exit;
      main = createResource(R,1,1){assign(7,x)}; wait(2); }
    orchestrator B { vars x = 0; fault exit;
      main = wait(1); }
  )";
  for (auto [target, in_a] : {std::pair{"creator", true},
                              std::pair{"subscribers", false}}) {
    ChoreographyDef def =
        model(body + "config { expiry-target = " + std::string(target) + "; }");
    ChorState s = take(def, initial_state(def), "createResource(R,1,1)");
    DelayResult d = chor_delay(def, s);
    ASSERT_TRUE(d.state) << target;
    EXPECT_TRUE(d.state->rho.empty());
    EXPECT_EQ(d.state->locals[0].pool.size(), in_a ? 1u : 0u) << target;
    EXPECT_TRUE(d.state->locals[1].pool.empty());
    EXPECT_EQ(d.state->locals[0].activity, Activity::wait(1));
  }
}

TEST(Delay, UrgentActivityBlocksTime) {
  ChoreographyDef def = model(R"(
    orchestrator A { vars x = 0; fault exit; main = assign(1,x); })");
  DelayResult d = chor_delay(def, initial_state(def));
  EXPECT_FALSE(d.state);
  EXPECT_EQ(d.reason, BlockReason::UrgentActivity);
  EXPECT_EQ(d.detail, "A:main");
}

TEST(Delay, UrgentInternalWaitsForAnyAction) {
  const std::string body = R"(
    orchestrator A { vars x = 0; fault exit; main = (empty || empty); }
  )";
  ChoreographyDef lazy = model(body);
  ChorState s = initial_state(lazy);
  auto edges = chor_action_steps(lazy, s);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].rules, (std::vector<std::string>{"Par5", "Notif1", "Chor2"}));
  DelayResult d = chor_delay(lazy, s);
  ASSERT_TRUE(d.state);
  EXPECT_EQ(*d.state, s);

  ChoreographyDef eager = model(body + "config { urgent-internal = true; }");
  d = chor_delay(eager, initial_state(eager));
  EXPECT_FALSE(d.state);
  EXPECT_EQ(d.reason, BlockReason::InternalPending);
}

TEST(Delay, UrgentInternalAlsoCoversEnvironmentInput) {
  ChoreographyDef def = model(R"(
    op go() { if true then x := x; }
    partnerlink pl = (E -> B);
    config { open-domain = {0}; urgent-internal = true; }
    orchestrator B { vars x = 0; fault exit; main = receive(pl,go,x); })");
  DelayResult d = chor_delay(def, initial_state(def));
  EXPECT_FALSE(d.state);
  EXPECT_EQ(d.reason, BlockReason::InternalPending);
  EXPECT_EQ(d.detail, "receive(pl,go,0)");
}
