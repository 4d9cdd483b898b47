// Activity-level rules: one activity term against one (sigma, rho) state.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "chorsem/model.hpp"

namespace chorsem {

using OpTable = std::map<std::string, OpDef>;

/// How communication redexes are treated.
///
/// Closed: receive, invoke, reply, replybar and pick never step on their
/// own; only the choreography level fires them through synchronisation.
/// Open: they step against a finite environment; receive, replybar and
/// pick bind each value of `domain`.
struct Mode {
  bool open = false;
  std::vector<Value> domain;

  static Mode closed() { return {}; }
  static Mode open_with(std::vector<Value> domain = {0}) {
    return {true, std::move(domain)};
  }
};

/// Everything the rules need besides the activity and the state.
struct StepContext {
  const OpTable* ops = nullptr;
  /// Orchestrator executing the activity (recorded as resource creator).
  std::string self;
  Mode mode;
};

struct ActivityStep {
  TransitionLabel label;
  Activity residual;
  VarStore sigma_after;
  ResourceStore rho_after;
  /// Rules used to derive the step, innermost first.
  std::vector<std::string> rules;
};

std::vector<ActivityStep> action_steps(const Activity& a, const VarStore& sigma,
                                       const ResourceStore& rho,
                                       const StepContext& ctx);

bool can_delay(const Activity& a);

class NotDelayable : public ModelError {
 public:
  explicit NotDelayable(const std::string& what) : ModelError(what) {}
};

/// One time unit for the activity term. Never touches sigma or rho.
Activity delay_step(const Activity& a);

/// Delay rules applied by delay_step on `a`, innermost first.
std::vector<std::string> delay_rules(const Activity& a);

/// A communication capability exposed as a next action.
struct SyncOffer {
  ActivityKind kind;  // Receive, Invoke, Reply, ReplyBar or Pick
  std::string pl;
  std::string op;     // empty for Reply/ReplyBar
  std::string var;
  friend bool operator==(const SyncOffer&, const SyncOffer&) = default;
};

std::vector<SyncOffer> sync_offers(const Activity& a);

}  // namespace chorsem
