// Orchestrator level: a main activity running next to a pool of spawned
// event handlers, with fault handling and handler spawning.

#pragma once

#include <string>
#include <vector>

#include "chorsem/activity_semantics.hpp"
#include "chorsem/model.hpp"

namespace chorsem {

struct DeclaredHandler {
  Activity activity;
  /// Pre-loaded into the pool in the initial state.
  bool at_start = false;
  friend bool operator==(const DeclaredHandler&,
                         const DeclaredHandler&) = default;
};

struct OrchestratorDef {
  std::string id;
  /// Declared variables with their initial values, in declaration order.
  std::vector<std::pair<std::string, Value>> vars;
  Activity main;
  Activity fault_handler;
  std::vector<DeclaredHandler> handlers;
  SourcePos pos;

  VarStore initial_sigma() const;
  friend bool operator==(const OrchestratorDef& a, const OrchestratorDef& b) {
    return a.id == b.id && a.vars == b.vars && a.main == b.main &&
           a.fault_handler == b.fault_handler && a.handlers == b.handlers;
  }
};

struct OrchStep {
  TransitionLabel label;
  LocalState local;
  ResourceStore rho;
  std::vector<std::string> rules;
};

/// Context for one orchestrator: its definition, the op table and the
/// communication mode.
struct OrchContext {
  const OrchestratorDef* def = nullptr;
  const OpTable* ops = nullptr;
  Mode mode;
};

/// Notif1-Notif4 steps of `local` against the shared store.
std::vector<OrchStep> orch_action_steps(const OrchContext& ctx,
                                        const LocalState& local,
                                        const ResourceStore& rho);

bool orch_can_delay(const LocalState& local);

/// Name of the first component that has no delay rule, or empty.
std::string delay_blocker(const LocalState& local);

/// NotifD for one orchestrator. Expiry handlers are taken from the pre-tick
/// store `rho`; the caller ticks rho once for the whole choreography.
LocalState orch_delay_step(const LocalState& local, const ResourceStore& rho,
                           ExpiryTarget target);

/// Adds instances whose origin has no live instance yet, in origin order.
HandlerPool spawn_handlers(const HandlerPool& pool,
                           std::vector<HandlerInstance> fresh);

/// Drops completed (Empty) instances.
HandlerPool prune_pool(HandlerPool pool);

}  // namespace chorsem
