// Choreography level: orchestrators in parallel over a shared resource store,
// with handshake synchronisation and lockstep time.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chorsem/activity_semantics.hpp"
#include "chorsem/model.hpp"
#include "chorsem/orchestration.hpp"

namespace chorsem {

struct PartnerLink {
  std::string name;
  std::string sender;
  std::string receiver;
  SourcePos pos;
  friend bool operator==(const PartnerLink& a, const PartnerLink& b) {
    return a.name == b.name && a.sender == b.sender && a.receiver == b.receiver;
  }
};

struct ChorConfig {
  ExpiryTarget expiry_target = ExpiryTarget::Creator;
  /// Environment values for unmatched communication. Empty means closed:
  /// communication only happens between orchestrators.
  std::vector<Value> open_domain;
  /// Time also waits for pending internal actions.
  bool urgent_internal = false;
  friend bool operator==(const ChorConfig&, const ChorConfig&) = default;
};

struct ChoreographyDef {
  std::string name;
  std::vector<OrchestratorDef> orchestrators;
  std::vector<PartnerLink> partnerlinks;
  /// Operations in declaration order; `ops` indexes them by name.
  std::vector<OpDef> op_list;
  OpTable ops;
  ChorConfig config;

  /// Rebuilds `ops` from `op_list`.
  void index_ops();
  std::optional<std::size_t> orch_index(const std::string& id) const;
  const PartnerLink* find_pl(const std::string& name) const;

  friend bool operator==(const ChoreographyDef& a, const ChoreographyDef& b);
};

struct ChorEdge {
  TransitionLabel label;
  ChorState target;
  /// Choreography rule: Chor1, Chor2, Chor3, Chor4, Chor5, Chor6 or Env.
  std::string rule;
  /// Full derivation, innermost rule first.
  std::vector<std::string> rules;
  /// Indices of the orchestrators that moved (one, or two for a sync).
  std::vector<std::size_t> actors;

  bool is_sync() const {
    return rule == "Chor4" || rule == "Chor5" || rule == "Chor6";
  }
};

ChorState initial_state(const ChoreographyDef& def);

/// Chor1, Chor2 and Chor4-Chor6 transitions, ordered by (actor, rule, label).
std::vector<ChorEdge> chor_action_steps(const ChoreographyDef& def,
                                        const ChorState& cs);

enum class BlockReason { None, CommPending, UrgentActivity, InternalPending };

const char* to_string(BlockReason r);

struct DelayResult {
  std::optional<ChorState> state;
  BlockReason reason = BlockReason::None;
  /// Blocking component, e.g. "O1:main".
  std::string detail;
};

/// Chor3. `actions` may pass precomputed chor_action_steps of `cs`.
DelayResult chor_delay(const ChoreographyDef& def, const ChorState& cs,
                       const std::vector<ChorEdge>* actions = nullptr);

/// Every local is (Empty, no handlers).
bool is_terminal(const ChorState& cs);

}  // namespace chorsem
