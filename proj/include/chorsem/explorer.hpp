// Explicit-state construction of the transition system of a choreography,
// state classification, traces and exports.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chorsem/choreography.hpp"

namespace chorsem {

struct Limits {
  std::size_t max_states = 100000;
  std::size_t max_depth = 100000;
  /// Delay transitions allowed along the shortest path to a state.
  std::size_t max_delay_steps = 1000;
};

enum StateFlag : unsigned {
  kTerminalSuccess = 1u << 0,
  kDeadlock = 1u << 1,
  kTimelock = 1u << 2,
  kFrontierCut = 1u << 3,
};

std::vector<std::string> flag_names(unsigned flags);

struct LtsEdge {
  std::size_t from = 0;
  TransitionLabel label;
  std::size_t to = 0;
  std::string rule;
};

struct Lts {
  std::vector<ChorState> states;
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t initial = 0;
  std::vector<LtsEdge> edges;
  /// Outgoing edge indices per state, in edge order.
  std::vector<std::vector<std::size_t>> out;
  std::vector<unsigned> flags;
  /// BFS depth and delay count of the first path that reached each state.
  std::vector<std::size_t> depth;
  std::vector<std::size_t> delays;
  bool limits_hit = false;

  std::optional<std::size_t> find(const ChorState& cs) const;
  std::size_t count(unsigned flag) const;
};

Lts explore(const ChoreographyDef& def, const Limits& limits = {});

/// Recomputes the classification flags of an explored Lts (frontier cuts
/// are kept).
void classify(Lts& lts);

struct Trace {
  /// Visited states; one more entry than `labels`.
  std::vector<std::size_t> states;
  std::vector<TransitionLabel> labels;
};

/// Shortest path from the initial state to a state satisfying `pred`.
std::optional<Trace> find_trace(
    const Lts& lts, const std::function<bool(std::size_t)>& pred);

/// Shortest path whose labels contain `patterns` as a subsequence. A pattern
/// matches a label text exactly, with `*` matching any run of characters.
std::optional<Trace> find_trace_labels(const Lts& lts,
                                       const std::vector<std::string>& patterns);

bool glob_match(const std::string& pattern, const std::string& text);

struct Walk {
  std::vector<ChorState> states;
  std::vector<TransitionLabel> labels;
};

/// Seeded random path of at most `steps` transitions from the initial state.
Walk random_walk(const ChoreographyDef& def, std::uint64_t seed,
                 std::size_t steps);

// ---------------------------------------------------------------------------
// Serialised form

struct SubDoc {
  std::string orch;
  std::string cond;
  friend bool operator==(const SubDoc&, const SubDoc&) = default;
};

struct ResourceDoc {
  std::string epr;
  Value value = 0;
  Value lifetime = 0;
  std::vector<SubDoc> subs;
  friend bool operator==(const ResourceDoc&, const ResourceDoc&) = default;
};

struct LocalDoc {
  std::string orch;
  std::string activity;
  std::vector<std::string> pool;
  std::map<std::string, Value> sigma;
  friend bool operator==(const LocalDoc&, const LocalDoc&) = default;
};

struct StateDoc {
  std::size_t id = 0;
  std::string key;
  std::vector<std::string> flags;
  std::vector<LocalDoc> locals;
  std::vector<ResourceDoc> rho;
  friend bool operator==(const StateDoc&, const StateDoc&) = default;
};

struct EdgeDoc {
  std::size_t from = 0;
  std::string label;
  std::size_t to = 0;
  friend bool operator==(const EdgeDoc&, const EdgeDoc&) = default;
};

struct LtsDocument {
  std::vector<StateDoc> states;
  std::size_t initial = 0;
  std::vector<EdgeDoc> edges;
  bool limits_hit = false;
  friend bool operator==(const LtsDocument&, const LtsDocument&) = default;
};

LtsDocument to_document(const Lts& lts);
std::string export_json(const LtsDocument& doc);
/// Throws ModelError on malformed input.
LtsDocument load_json(const std::string& text);
std::string export_dot(const LtsDocument& doc);

}  // namespace chorsem
