// Seeded generator of small valid choreographies.

#pragma once

#include <cstdint>
#include <random>

#include "chorsem/choreography.hpp"

namespace chorsem::testing {

struct GenOptions {
  int max_orchestrators = 3;
  /// Basic activities per orchestrator main.
  int max_activities = 6;
  /// Include declared handlers, fault handlers and non-default config.
  bool rich = true;
};

/// A model that passes validate_model. Variables are x and y in every
/// orchestrator; ops and partnerlinks are drawn at random.
ChoreographyDef random_model(std::uint64_t seed, const GenOptions& opts = {});

/// First model from `seed` upwards whose state space is finite and at most
/// `max_states`; `seed` is advanced past the returned model.
ChoreographyDef random_small_model(std::uint64_t& seed, std::size_t max_states,
                                   const GenOptions& opts = {});

}  // namespace chorsem::testing
