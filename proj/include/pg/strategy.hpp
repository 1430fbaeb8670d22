#pragma once

#include <map>
#include <string>
#include <vector>

#include "pg/game.hpp"

namespace pg {

/// Finite-state winning strategy: one commitment (set of allowed system
/// transitions, subset of the system place's postset) per marking the
/// strategy can reach. The ordered map keeps iteration and serialization
/// deterministic.
struct CommitmentStrategy {
  std::map<Marking, std::vector<Id>> choices;

  bool operator==(const CommitmentStrategy&) const = default;
};

struct StrategyReport {
  std::size_t vertices_visited = 0;
};

/// Walks the game graph restricted by the strategy from the initial vertex
/// and checks that no reachable vertex is bad. Throws CounterexampleError
/// with the offending play (also when the strategy lacks a commitment for a
/// reachable marking).
StrategyReport validate_strategy(const PetriGame& game, const CommitmentStrategy& strategy);

}  // namespace pg
