#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pg/game.hpp"
#include "pg/graph_game.hpp"
#include "pg/net.hpp"
#include "pg/sat.hpp"
#include "pg/strategy.hpp"

namespace pg {

enum class SolveMode { Auto, General, TwoSat };

struct SolveOptions {
  SolveMode mode = SolveMode::Auto;
  unsigned workers = 1;  // >1 evaluates each round's formulas in parallel
};

struct SolveStats {
  std::uint64_t reachable_markings = 0;
  std::uint64_t iterations = 0;
  std::uint64_t sat_calls = 0;
  Count max_env_tokens = 0;
  SolveMode mode_used = SolveMode::General;
};

struct Verdict {
  Winner winner = Winner::Environment;
  std::optional<CommitmentStrategy> strategy;  // present iff the system wins
  SolveStats stats;
};

/// Formula for one marking against the current losing set. bad_reachable
/// short-circuits the formula: a bad marking is environmentally reachable, so
/// no commitment helps and the marking is lost outright.
struct CnfBuild {
  bool bad_reachable = false;
  Cnf cnf;
};

/// Builds the commitment formula for reach.markings[marking_index]. `attr`
/// flags markings already known lost (indexed like reach.markings). Variables
/// are the outgoing transitions of the marking's system place. The formula is
/// satisfiable by exactly the commitments that survive one round: no two
/// committed transitions simultaneously enabled, no committed transition
/// enabled with spare input tokens, no avoidable standstill, no committed step
/// into the losing set.
CnfBuild build_cnf(const PetriGame& game, const ReachabilityGraph& reach,
                   std::uint32_t marking_index, const std::vector<char>& attr);

/// Fixpoint decision procedure: grows the losing set until stable, then reads
/// a winning commitment choice for every surviving marking off the final
/// round's satisfying assignments. Deterministic for fixed inputs and options,
/// including workers > 1.
Verdict decide(const PetriGame& game, const SolveOptions& options = {});

std::string mode_name(SolveMode mode);

}  // namespace pg
