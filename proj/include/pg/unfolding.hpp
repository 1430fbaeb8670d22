#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pg/game.hpp"
#include "pg/strategy.hpp"

namespace pg {

/// Set of pairwise concurrent prefix places, sorted by id.
using Cut = std::vector<std::uint32_t>;

/// Depth-bounded branching-process prefix of a game net under a commitment
/// strategy. Places are individual tokens (conditions); every place has at
/// most one producing transition and the flow is acyclic by construction.
struct UnfoldingPrefix {
  struct Place {
    Id label;  // net place
    std::optional<std::uint32_t> producer;
  };
  struct Transition {
    Id label;  // net transition
    Cut pre;   // consumed places, sorted
    Cut post;  // fresh places, sorted
  };

  std::vector<Place> places;
  std::vector<Transition> transitions;
  Cut initial_cut;
  std::size_t depth_bound = 0;

  /// States at the depth frontier that were not expanded, and their cuts.
  std::size_t truncated_states = 0;
  std::vector<Cut> frontier_cuts;

  /// One record per visited choice state: the cut, its system place and the
  /// number of transition instances in the cut's past.
  struct Associated {
    Cut cut;
    std::uint32_t system_place;
    std::size_t depth;
  };
  std::vector<Associated> associated;

  /// Derived: consumers per place, and causal pasts as transition bitsets
  /// (64-bit words, little-endian; shorter vectors are zero-padded).
  std::vector<std::vector<std::uint32_t>> consumers;
  std::vector<std::vector<std::uint64_t>> place_past;
  std::vector<std::vector<std::uint64_t>> transition_past;
};

/// Builds the prefix by breadth-first traversal of the strategy-restricted
/// game: choice steps reuse the cut, firing steps consume a label-preimage of
/// the transition's precondition and either reuse the instance with that exact
/// precondition or create one with fresh output places. States whose cut
/// already contains `depth` transition instances in its past are left
/// unexpanded and counted. The strategy must cover every marking it reaches.
UnfoldingPrefix unfold(const PetriGame& game, const CommitmentStrategy& strategy,
                       std::size_t depth);

/// Last known cut of a place x: every place that is not strictly below x and
/// whose producer (if any) is strictly below x. Equals the cut reached by
/// firing exactly the transitions in x's causal past.
Cut lkc(const UnfoldingPrefix& prefix, std::uint32_t place);

/// Label image of a cut.
Marking cut_marking(const UnfoldingPrefix& prefix, const Cut& cut);

/// Number of transition instances in the cut's past.
std::size_t cut_depth(const UnfoldingPrefix& prefix, const Cut& cut);

/// All cuts reachable by firing prefix transitions from the initial cut, in
/// breadth-first order.
std::vector<Cut> enumerate_cuts(const UnfoldingPrefix& prefix);

/// Occurrence-net and branching-process structural invariants; throws Error.
void check_structure(const UnfoldingPrefix& prefix);

struct AxiomReport {
  std::size_t cuts_checked = 0;
  std::size_t cuts_skipped = 0;  // depth-truncated, successors incomplete
};

/// Checks safety, determinism, deadlock avoidance and justified refusal on
/// every cut whose successors are fully inside the depth bound. Throws
/// AxiomViolationError on the first violation.
AxiomReport check_axioms(const PetriGame& game, const UnfoldingPrefix& prefix);

std::string cut_to_string(const PetriNet& net, const UnfoldingPrefix& prefix, const Cut& cut);

}  // namespace pg
