#pragma once

#include <unordered_set>
#include <vector>

#include "pg/net.hpp"

namespace pg {

/// Bad-state specification. Either a place set (a marking is bad iff it puts
/// a token on any listed place) or an explicit marking set (membership is
/// exact). An empty spec declares nothing bad.
struct BadSpec {
  enum class Kind { Places, Markings };

  Kind kind = Kind::Places;
  std::vector<Id> places;       // sorted, unique
  std::vector<Marking> markings;  // canonical order, for serialization
  std::unordered_set<Marking, MultisetHash> marking_set;

  static BadSpec none() { return {}; }
  static BadSpec from_places(std::vector<Id> ps);
  static BadSpec from_markings(std::vector<Marking> ms);

  bool is_bad(const Marking& m) const;
  bool empty() const { return places.empty() && markings.empty(); }

  bool operator==(const BadSpec&) const = default;
};

/// A bounded net whose places are partitioned into system and environment,
/// with a bad-state spec. The one-system-player fragment (exactly one system
/// token in every reachable marking) is established by validate().
struct PetriGame {
  PetriNet net;
  std::vector<bool> system_place;       // by place id
  BadSpec bad;
  Count bound = 1;

  // Derived on finalize(): a transition is a system transition iff its
  // precondition touches a system place; otherwise it is purely
  // environmental and can never be restricted by a strategy.
  std::vector<bool> system_transition;
  // env_pre_tokens[t]: total environment tokens consumed by t, used by the
  // two-token solver to classify transition shapes.
  std::vector<Count> env_pre_tokens;

  void finalize();

  bool purely_environmental(Id t) const { return !system_transition[t]; }

  /// The unique system place carrying the token of m. Pre: m is a validated
  /// reachable marking (throws NotOneSystemPlayerError otherwise).
  Id system_place_of(const Marking& m) const;

  /// Transitions consuming the system place s, sorted by id. Commitments are
  /// subsets of this set.
  const std::vector<Id>& system_postset(Id s) const { return net.place_consumers[s]; }

  std::uint64_t env_tokens(const Marking& m) const;

  bool operator==(const PetriGame&) const = default;
};

bool is_bad(const PetriGame& game, const Marking& m);

struct ValidationReport {
  std::size_t reachable_markings = 0;
  Count max_env_tokens = 0;
  Count bound = 1;
};

/// Explores the net within the bound and checks the one-system-player
/// fragment. Throws BoundExceededError / NotOneSystemPlayerError.
ValidationReport validate(const PetriGame& game);
ValidationReport validate(const PetriGame& game, const ReachabilityGraph& reach);

}  // namespace pg
