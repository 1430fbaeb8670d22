#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pg/multiset.hpp"

namespace pg {

/// Place/transition net with multiset flow. Ids are dense indices assigned in
/// lexicographic name order (NetBuilder sorts on build), so iterating by id is
/// the canonical deterministic order used everywhere: exploration, CNF
/// variables, serialization.
struct PetriNet {
  std::vector<std::string> place_names;        // index = place id
  std::vector<std::string> transition_names;   // index = transition id
  std::vector<Multiset> pre;                   // per transition, over place ids
  std::vector<Multiset> post;
  Marking initial;

  std::unordered_map<std::string, Id> place_index;
  std::unordered_map<std::string, Id> transition_index;

  /// Per place: ids of transitions consuming it (sorted). The postset of a
  /// place in flow terms.
  std::vector<std::vector<Id>> place_consumers;

  std::size_t place_count() const { return place_names.size(); }
  std::size_t transition_count() const { return transition_names.size(); }

  std::string marking_to_string(const Marking& m) const;

  bool operator==(const PetriNet&) const = default;
};

/// Collects places/transitions by name, then build() sorts both id spaces,
/// validates references and the nonempty pre/post rule, and produces the net.
class NetBuilder {
 public:
  void add_place(const std::string& name);
  void add_transition(const std::string& name,
                      std::vector<std::pair<std::string, Count>> pre,
                      std::vector<std::pair<std::string, Count>> post);
  void add_initial(const std::string& place, Count n = 1);

  bool has_place(const std::string& name) const;
  bool has_transition(const std::string& name) const;

  PetriNet build() const;

 private:
  struct ProtoTransition {
    std::string name;
    std::vector<std::pair<std::string, Count>> pre, post;
  };
  std::vector<std::string> places_;
  std::vector<ProtoTransition> transitions_;
  std::vector<std::pair<std::string, Count>> initial_;
};

/// pre(t) <= m, i.e. the transition can fire. Throws UnknownNodeError for an
/// out-of-range transition id.
bool enabled(const PetriNet& net, const Marking& m, Id t);

/// m - pre(t) + post(t). Throws NotEnabledError if not enabled.
Marking fire(const PetriNet& net, const Marking& m, Id t);

/// Reachable markings and the full firing relation between them. Index 0 is
/// the initial marking; indices follow deterministic BFS insertion order.
struct ReachabilityGraph {
  std::vector<Marking> markings;
  std::unordered_map<Marking, std::uint32_t, MultisetHash> index;
  /// Per marking: (transition, target index), sorted by transition id. One
  /// entry per enabled transition.
  std::vector<std::vector<std::pair<Id, std::uint32_t>>> succ;
  std::uint32_t initial = 0;

  std::size_t size() const { return markings.size(); }
};

/// BFS over all markings reachable within bound k. Throws BoundExceededError
/// as soon as any marking (including the initial one) puts more than k tokens
/// on a place.
ReachabilityGraph explore(const PetriNet& net, Count k);

/// (k+1)^|P|, the cap on reachable k-bounded markings; nullopt when the value
/// overflows 64 bits (then no realizable count can breach it anyway).
std::optional<std::uint64_t> marking_count_bound(Count k, std::size_t places);

}  // namespace pg
