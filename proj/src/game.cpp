#include "pg/game.hpp"

#include <algorithm>

#include "pg/errors.hpp"

namespace pg {

BadSpec BadSpec::from_places(std::vector<Id> ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  BadSpec spec;
  spec.kind = Kind::Places;
  spec.places = std::move(ps);
  return spec;
}

BadSpec BadSpec::from_markings(std::vector<Marking> ms) {
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  BadSpec spec;
  spec.kind = Kind::Markings;
  spec.marking_set.insert(ms.begin(), ms.end());
  spec.markings = std::move(ms);
  return spec;
}

bool BadSpec::is_bad(const Marking& m) const {
  if (kind == Kind::Places) {
    for (Id p : places)
      if (m.contains(p)) return true;
    return false;
  }
  return marking_set.count(m) > 0;
}

void PetriGame::finalize() {
  system_transition.assign(net.transition_count(), false);
  env_pre_tokens.assign(net.transition_count(), 0);
  for (Id t = 0; t < net.transition_count(); ++t) {
    for (const auto& [p, n] : net.pre[t]) {
      if (system_place[p])
        system_transition[t] = true;
      else
        env_pre_tokens[t] += n;
    }
  }
}

Id PetriGame::system_place_of(const Marking& m) const {
  Id found = 0;
  std::uint64_t tokens = 0;
  for (const auto& [p, n] : m) {
    if (system_place[p]) {
      found = p;
      tokens += n;
    }
  }
  if (tokens != 1) throw NotOneSystemPlayerError(net.marking_to_string(m), tokens);
  return found;
}

std::uint64_t PetriGame::env_tokens(const Marking& m) const {
  std::uint64_t total = 0;
  for (const auto& [p, n] : m)
    if (!system_place[p]) total += n;
  return total;
}

bool is_bad(const PetriGame& game, const Marking& m) { return game.bad.is_bad(m); }

ValidationReport validate(const PetriGame& game) {
  return validate(game, explore(game.net, game.bound));
}

ValidationReport validate(const PetriGame& game, const ReachabilityGraph& reach) {
  ValidationReport report;
  report.reachable_markings = reach.size();
  report.bound = game.bound;
  for (const Marking& m : reach.markings) {
    game.system_place_of(m);  // throws unless exactly one system token
    report.max_env_tokens =
        std::max<Count>(report.max_env_tokens, Count(game.env_tokens(m)));
  }
  return report;
}

}  // namespace pg
