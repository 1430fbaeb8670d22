#include "pg/strategy.hpp"

#include <algorithm>
#include <map>

#include "pg/errors.hpp"
#include "pg/graph_game.hpp"

namespace pg {
namespace {

std::string describe(const PetriGame& game, const GameVertex& v) {
  std::string s = game.net.marking_to_string(v.marking);
  if (v.commitment) {
    s += " commit {";
    bool first = true;
    for (Id t : *v.commitment) {
      if (!first) s += ", ";
      s += game.net.transition_names[t];
      first = false;
    }
    s += "}";
  }
  return s;
}

}  // namespace

StrategyReport validate_strategy(const PetriGame& game, const CommitmentStrategy& strategy) {
  std::vector<GameVertex> order;
  std::vector<std::size_t> parent;
  std::map<GameVertex, std::size_t> index;

  auto play_to = [&](std::size_t at) {
    std::vector<std::string> play;
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    for (std::size_t cur = at; cur != kNone; cur = parent[cur]) play.push_back(describe(game, order[cur]));
    std::reverse(play.begin(), play.end());
    return play;
  };
  auto intern = [&](GameVertex v, std::size_t from) {
    auto [it, fresh] = index.emplace(std::move(v), order.size());
    if (fresh) {
      order.push_back(it->first);
      parent.push_back(from);
    }
    return fresh;
  };

  intern(GameVertex{game.net.initial, std::nullopt, std::nullopt}, static_cast<std::size_t>(-1));
  for (std::size_t head = 0; head < order.size(); ++head) {
    GameVertex v = order[head];
    if (v.player0()) {
      auto it = strategy.choices.find(v.marking);
      if (it == strategy.choices.end())
        throw CounterexampleError(
            "no commitment for reachable marking " + game.net.marking_to_string(v.marking),
            play_to(head));
      std::vector<Id> commitment = it->second;
      std::sort(commitment.begin(), commitment.end());
      commitment.erase(std::unique(commitment.begin(), commitment.end()), commitment.end());
      const auto& postset = game.system_postset(game.system_place_of(v.marking));
      for (Id t : commitment)
        if (!std::binary_search(postset.begin(), postset.end(), t))
          throw Error("commitment at " + game.net.marking_to_string(v.marking) +
                      " names a transition outside the system place's postset: " +
                      game.net.transition_names.at(t));
      intern(GameVertex{v.marking, std::move(commitment), std::nullopt}, head);
      continue;
    }
    BadClass bc = classify_bad(game, v);
    if (bc != BadClass::None)
      throw CounterexampleError(std::string("strategy allows a losing play: ") +
                                    bad_class_name(bc) + " at " + describe(game, v),
                                play_to(head));
    for (auto& [kind, succ] : successors(game, v, GameVariant::Plain)) {
      (void)kind;
      intern(std::move(succ), head);
    }
  }
  return StrategyReport{order.size()};
}

}  // namespace pg
