#include "pg/graph_game.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "pg/errors.hpp"

namespace pg {

namespace {

bool committed(const std::vector<Id>& c, Id t) {
  return std::binary_search(c.begin(), c.end(), t);
}

struct GameVertexHash {
  std::size_t operator()(const GameVertex& v) const {
    std::size_t h = v.marking.hash();
    if (v.commitment) {
      h = h * 31 + 1;
      for (Id t : *v.commitment) h = h * 1000003 + t;
    }
    if (v.responsibility) h ^= v.responsibility->hash() + 0x9e3779b9 + (h << 6);
    return h;
  }
};

}  // namespace

std::vector<std::pair<EdgeKind, GameVertex>> successors(const PetriGame& game,
                                                        const GameVertex& v,
                                                        GameVariant variant) {
  const PetriNet& net = game.net;
  const bool tracked = variant == GameVariant::Tracked;
  std::vector<std::pair<EdgeKind, GameVertex>> out;

  if (v.player0()) {
    // One edge per commitment, enumerated by ascending bitmask over the
    // sorted postset so smaller sets come first.
    Id s = game.system_place_of(v.marking);
    const std::vector<Id>& postset = game.system_postset(s);
    if (postset.size() >= 26)
      throw VertexCapError("system place '" + net.place_names[s] + "' has " +
                           std::to_string(postset.size()) +
                           " outgoing transitions; commitment enumeration refused");
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << postset.size()); ++mask) {
      std::vector<Id> c;
      for (std::size_t i = 0; i < postset.size(); ++i)
        if (mask >> i & 1) c.push_back(postset[i]);
      GameVertex succ{v.marking, std::move(c), std::nullopt};
      if (tracked) succ.responsibility = v.responsibility;
      out.emplace_back(EdgeKind::Commit, std::move(succ));
    }
    return out;
  }

  const std::vector<Id>& c = *v.commitment;
  for (Id t = 0; t < net.transition_count(); ++t) {
    if (!net.pre[t].subset_of(v.marking)) continue;
    if (game.purely_environmental(t)) {
      Marking next = v.marking - net.pre[t] + net.post[t];
      if (!tracked) {
        out.emplace_back(EdgeKind::EnvFire, GameVertex{std::move(next), c, std::nullopt});
      } else {
        // Player 1 additionally picks which produced token inherits the
        // responsibility.
        Multiset base = *v.responsibility - net.pre[t];
        for (const auto& [o, n] : net.post[t]) {
          GameVertex succ{next, c, base + Multiset::single(o)};
          out.emplace_back(EdgeKind::EnvFire, std::move(succ));
        }
      }
    } else if (committed(c, t)) {
      if (tracked && !v.responsibility->subset_of(net.pre[t])) continue;
      Marking next = v.marking - net.pre[t] + net.post[t];
      GameVertex succ{next, std::nullopt, std::nullopt};
      if (tracked) succ.responsibility = Multiset::single(game.system_place_of(succ.marking));
      out.emplace_back(EdgeKind::SysFire, std::move(succ));
    }
  }
  return out;
}

BadClass classify_bad(const PetriGame& game, const GameVertex& v) {
  if (v.player0()) return BadClass::None;
  const PetriNet& net = game.net;
  const Marking& m = v.marking;
  const std::vector<Id>& c = *v.commitment;

  if (is_bad(game, m)) return BadClass::BadMarking;

  std::vector<Id> committed_enabled;
  for (Id t : c)
    if (net.pre[t].subset_of(m)) committed_enabled.push_back(t);

  if (committed_enabled.size() >= 2) return BadClass::CommitClash;

  for (Id t : committed_enabled)
    for (const auto& [p, n] : net.pre[t])
      if (n < m.count(p)) return BadClass::InstanceClash;

  bool any_enabled = false;
  bool only_refused_system = true;
  for (Id t = 0; t < net.transition_count(); ++t) {
    if (!net.pre[t].subset_of(m)) continue;
    any_enabled = true;
    if (game.purely_environmental(t) || committed(c, t)) {
      only_refused_system = false;
      break;
    }
  }
  if (any_enabled && only_refused_system) return BadClass::Deadlock;
  return BadClass::None;
}

const char* bad_class_name(BadClass c) {
  switch (c) {
    case BadClass::None: return "none";
    case BadClass::BadMarking: return "bad marking reached";
    case BadClass::CommitClash: return "two allowed transitions enabled at once";
    case BadClass::InstanceClash: return "allowed transition with ambiguous token instances";
    case BadClass::Deadlock: return "only unallowed system transitions enabled";
  }
  return "?";
}

ExplicitSolve solve_explicit(const PetriGame& game, GameVariant variant,
                             std::size_t vertex_cap) {
  std::vector<GameVertex> vertices;
  std::unordered_map<GameVertex, std::uint32_t, GameVertexHash> index;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<char> bad;

  auto intern = [&](GameVertex v) -> std::uint32_t {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    if (vertices.size() >= vertex_cap)
      throw VertexCapError("explicit game exceeds vertex cap of " + std::to_string(vertex_cap));
    if (v.responsibility && !v.responsibility->subset_of(v.marking))
      throw Error("internal: responsibility outside marking");
    std::uint32_t id = std::uint32_t(vertices.size());
    index.emplace(v, id);
    vertices.push_back(std::move(v));
    succ.emplace_back();
    bad.push_back(classify_bad(game, vertices[id]) != BadClass::None);
    return id;
  };

  GameVertex init{game.net.initial, std::nullopt, std::nullopt};
  if (variant == GameVariant::Tracked)
    init.responsibility = Multiset::single(game.system_place_of(game.net.initial));
  std::uint32_t init_id = intern(std::move(init));

  // Forward closure; bad vertices end the play, so they stay unexpanded.
  for (std::uint32_t v = 0; v < vertices.size(); ++v) {
    if (bad[v]) continue;
    for (auto& [kind, to] : successors(game, vertices[v], variant)) {
      std::uint32_t w = intern(std::move(to));  // may reallocate succ
      succ[v].push_back(w);
    }
  }

  ExplicitSolve result;
  result.vertex_count = vertices.size();
  for (char b : bad) result.bad_vertices += b != 0;

  // Player-1 attractor to the bad set, over the successor-closed subgraph.
  std::vector<std::vector<std::uint32_t>> pred(vertices.size());
  std::vector<std::uint32_t> pending(vertices.size(), 0);  // P0: successors not yet in attractor
  for (std::uint32_t v = 0; v < vertices.size(); ++v) {
    pending[v] = std::uint32_t(succ[v].size());
    for (std::uint32_t w : succ[v]) pred[w].push_back(v);
  }

  std::vector<char> attr(vertices.size(), 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < vertices.size(); ++v)
    if (bad[v]) {
      attr[v] = 1;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t u : pred[v]) {
      if (attr[u]) continue;
      if (vertices[u].player0()) {
        if (--pending[u] == 0) {
          attr[u] = 1;
          queue.push_back(u);
        }
      } else {
        attr[u] = 1;
        queue.push_back(u);
      }
    }
  }
  for (char a : attr) result.attractor_size += a != 0;

  if (attr[init_id]) {
    result.winner = Winner::Environment;
    return result;
  }
  result.winner = Winner::System;

  // Extract the memoryless strategy: first commitment avoiding the
  // attractor, restricted walk from the initial vertex.
  std::vector<char> seen(vertices.size(), 0);
  std::deque<std::uint32_t> walk{init_id};
  seen[init_id] = 1;
  while (!walk.empty()) {
    std::uint32_t v = walk.front();
    walk.pop_front();
    if (vertices[v].player0()) {
      for (std::uint32_t w : succ[v]) {
        if (attr[w]) continue;
        result.strategy.choices.emplace(vertices[v].marking, *vertices[w].commitment);
        if (!seen[w]) {
          seen[w] = 1;
          walk.push_back(w);
        }
        break;
      }
    } else {
      for (std::uint32_t w : succ[v])
        if (!seen[w]) {
          seen[w] = 1;
          walk.push_back(w);
        }
    }
  }
  return result;
}

std::optional<std::uint64_t> vertex_count_bound(Count k, std::size_t places,
                                                std::size_t transitions) {
  auto markings = marking_count_bound(k, places);
  if (!markings) return std::nullopt;
  if (transitions >= 63) return std::nullopt;
  std::uint64_t commitments = (std::uint64_t(1) << transitions) + 1;
  if (*markings != 0 && commitments > UINT64_MAX / *markings) return std::nullopt;
  return *markings * commitments;
}

}  // namespace pg
