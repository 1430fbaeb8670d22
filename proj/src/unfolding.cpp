#include "pg/unfolding.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "pg/errors.hpp"
#include "pg/graph_game.hpp"

namespace pg {
namespace {

void set_bit(std::vector<std::uint64_t>& bits, std::uint32_t i) {
  std::size_t word = i / 64;
  if (bits.size() <= word) bits.resize(word + 1, 0);
  bits[word] |= std::uint64_t{1} << (i % 64);
}

bool test_bit(const std::vector<std::uint64_t>& bits, std::uint32_t i) {
  std::size_t word = i / 64;
  return word < bits.size() && ((bits[word] >> (i % 64)) & 1);
}

void union_into(std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& other) {
  if (acc.size() < other.size()) acc.resize(other.size(), 0);
  for (std::size_t w = 0; w < other.size(); ++w) acc[w] |= other[w];
}

std::size_t count_bits(const std::vector<std::uint64_t>& bits) {
  std::size_t n = 0;
  for (std::uint64_t w : bits) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// All subsets of `cut` whose label image equals `want`, in ascending
// lexicographic order of the chosen place ids. Places of one label are
// combined independently per label, then merged across labels.
std::vector<Cut> label_preimages(const UnfoldingPrefix& px, const Cut& cut,
                                 const Multiset& want) {
  std::vector<Cut> result{{}};
  for (const auto& [label, need] : want.entries()) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t p : cut)
      if (px.places[p].label == label) pool.push_back(p);
    if (pool.size() < need) return {};
    // Fixed-size combinations of `pool`, lexicographically ascending.
    std::vector<std::vector<std::uint32_t>> combos;
    std::vector<std::uint32_t> idx(need);
    for (std::uint32_t i = 0; i < need; ++i) idx[i] = i;
    for (;;) {
      std::vector<std::uint32_t> combo;
      combo.reserve(need);
      for (std::uint32_t i : idx) combo.push_back(pool[i]);
      combos.push_back(std::move(combo));
      std::uint32_t k = need;
      while (k > 0 && idx[k - 1] == pool.size() - need + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::uint32_t i = k; i < need; ++i) idx[i] = idx[i - 1] + 1;
    }
    std::vector<Cut> next;
    next.reserve(result.size() * combos.size());
    for (const Cut& base : result)
      for (const auto& combo : combos) {
        Cut merged = base;
        merged.insert(merged.end(), combo.begin(), combo.end());
        next.push_back(std::move(merged));
      }
    result = std::move(next);
  }
  for (Cut& c : result) std::sort(c.begin(), c.end());
  return result;
}

Cut replace_tokens(const Cut& cut, const Cut& consumed, const Cut& produced) {
  Cut out;
  out.reserve(cut.size() - consumed.size() + produced.size());
  std::set_difference(cut.begin(), cut.end(), consumed.begin(), consumed.end(),
                      std::back_inserter(out));
  Cut merged;
  merged.reserve(out.size() + produced.size());
  std::merge(out.begin(), out.end(), produced.begin(), produced.end(),
             std::back_inserter(merged));
  return merged;
}

}  // namespace

Marking cut_marking(const UnfoldingPrefix& prefix, const Cut& cut) {
  std::vector<std::pair<Id, Count>> entries;
  entries.reserve(cut.size());
  for (std::uint32_t p : cut) entries.emplace_back(prefix.places[p].label, 1);
  return Multiset::from_entries(std::move(entries));
}

std::size_t cut_depth(const UnfoldingPrefix& prefix, const Cut& cut) {
  std::vector<std::uint64_t> past;
  for (std::uint32_t p : cut) union_into(past, prefix.place_past[p]);
  return count_bits(past);
}

Cut lkc(const UnfoldingPrefix& prefix, std::uint32_t place) {
  const auto& past = prefix.place_past[place];
  Cut out;
  for (std::uint32_t p = 0; p < prefix.places.size(); ++p) {
    const auto& producer = prefix.places[p].producer;
    if (producer && !test_bit(past, *producer)) continue;
    bool below = false;
    for (std::uint32_t consumer : prefix.consumers[p])
      if (test_bit(past, consumer)) {
        below = true;
        break;
      }
    if (!below) out.push_back(p);
  }
  return out;
}

std::vector<Cut> enumerate_cuts(const UnfoldingPrefix& prefix) {
  std::vector<Cut> order{prefix.initial_cut};
  std::set<Cut> seen{prefix.initial_cut};
  for (std::size_t head = 0; head < order.size(); ++head) {
    Cut cut = order[head];
    for (const auto& t : prefix.transitions) {
      if (!std::includes(cut.begin(), cut.end(), t.pre.begin(), t.pre.end())) continue;
      Cut next = replace_tokens(cut, t.pre, t.post);
      if (seen.insert(next).second) order.push_back(std::move(next));
    }
  }
  return order;
}

std::string cut_to_string(const PetriNet& net, const UnfoldingPrefix& prefix, const Cut& cut) {
  std::string out = "{";
  bool first = true;
  for (std::uint32_t p : cut) {
    if (!first) out += ", ";
    out += net.place_names.at(prefix.places[p].label) + "#" + std::to_string(p);
    first = false;
  }
  return out + "}";
}

void check_structure(const UnfoldingPrefix& prefix) {
  for (std::uint32_t p = 0; p < prefix.places.size(); ++p) {
    bool initial = !prefix.places[p].producer.has_value();
    bool in_init = std::binary_search(prefix.initial_cut.begin(), prefix.initial_cut.end(), p);
    if (initial != in_init)
      throw Error("prefix place " + std::to_string(p) +
                  " disagrees with the initial cut about having a producer");
  }
  std::set<std::pair<Id, Cut>> keys;
  for (std::uint32_t ti = 0; ti < prefix.transitions.size(); ++ti) {
    const auto& t = prefix.transitions[ti];
    if (t.pre.empty()) throw Error("prefix transition with empty precondition");
    for (const Cut* side : {&t.pre, &t.post}) {
      if (!std::is_sorted(side->begin(), side->end()) ||
          std::adjacent_find(side->begin(), side->end()) != side->end())
        throw Error("prefix transition side is not a sorted set");
    }
    for (std::uint32_t p : t.post)
      if (!prefix.places[p].producer || *prefix.places[p].producer != ti)
        throw Error("postcondition place does not point back to its producer");
    // Acyclicity: consumed tokens were created before everything this
    // transition creates.
    for (std::uint32_t b : t.pre)
      for (std::uint32_t p : t.post)
        if (b >= p) throw Error("prefix flow is not topologically ordered");
    if (!keys.emplace(t.label, t.pre).second)
      throw Error("two prefix transitions share label and precondition");
  }
  // No transition may depend on two consumers of one place.
  for (std::uint32_t p = 0; p < prefix.places.size(); ++p) {
    if (prefix.consumers[p].size() < 2) continue;
    for (std::uint32_t ti = 0; ti < prefix.transitions.size(); ++ti) {
      int hits = 0;
      for (std::uint32_t consumer : prefix.consumers[p])
        if (consumer == ti || test_bit(prefix.transition_past[ti], consumer)) ++hits;
      if (hits > 1)
        throw Error("prefix transition " + std::to_string(ti) + " is in self-conflict");
    }
  }
}

UnfoldingPrefix unfold(const PetriGame& game, const CommitmentStrategy& strategy,
                       std::size_t depth) {
  const PetriNet& net = game.net;
  UnfoldingPrefix px;
  px.depth_bound = depth;

  auto add_place = [&px](Id label, std::optional<std::uint32_t> producer) {
    std::uint32_t id = static_cast<std::uint32_t>(px.places.size());
    px.places.push_back({label, producer});
    px.consumers.emplace_back();
    if (producer) {
      auto past = px.transition_past[*producer];
      set_bit(past, *producer);
      px.place_past.push_back(std::move(past));
    } else {
      px.place_past.emplace_back();
    }
    return id;
  };

  for (const auto& [p, n] : net.initial.entries())
    for (Count i = 0; i < n; ++i) px.initial_cut.push_back(add_place(p, std::nullopt));
  std::sort(px.initial_cut.begin(), px.initial_cut.end());

  std::map<std::pair<Id, Cut>, std::uint32_t> instance;
  auto fire_instance = [&](Id label, const Cut& pre) {
    auto it = instance.find({label, pre});
    if (it != instance.end()) return it->second;
    std::uint32_t ti = static_cast<std::uint32_t>(px.transitions.size());
    std::vector<std::uint64_t> past;
    for (std::uint32_t b : pre) union_into(past, px.place_past[b]);
    px.transition_past.push_back(std::move(past));
    px.transitions.push_back({label, pre, {}});
    for (std::uint32_t b : pre) px.consumers[b].push_back(ti);
    Cut post;
    for (const auto& [p, n] : net.post[label].entries())
      for (Count i = 0; i < n; ++i) post.push_back(add_place(p, ti));
    std::sort(post.begin(), post.end());
    px.transitions[ti].post = std::move(post);
    instance.emplace(std::make_pair(label, pre), ti);
    return ti;
  };

  struct State {
    GameVertex vertex;
    Cut cut;
    std::size_t depth;
  };
  std::deque<State> queue;
  std::set<std::pair<GameVertex, Cut>> visited;
  std::set<Cut> frontier_seen;
  auto push_state = [&](GameVertex v, Cut c, std::size_t d) {
    if (visited.emplace(v, c).second) queue.push_back({std::move(v), std::move(c), d});
  };

  push_state(GameVertex{net.initial, std::nullopt,
                        Multiset::single(game.system_place_of(net.initial))},
             px.initial_cut, 0);
  while (!queue.empty()) {
    State st = std::move(queue.front());
    queue.pop_front();
    const Marking& m = st.vertex.marking;

    if (st.vertex.player0()) {
      Id s = game.system_place_of(m);
      std::uint32_t sys_place = 0;
      bool found = false;
      for (std::uint32_t p : st.cut)
        if (px.places[p].label == s) {
          sys_place = p;
          found = true;
          break;
        }
      if (!found) throw std::logic_error("cut lost its system token");
      px.associated.push_back({st.cut, sys_place, st.depth});

      auto it = strategy.choices.find(m);
      if (it == strategy.choices.end())
        throw Error("strategy has no commitment for marking " + net.marking_to_string(m));
      std::vector<Id> commitment = it->second;
      std::sort(commitment.begin(), commitment.end());
      commitment.erase(std::unique(commitment.begin(), commitment.end()), commitment.end());
      push_state(GameVertex{m, std::move(commitment), st.vertex.responsibility}, std::move(st.cut),
                 st.depth);
      continue;
    }

    if (st.depth >= depth) {
      ++px.truncated_states;
      if (frontier_seen.insert(st.cut).second) px.frontier_cuts.push_back(st.cut);
      continue;
    }
    // Fires follow the tracked game: a system transition only fires once the
    // responsibility multiset is contained in its precondition (the system
    // token learns about everything scheduled since its last move), and an
    // environment fire forwards the responsibility to one produced token of
    // the scheduler's choosing. Without this restriction, instances committed
    // under different markings could share a system condition and break
    // determinism.
    const Multiset& resp = *st.vertex.responsibility;
    for (Id t = 0; t < net.transition_count(); ++t) {
      bool env = game.purely_environmental(t);
      if (!env &&
          !std::binary_search(st.vertex.commitment->begin(), st.vertex.commitment->end(), t))
        continue;
      if (!enabled(net, m, t)) continue;
      if (!env && !resp.subset_of(net.pre[t])) continue;
      Marking next_marking = fire(net, m, t);
      std::vector<Multiset> next_resp;
      if (env) {
        Multiset base = resp - net.pre[t];
        for (const auto& [o, n] : net.post[t].entries())
          next_resp.push_back(base + Multiset::single(o));
      } else {
        next_resp.push_back(Multiset::single(game.system_place_of(next_marking)));
      }
      for (const Cut& pre : label_preimages(px, st.cut, net.pre[t])) {
        std::uint32_t ti = fire_instance(t, pre);
        Cut next_cut = replace_tokens(st.cut, pre, px.transitions[ti].post);
        if (cut_marking(px, next_cut) != next_marking)
          throw std::logic_error("cut image diverged from the fired marking");
        for (const Multiset& r : next_resp) {
          GameVertex nv = env ? GameVertex{next_marking, st.vertex.commitment, r}
                              : GameVertex{next_marking, std::nullopt, r};
          push_state(std::move(nv), next_cut, st.depth + 1);
        }
      }
    }
  }
  check_structure(px);
  return px;
}

AxiomReport check_axioms(const PetriGame& game, const UnfoldingPrefix& prefix) {
  const PetriNet& net = game.net;
  AxiomReport report;
  std::set<std::pair<Id, Cut>> keys;
  for (const auto& t : prefix.transitions) keys.emplace(t.label, t.pre);

  for (const Cut& cut : enumerate_cuts(prefix)) {
    if (cut_depth(prefix, cut) >= prefix.depth_bound) {
      ++report.cuts_skipped;
      continue;
    }
    ++report.cuts_checked;
    Marking m = cut_marking(prefix, cut);
    std::string where = cut_to_string(net, prefix, cut);

    if (is_bad(game, m))
      throw AxiomViolationError("safety", where,
                                "label image " + net.marking_to_string(m) + " is bad");

    std::vector<std::uint32_t> fireable;
    for (std::uint32_t ti = 0; ti < prefix.transitions.size(); ++ti) {
      const auto& pre = prefix.transitions[ti].pre;
      if (std::includes(cut.begin(), cut.end(), pre.begin(), pre.end())) fireable.push_back(ti);
    }

    for (std::uint32_t p : cut) {
      if (!game.system_place[prefix.places[p].label]) continue;
      int takers = 0;
      for (std::uint32_t ti : fireable) {
        const auto& pre = prefix.transitions[ti].pre;
        if (std::binary_search(pre.begin(), pre.end(), p)) ++takers;
      }
      if (takers > 1)
        throw AxiomViolationError("determinism", where,
                                  std::to_string(takers) + " enabled instances consume " +
                                      net.place_names[prefix.places[p].label] + "#" +
                                      std::to_string(p));
    }

    bool net_enabled = false;
    for (Id t = 0; t < net.transition_count() && !net_enabled; ++t)
      if (enabled(net, m, t)) net_enabled = true;
    if (net_enabled && fireable.empty())
      throw AxiomViolationError("deadlock-avoidance", where,
                                "the net can move at " + net.marking_to_string(m) +
                                    " but the prefix cannot");

    for (Id t = 0; t < net.transition_count(); ++t) {
      for (const Cut& s : label_preimages(prefix, cut, net.pre[t])) {
        if (keys.count({t, s})) continue;
        bool system_member = false;
        for (std::uint32_t p : s)
          if (game.system_place[prefix.places[p].label]) {
            system_member = true;
            break;
          }
        if (!system_member)
          throw AxiomViolationError(
              "justified-refusal", where,
              "no instance of " + net.transition_names[t] +
                  " at an all-environment preimage " + cut_to_string(net, prefix, s));
      }
    }
  }
  return report;
}

}  // namespace pg
