#include "pg/net.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "pg/errors.hpp"

namespace pg {

std::string PetriNet::marking_to_string(const Marking& m) const {
  std::string out;
  for (const auto& [p, n] : m) {
    if (!out.empty()) out += ' ';
    out += p < place_names.size() ? place_names[p] : "?" + std::to_string(p);
    if (n != 1) out += ':' + std::to_string(n);
  }
  return out;
}

void NetBuilder::add_place(const std::string& name) {
  if (has_place(name) || has_transition(name))
    throw DuplicateIdError("duplicate id '" + name + "'");
  places_.push_back(name);
}

void NetBuilder::add_transition(const std::string& name,
                                std::vector<std::pair<std::string, Count>> pre,
                                std::vector<std::pair<std::string, Count>> post) {
  if (has_place(name) || has_transition(name))
    throw DuplicateIdError("duplicate id '" + name + "'");
  transitions_.push_back({name, std::move(pre), std::move(post)});
}

void NetBuilder::add_initial(const std::string& place, Count n) {
  initial_.emplace_back(place, n);
}

bool NetBuilder::has_place(const std::string& name) const {
  return std::find(places_.begin(), places_.end(), name) != places_.end();
}

bool NetBuilder::has_transition(const std::string& name) const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [&](const ProtoTransition& t) { return t.name == name; });
}

PetriNet NetBuilder::build() const {
  PetriNet net;
  net.place_names = places_;
  std::sort(net.place_names.begin(), net.place_names.end());
  for (Id i = 0; i < net.place_names.size(); ++i) net.place_index[net.place_names[i]] = i;

  std::vector<const ProtoTransition*> sorted;
  sorted.reserve(transitions_.size());
  for (const auto& t : transitions_) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const ProtoTransition* a, const ProtoTransition* b) { return a->name < b->name; });
  for (Id i = 0; i < sorted.size(); ++i) net.transition_index[sorted[i]->name] = i;

  auto resolve_place = [&](const std::string& name) -> Id {
    auto it = net.place_index.find(name);
    if (it == net.place_index.end()) throw UnknownNodeError("unknown place '" + name + "'");
    return it->second;
  };
  auto to_multiset = [&](const std::vector<std::pair<std::string, Count>>& tokens) {
    std::vector<Multiset::Entry> entries;
    entries.reserve(tokens.size());
    for (const auto& [name, n] : tokens) entries.emplace_back(resolve_place(name), n);
    return Multiset::from_entries(std::move(entries));
  };

  for (const ProtoTransition* t : sorted) {
    Multiset pre = to_multiset(t->pre);
    Multiset post = to_multiset(t->post);
    if (pre.empty() || post.empty())
      throw EmptyFlowError("transition '" + t->name +
                           "' must have a nonempty precondition and postcondition");
    net.transition_names.push_back(t->name);
    net.pre.push_back(std::move(pre));
    net.post.push_back(std::move(post));
  }

  net.initial = to_multiset(initial_);

  net.place_consumers.assign(net.place_count(), {});
  for (Id t = 0; t < net.transition_count(); ++t)
    for (const auto& [p, n] : net.pre[t]) net.place_consumers[p].push_back(t);

  return net;
}

bool enabled(const PetriNet& net, const Marking& m, Id t) {
  if (t >= net.transition_count())
    throw UnknownNodeError("unknown transition id " + std::to_string(t));
  return net.pre[t].subset_of(m);
}

Marking fire(const PetriNet& net, const Marking& m, Id t) {
  if (!enabled(net, m, t))
    throw NotEnabledError("transition '" + net.transition_names[t] + "' is not enabled in {" +
                          net.marking_to_string(m) + "}");
  return m - net.pre[t] + net.post[t];
}

namespace {

void check_bound(const PetriNet& net, const Marking& m, Count k) {
  for (const auto& [p, n] : m)
    if (n > k) throw BoundExceededError(net.marking_to_string(m), net.place_names[p], n, k);
}

}  // namespace

ReachabilityGraph explore(const PetriNet& net, Count k) {
  ReachabilityGraph g;
  check_bound(net, net.initial, k);
  g.markings.push_back(net.initial);
  g.index.emplace(net.initial, 0);
  g.succ.emplace_back();

  for (std::uint32_t m = 0; m < g.markings.size(); ++m) {
    for (Id t = 0; t < net.transition_count(); ++t) {
      if (!net.pre[t].subset_of(g.markings[m])) continue;
      Marking next = g.markings[m] - net.pre[t] + net.post[t];
      check_bound(net, next, k);
      auto [it, fresh] = g.index.emplace(next, std::uint32_t(g.markings.size()));
      if (fresh) {
        g.markings.push_back(std::move(next));
        g.succ.emplace_back();
      }
      g.succ[m].emplace_back(t, it->second);
    }
  }
  return g;
}

std::optional<std::uint64_t> marking_count_bound(Count k, std::size_t places) {
  std::uint64_t bound = 1;
  const std::uint64_t base = std::uint64_t(k) + 1;
  for (std::size_t i = 0; i < places; ++i) {
    if (bound > UINT64_MAX / base) return std::nullopt;
    bound *= base;
  }
  return bound;
}

}  // namespace pg
