#include "pg/dot.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pg {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string commitment_label(const PetriNet& net, const std::vector<Id>& commitment) {
  std::string out = "{";
  for (std::size_t i = 0; i < commitment.size(); ++i) {
    if (i) out += ", ";
    out += net.transition_names[commitment[i]];
  }
  return out + "}";
}

}  // namespace

std::string dot_game(const PetriGame& game) {
  const PetriNet& net = game.net;
  std::ostringstream out;
  out << "digraph game {\n";
  out << "  rankdir=LR;\n";
  for (Id p = 0; p < net.place_count(); ++p) {
    std::string label = net.place_names[p];
    if (Count n = net.initial.count(p); n == 1)
      label += "\\n&bull;";
    else if (n > 1)
      label += "\\n&bull;x" + std::to_string(n);
    out << "  p" << p << " [shape=ellipse, label=\"" << escape(label) << '"';
    if (game.system_place[p]) out << ", style=filled, fillcolor=gray";
    if (game.bad.kind == BadSpec::Kind::Places &&
        std::binary_search(game.bad.places.begin(), game.bad.places.end(), p))
      out << ", peripheries=2";
    out << "];\n";
  }
  for (Id t = 0; t < net.transition_count(); ++t) {
    out << "  t" << t << " [shape=box, label=\"" << escape(net.transition_names[t]) << "\"];\n";
  }
  for (Id t = 0; t < net.transition_count(); ++t) {
    for (const auto& [p, n] : net.pre[t]) {
      out << "  p" << p << " -> t" << t;
      if (n > 1) out << " [label=\"" << n << "\"]";
      out << ";\n";
    }
    for (const auto& [p, n] : net.post[t]) {
      out << "  t" << t << " -> p" << p;
      if (n > 1) out << " [label=\"" << n << "\"]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string dot_reachability(const PetriNet& net, const ReachabilityGraph& reach) {
  std::ostringstream out;
  out << "digraph reachability {\n";
  for (std::uint32_t i = 0; i < reach.size(); ++i) {
    out << "  m" << i << " [shape=ellipse, label=\""
        << escape(net.marking_to_string(reach.markings[i])) << '"';
    if (i == reach.initial) out << ", penwidth=2";
    out << "];\n";
  }
  for (std::uint32_t i = 0; i < reach.size(); ++i)
    for (const auto& [t, j] : reach.succ[i])
      out << "  m" << i << " -> m" << j << " [label=\""
          << escape(net.transition_names[t]) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string dot_strategy(const PetriGame& game, const CommitmentStrategy& strategy) {
  const PetriNet& net = game.net;
  std::map<Marking, std::size_t> index;
  for (const auto& [m, c] : strategy.choices) index.emplace(m, index.size());

  std::ostringstream out;
  out << "digraph strategy {\n";
  for (const auto& [m, c] : strategy.choices) {
    out << "  m" << index.at(m) << " [shape=box, label=\""
        << escape(net.marking_to_string(m)) << "\\ncommit "
        << escape(commitment_label(net, c)) << '"';
    if (m == net.initial) out << ", penwidth=2";
    out << "];\n";
  }
  // Moves the strategy leaves open. An environment fire keeps the previous
  // commitment alive, so its target node's annotation is the choice made the
  // next time the system fires, not the active commitment mid-play.
  std::size_t anon = 0;
  for (const auto& [m, c] : strategy.choices) {
    for (Id t = 0; t < net.transition_count(); ++t) {
      if (!enabled(net, m, t)) continue;
      bool env = game.purely_environmental(t);
      if (!env && !std::binary_search(c.begin(), c.end(), t)) continue;
      Marking next = fire(net, m, t);
      out << "  m" << index.at(m) << " -> ";
      if (auto it = index.find(next); it != index.end()) {
        out << 'm' << it->second;
      } else {
        out << 'x' << anon;
        out << " [label=\"" << escape(net.transition_names[t]) << '"'
            << (env ? ", style=dashed" : "") << "];\n";
        out << "  x" << anon << " [shape=box, style=dotted, label=\""
            << escape(net.marking_to_string(next)) << "\"];\n";
        ++anon;
        continue;
      }
      out << " [label=\"" << escape(net.transition_names[t]) << '"'
          << (env ? ", style=dashed" : "") << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string dot_prefix(const PetriGame& game, const UnfoldingPrefix& prefix) {
  const PetriNet& net = game.net;
  std::ostringstream out;
  out << "digraph prefix {\n";
  out << "  rankdir=LR;\n";
  for (std::uint32_t c = 0; c < prefix.places.size(); ++c) {
    const auto& cond = prefix.places[c];
    out << "  c" << c << " [shape=ellipse, label=\""
        << escape(net.place_names[cond.label]) << '#' << c << '"';
    if (game.system_place[cond.label]) out << ", style=filled, fillcolor=gray";
    if (std::binary_search(prefix.initial_cut.begin(), prefix.initial_cut.end(), c))
      out << ", peripheries=2";
    out << "];\n";
  }
  for (std::uint32_t e = 0; e < prefix.transitions.size(); ++e) {
    const auto& inst = prefix.transitions[e];
    out << "  e" << e << " [shape=box, label=\""
        << escape(net.transition_names[inst.label]) << '#' << e << "\"];\n";
    for (std::uint32_t c : inst.pre) out << "  c" << c << " -> e" << e << ";\n";
    for (std::uint32_t c : inst.post) out << "  e" << e << " -> c" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pg
