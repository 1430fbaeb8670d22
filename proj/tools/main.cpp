// Command-line front end: solve, validate, unfold, generate, export, oracle.
// Exit codes: 0 = success (for solve: the system wins), 1 = the environment
// wins, 2 = any input, validation or internal error. All output is fully
// deterministic for fixed inputs and flags.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pg/errors.hpp"
#include "pg/format.hpp"
#include "pg/game.hpp"
#include "pg/graph_game.hpp"
#include "pg/net.hpp"
#include "pg/reductions.hpp"
#include "pg/solver.hpp"
#include "pg/strategy.hpp"
#include "pg/unfolding.hpp"

using namespace pg;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

PetriGame load_game(const std::string& path) { return parse_game(read_file(path)); }

SolveMode mode_from(const std::string& name) {
  if (name == "general") return SolveMode::General;
  if (name == "twosat") return SolveMode::TwoSat;
  return SolveMode::Auto;
}

std::string winner_name(Winner w) { return w == Winner::System ? "system" : "environment"; }

std::string commitment_names(const PetriNet& net, const std::vector<Id>& commitment) {
  std::string out;
  for (Id t : commitment) {
    if (!out.empty()) out += " ";
    out += net.transition_names[t];
  }
  return out;
}

ordered_json strategy_json(const PetriNet& net, const CommitmentStrategy& strategy) {
  ordered_json out = ordered_json::object();
  for (const auto& [marking, commitment] : strategy.choices) {
    ordered_json names = ordered_json::array();
    for (Id t : commitment) names.push_back(net.transition_names[t]);
    out[marking_tokens(net, marking)] = std::move(names);
  }
  return out;
}

int cmd_solve(const std::string& path, const std::string& mode, unsigned workers,
              const std::string& format) {
  PetriGame game = load_game(path);
  SolveOptions options;
  options.mode = mode_from(mode);
  options.workers = workers;
  Verdict v = decide(game, options);

  if (format == "json") {
    ordered_json report;
    report["schema"] = 1;
    report["winner"] = winner_name(v.winner);
    report["stats"] = {{"reachable_markings", v.stats.reachable_markings},
                       {"iterations", v.stats.iterations},
                       {"sat_calls", v.stats.sat_calls},
                       {"max_env_tokens", v.stats.max_env_tokens},
                       {"mode", mode_name(v.stats.mode_used)}};
    if (v.strategy) report["strategy"] = strategy_json(game.net, *v.strategy);
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "winner: " << winner_name(v.winner) << "\n"
              << "reachable markings: " << v.stats.reachable_markings << "\n"
              << "iterations: " << v.stats.iterations << "\n"
              << "sat calls: " << v.stats.sat_calls << "\n"
              << "max env tokens: " << v.stats.max_env_tokens << "\n"
              << "mode: " << mode_name(v.stats.mode_used) << "\n";
    if (v.strategy) {
      std::cout << "strategy:\n";
      for (const auto& [marking, commitment] : v.strategy->choices)
        std::cout << "  " << marking_tokens(game.net, marking) << " -> {"
                  << commitment_names(game.net, commitment) << "}\n";
    }
  }
  return v.winner == Winner::System ? 0 : 1;
}

int cmd_validate(const std::string& path, const std::string& format) {
  PetriGame game = load_game(path);
  ValidationReport report = validate(game);
  std::size_t system_places = 0;
  for (bool s : game.system_place)
    if (s) ++system_places;

  if (format == "json") {
    ordered_json out;
    out["schema"] = 1;
    out["places"] = game.net.place_count();
    out["system_places"] = system_places;
    out["transitions"] = game.net.transition_count();
    out["bound"] = report.bound;
    out["reachable_markings"] = report.reachable_markings;
    out["max_env_tokens"] = report.max_env_tokens;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "places: " << game.net.place_count() << " (" << system_places << " system)\n"
              << "transitions: " << game.net.transition_count() << "\n"
              << "bound: " << report.bound << "\n"
              << "reachable markings: " << report.reachable_markings << "\n"
              << "max env tokens: " << report.max_env_tokens << "\n"
              << "one system token in every reachable marking\n";
  }
  return 0;
}

int cmd_unfold(const std::string& path, std::int64_t depth_flag) {
  PetriGame game = load_game(path);
  Verdict v = decide(game);
  if (v.winner != Winner::System) {
    std::cerr << "the environment wins; there is no strategy to unfold\n";
    return 1;
  }
  std::size_t depth = depth_flag >= 0
                          ? std::size_t(depth_flag)
                          : 2 * std::size_t(v.stats.reachable_markings);
  UnfoldingPrefix px = unfold(game, *v.strategy, depth);
  check_structure(px);
  AxiomReport report = check_axioms(game, px);

  const PetriNet& net = game.net;
  std::cout << "digraph prefix {\n  rankdir=LR;\n";
  for (std::uint32_t p = 0; p < px.places.size(); ++p) {
    bool initial = !px.places[p].producer.has_value();
    std::cout << "  c" << p << " [shape=circle, label=\"" << net.place_names[px.places[p].label]
              << "#" << p << "\"" << (initial ? ", peripheries=2" : "") << "];\n";
  }
  for (std::uint32_t t = 0; t < px.transitions.size(); ++t)
    std::cout << "  i" << t << " [shape=box, label=\""
              << net.transition_names[px.transitions[t].label] << "#" << t << "\"];\n";
  for (std::uint32_t t = 0; t < px.transitions.size(); ++t) {
    for (std::uint32_t p : px.transitions[t].pre)
      std::cout << "  c" << p << " -> i" << t << ";\n";
    for (std::uint32_t p : px.transitions[t].post)
      std::cout << "  i" << t << " -> c" << p << ";\n";
  }
  std::cout << "}\n";
  std::cout << "// depth bound: " << px.depth_bound << "\n"
            << "// conditions: " << px.places.size()
            << ", instances: " << px.transitions.size() << "\n"
            << "// truncated states: " << px.truncated_states << "\n"
            << "// cuts checked: " << report.cuts_checked
            << ", skipped at the frontier: " << report.cuts_skipped << "\n"
            << "// axioms hold: safety, determinism, deadlock avoidance, justified refusal\n";
  return 0;
}

int cmd_generate(const std::string& kind, const std::string& path,
                 std::optional<std::uint64_t> seed, std::int64_t depth_flag) {
  if (path.empty() == !seed.has_value())
    throw Error("pass exactly one of an instance file or --seed");
  PetriGame game;
  if (kind == "3sat") {
    ThreeSatInstance inst =
        seed ? random_3sat(*seed, 4, 6) : parse_dimacs(read_file(path));
    game = gen_3sat(inst);
  } else {
    std::uint32_t depth = depth_flag >= 0 ? std::uint32_t(depth_flag) : 2;
    G5Instance inst = seed ? random_g5(*seed, 3, depth) : parse_g5(read_file(path));
    game = gen_g5(inst);
  }
  std::cout << serialize_game(game);
  return 0;
}

void export_game_dot(const PetriGame& game) {
  const PetriNet& net = game.net;
  std::cout << "digraph game {\n  rankdir=LR;\n";
  for (Id p = 0; p < net.place_count(); ++p) {
    std::cout << "  p" << p << " [shape=circle, label=\"" << net.place_names[p];
    Count tokens = net.initial.count(p);
    if (tokens == 1)
      std::cout << "\\n@";
    else if (tokens > 1)
      std::cout << "\\n@" << tokens;
    std::cout << "\"";
    if (game.system_place[p]) std::cout << ", style=filled, fillcolor=gray85";
    std::cout << "];\n";
  }
  for (Id t = 0; t < net.transition_count(); ++t)
    std::cout << "  t" << t << " [shape=box, label=\"" << net.transition_names[t] << "\"];\n";
  for (Id t = 0; t < net.transition_count(); ++t) {
    for (const auto& [p, n] : net.pre[t]) {
      std::cout << "  p" << p << " -> t" << t;
      if (n > 1) std::cout << " [label=\"" << n << "\"]";
      std::cout << ";\n";
    }
    for (const auto& [p, n] : net.post[t]) {
      std::cout << "  t" << t << " -> p" << p;
      if (n > 1) std::cout << " [label=\"" << n << "\"]";
      std::cout << ";\n";
    }
  }
  std::cout << "}\n";
}

void export_reachability_dot(const PetriGame& game) {
  ReachabilityGraph reach = explore(game.net, game.bound);
  std::cout << "digraph reachability {\n  rankdir=LR;\n";
  for (std::uint32_t i = 0; i < reach.size(); ++i) {
    std::cout << "  m" << i << " [label=\"" << marking_tokens(game.net, reach.markings[i])
              << "\"";
    if (i == reach.initial) std::cout << ", peripheries=2";
    if (is_bad(game, reach.markings[i])) std::cout << ", style=filled, fillcolor=gray85";
    std::cout << "];\n";
  }
  for (std::uint32_t i = 0; i < reach.size(); ++i)
    for (const auto& [t, j] : reach.succ[i])
      std::cout << "  m" << i << " -> m" << j << " [label=\""
                << game.net.transition_names[t] << "\"];\n";
  std::cout << "}\n";
}

void export_strategy_dot(const PetriGame& game, const CommitmentStrategy& strategy) {
  // Walk the strategy-restricted game at marking level. A node is a marking
  // with its pending commitment: environment firings keep the commitment,
  // allowed system firings move to the successor's fresh strategy choice.
  const PetriNet& net = game.net;
  using Node = std::pair<Marking, std::vector<Id>>;
  auto choice_of = [&](const Marking& m) -> const std::vector<Id>& {
    auto it = strategy.choices.find(m);
    if (it == strategy.choices.end())
      throw Error("strategy has no commitment for marking " + net.marking_to_string(m));
    return it->second;
  };

  std::map<Node, std::uint32_t> index;
  std::vector<Node> order;
  auto intern = [&](Node n) {
    auto [it, fresh] = index.emplace(std::move(n), std::uint32_t(order.size()));
    if (fresh) order.push_back(it->first);
    return it->second;
  };
  intern({game.net.initial, choice_of(game.net.initial)});

  struct EdgeRec {
    std::uint32_t from, to;
    Id label;
    bool env;
  };
  std::vector<EdgeRec> edges;
  for (std::uint32_t head = 0; head < order.size(); ++head) {
    Node cur = order[head];
    for (Id t = 0; t < net.transition_count(); ++t) {
      if (!enabled(net, cur.first, t)) continue;
      bool allowed = game.purely_environmental(t) ||
                     std::binary_search(cur.second.begin(), cur.second.end(), t);
      if (!allowed) continue;
      Marking next = fire(net, cur.first, t);
      std::uint32_t to = game.purely_environmental(t)
                             ? intern({next, cur.second})
                             : intern({next, choice_of(next)});
      edges.push_back({head, to, t, game.purely_environmental(t)});
    }
  }

  std::cout << "digraph strategy {\n  rankdir=LR;\n";
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    std::cout << "  s" << i << " [shape=box, label=\"" << marking_tokens(net, order[i].first)
              << "\\nallow: {" << commitment_names(net, order[i].second) << "}\"";
    if (i == 0) std::cout << ", peripheries=2";
    std::cout << "];\n";
  }
  for (const EdgeRec& e : edges) {
    std::cout << "  s" << e.from << " -> s" << e.to << " [label=\""
              << net.transition_names[e.label] << "\"";
    if (e.env) std::cout << ", style=dashed";
    std::cout << "];\n";
  }
  std::cout << "}\n";
}

int cmd_export(const std::string& what, const std::string& path) {
  PetriGame game = load_game(path);
  if (what == "game") {
    export_game_dot(game);
  } else if (what == "reachability") {
    export_reachability_dot(game);
  } else {
    Verdict v = decide(game);
    if (v.winner != Winner::System) {
      std::cerr << "the environment wins; there is no strategy to export\n";
      return 1;
    }
    export_strategy_dot(game, *v.strategy);
  }
  return 0;
}

int cmd_oracle(std::uint64_t seed, std::size_t cap) {
  bool all_agree = true;
  auto line = [&](const std::string& name, int agree, int total, int skipped) {
    std::cout << name << ": " << agree << "/" << total << " agree";
    if (skipped > 0) std::cout << " (" << skipped << " skipped at the vertex cap)";
    std::cout << "\n";
    if (agree != total) all_agree = false;
  };

  auto check_game = [&](const PetriGame& game, int& agree, int& total, int& skipped) {
    std::optional<ExplicitSolve> plain, tracked;
    try {
      plain = solve_explicit(game, GameVariant::Plain, cap);
      tracked = solve_explicit(game, GameVariant::Tracked, cap);
    } catch (const VertexCapError&) {
      ++skipped;
      return;
    }
    ++total;
    Winner fixpoint = decide(game).winner;
    if (plain->winner == fixpoint && tracked->winner == fixpoint) ++agree;
  };

  {
    int agree = 0, total = 0, skipped = 0;
    for (const auto& [name, game] : builtin_examples()) check_game(game, agree, total, skipped);
    line("named examples", agree, total, skipped);
  }
  {
    int agree = 0, total = 0;
    for (std::uint64_t s = seed; s < seed + 40; ++s) {
      ThreeSatInstance inst = random_3sat(s, 3 + s % 3, 2 + s % 5);
      Verdict v = decide(gen_3sat(inst));
      ++total;
      if ((v.winner == Winner::System) == brute_force_sat(inst)) ++agree;
    }
    line("clause games against assignment enumeration", agree, total, 0);
  }
  {
    int agree = 0, total = 0, skipped = 0;
    for (std::uint64_t s = seed; s < seed + 25; ++s) {
      G5Instance inst = random_g5(s, 1 + s % 3, s % 4);
      ++total;
      if (decide(gen_g5(inst)).winner == solve_g5_tiny(inst)) ++agree;
    }
    line("toggle games against the exact attractor", agree, total, skipped);
  }
  {
    int agree = 0, total = 0, skipped = 0;
    for (std::uint64_t s = seed; s < seed + 25; ++s) {
      ThreeSatInstance inst = random_3sat(s + 1000, 3, 3);
      check_game(gen_3sat(inst), agree, total, skipped);
    }
    line("fixpoint against both explicit solvers", agree, total, skipped);
  }

  std::cout << (all_agree ? "oracle: all solvers agree\n" : "oracle: disagreement found\n");
  return all_agree ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded Petri-game solver: one system player, many environment players"};
  app.require_subcommand(1);

  std::string game_path, instance_path, mode = "auto", format = "text", kind, what;
  std::int64_t depth = -1;
  std::size_t cap = 200'000;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;

  CLI::App* solve = app.add_subcommand("solve", "decide the game and print the verdict");
  solve->add_option("game", game_path, "game file")->required();
  solve->add_option("--mode", mode, "solver mode")
      ->check(CLI::IsMember({"auto", "general", "twosat"}));
  solve->add_option("--workers", workers, "parallel formula evaluations")
      ->check(CLI::Range(1u, 256u));
  solve->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the one-player fragment");
  validate_cmd->add_option("game", game_path, "game file")->required();
  validate_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* unfold_cmd =
      app.add_subcommand("unfold", "unfold the winning strategy into a prefix (DOT)");
  unfold_cmd->add_option("game", game_path, "game file")->required();
  unfold_cmd->add_option("--depth", depth,
                         "instance-count bound (default: twice the reachable markings)");

  CLI::App* generate = app.add_subcommand("generate", "build a game from an instance");
  generate->add_option("--kind", kind, "instance kind")
      ->required()
      ->check(CLI::IsMember({"3sat", "g5"}));
  generate->add_option("instance", instance_path, "instance file (omit with --seed)");
  generate->add_option("--seed", seed, "draw a random instance instead of reading a file");
  generate->add_option("--depth", depth, "formula depth for seeded toggle instances");

  CLI::App* export_cmd = app.add_subcommand("export", "render DOT views");
  export_cmd->add_option("what", what, "game | reachability | strategy")
      ->required()
      ->check(CLI::IsMember({"game", "reachability", "strategy"}));
  export_cmd->add_option("game", game_path, "game file")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "cross-check the solvers against each other");
  oracle->add_option("--seed", seed, "base seed (default 0)");
  oracle->add_option("--cap", cap, "explicit-game vertex cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(game_path, mode, workers, format);
    if (validate_cmd->parsed()) return cmd_validate(game_path, format);
    if (unfold_cmd->parsed()) return cmd_unfold(game_path, depth);
    if (generate->parsed()) return cmd_generate(kind, instance_path, seed, depth);
    if (export_cmd->parsed()) return cmd_export(what, game_path);
    if (oracle->parsed()) return cmd_oracle(seed.value_or(0), cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
