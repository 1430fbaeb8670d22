#include "pg/solver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "pg/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pg {
namespace {

// Closure of a marking under purely environmental firing, in breadth-first
// discovery order; the marking itself comes first. Indices into reach.markings.
std::vector<std::uint32_t> env_closure(const PetriGame& game, const ReachabilityGraph& reach,
                                       std::uint32_t start) {
  std::vector<std::uint32_t> order{start};
  std::set<std::uint32_t> seen{start};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& [t, dst] : reach.succ[order[head]]) {
      if (!game.purely_environmental(t)) continue;
      if (seen.insert(dst).second) order.push_back(dst);
    }
  }
  return order;
}

std::uint32_t fire_target(const ReachabilityGraph& reach, std::uint32_t src, Id t) {
  const auto& edges = reach.succ[src];
  auto it = std::lower_bound(edges.begin(), edges.end(), t,
                             [](const auto& e, Id v) { return e.first < v; });
  if (it == edges.end() || it->first != t) throw std::logic_error("missing successor edge");
  return it->second;
}

// Everything about one marking's formula that does not depend on the losing
// set: the variable set, the environment closure's clash and standstill
// clauses, and the committed-fire edges that become unit clauses once their
// destination is known lost.
struct StaticEntry {
  bool bad_reachable = false;
  std::vector<Id> vars;
  std::vector<std::vector<Lit>> static_clauses;
  std::vector<std::pair<Id, std::uint32_t>> fire_edges;  // (transition, destination)
};

StaticEntry build_entry(const PetriGame& game, const ReachabilityGraph& reach, std::uint32_t mi) {
  const PetriNet& net = game.net;
  StaticEntry e;
  Id s = game.system_place_of(reach.markings[mi]);
  e.vars = game.system_postset(s);

  std::set<std::vector<Lit>> clause_seen;
  auto add_clause = [&](std::vector<Lit> c) {
    if (clause_seen.insert(c).second) e.static_clauses.push_back(std::move(c));
  };
  std::set<std::pair<Id, std::uint32_t>> edge_seen;

  for (std::uint32_t idx : env_closure(game, reach, mi)) {
    const Marking& cur = reach.markings[idx];
    if (is_bad(game, cur)) {
      e.bad_reachable = true;
      e.static_clauses.clear();
      e.fire_edges.clear();
      return e;
    }
    std::vector<Id> enabled_vars;
    for (Id t : e.vars)
      if (enabled(net, cur, t)) enabled_vars.push_back(t);

    // Two committed transitions must never be enabled together.
    for (std::size_t i = 0; i < enabled_vars.size(); ++i)
      for (std::size_t j = i + 1; j < enabled_vars.size(); ++j)
        add_clause({neg(enabled_vars[i]), neg(enabled_vars[j])});

    bool env_enabled = false;
    for (Id t = 0; t < net.transition_count(); ++t)
      if (game.purely_environmental(t) && enabled(net, cur, t)) {
        env_enabled = true;
        break;
      }

    for (Id t : enabled_vars) {
      // A committed transition enabled with spare input tokens leaves the
      // instance choice ambiguous, which is forbidden.
      bool spare = false;
      for (const auto& [p, n] : net.pre[t].entries())
        if (cur.count(p) > n) {
          spare = true;
          break;
        }
      if (spare) add_clause({neg(t)});
      edge_seen.emplace(t, fire_target(reach, idx, t));
    }

    // If the environment cannot move and system transitions are enabled, the
    // commitment must allow at least one of them.
    if (!env_enabled && !enabled_vars.empty()) {
      std::vector<Lit> clause;
      clause.reserve(enabled_vars.size());
      for (Id t : enabled_vars) clause.push_back(pos(t));
      add_clause(std::move(clause));
    }
  }
  e.fire_edges.assign(edge_seen.begin(), edge_seen.end());
  return e;
}

Cnf assemble(const StaticEntry& e, const std::vector<char>& attr) {
  Cnf cnf;
  cnf.variables = e.vars;
  if (e.bad_reachable) {
    cnf.clauses.push_back({});
    return cnf;
  }
  cnf.clauses = e.static_clauses;
  Id last = 0;
  bool have_last = false;
  for (const auto& [t, dst] : e.fire_edges) {
    if (!attr[dst]) continue;
    if (have_last && last == t) continue;  // edges are sorted by transition
    cnf.clauses.push_back({neg(t)});
    last = t;
    have_last = true;
  }
  return cnf;
}

Assignment full_assignment(const std::vector<Id>& vars, const std::vector<Id>& committed) {
  Assignment a;
  a.reserve(vars.size());
  for (Id v : vars) a.emplace_back(v, std::binary_search(committed.begin(), committed.end(), v));
  return a;
}

// Static data for the two-environment-token path.
struct TwoEntry {
  bool bad_reachable = false;
  std::vector<Id> postset;
  std::vector<std::vector<std::uint32_t>> fire_dst;  // per postset position
  std::vector<char> spare_anywhere;                  // instance clash in some closure marking
  std::vector<char> enabled_anywhere;
  struct Row {
    std::vector<std::uint32_t> enabled;  // postset positions, ascending
    bool env_enabled = false;
  };
  std::vector<Row> rows;
};

TwoEntry build_two_entry(const PetriGame& game, const ReachabilityGraph& reach,
                         std::uint32_t mi) {
  const PetriNet& net = game.net;
  TwoEntry e;
  Id s = game.system_place_of(reach.markings[mi]);
  e.postset = game.system_postset(s);
  e.fire_dst.resize(e.postset.size());
  e.spare_anywhere.assign(e.postset.size(), 0);
  e.enabled_anywhere.assign(e.postset.size(), 0);

  for (std::uint32_t idx : env_closure(game, reach, mi)) {
    const Marking& cur = reach.markings[idx];
    if (is_bad(game, cur)) {
      e.bad_reachable = true;
      e.rows.clear();
      return e;
    }
    TwoEntry::Row row;
    for (std::uint32_t pos = 0; pos < e.postset.size(); ++pos) {
      Id t = e.postset[pos];
      if (!enabled(net, cur, t)) continue;
      row.enabled.push_back(pos);
      e.enabled_anywhere[pos] = 1;
      for (const auto& [p, n] : net.pre[t].entries())
        if (cur.count(p) > n) {
          e.spare_anywhere[pos] = 1;
          break;
        }
      e.fire_dst[pos].push_back(fire_target(reach, idx, t));
    }
    for (Id t = 0; t < net.transition_count(); ++t)
      if (game.purely_environmental(t) && enabled(net, cur, t)) {
        row.env_enabled = true;
        break;
      }
    e.rows.push_back(std::move(row));
  }
  for (auto& dsts : e.fire_dst) {
    std::sort(dsts.begin(), dsts.end());
    dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
  }
  return e;
}

struct TwoOutcome {
  bool lost = false;
  bool used_solver = false;
  std::vector<Id> commitment;
};

// One round of the two-literal procedure for one marking. Candidates are the
// outgoing transitions of the system place that clash nowhere and never fire
// into the losing set, deduplicated by precondition. Transitions consuming a
// single environment token become variables; a transition consuming both
// tokens of a marking is unique there and is selected after the fact exactly
// when no single-token candidate covers that marking.
TwoOutcome eval_two(const PetriGame& game, const TwoEntry& e, const std::vector<char>& attr) {
  TwoOutcome out;
  if (e.bad_reachable) {
    out.lost = true;
    return out;
  }
  const std::size_t k = e.postset.size();
  std::vector<char> excluded(k, 0);
  for (std::size_t pos = 0; pos < k; ++pos) {
    if (e.spare_anywhere[pos]) {
      excluded[pos] = 1;
      continue;
    }
    for (std::uint32_t dst : e.fire_dst[pos])
      if (attr[dst]) {
        excluded[pos] = 1;
        break;
      }
  }
  // Deduplicate the survivors by precondition, keeping the first of each class.
  std::vector<char> candidate(k, 0);
  {
    std::map<Multiset, std::uint32_t> first_of;
    for (std::uint32_t pos = 0; pos < k; ++pos) {
      if (excluded[pos]) continue;
      auto [it, fresh] = first_of.emplace(game.net.pre[e.postset[pos]], pos);
      if (fresh) candidate[pos] = 1;
    }
  }
  auto env_need = [&](std::uint32_t pos) { return game.env_pre_tokens[e.postset[pos]]; };

  // A candidate needing nothing beyond the system token is enabled in every
  // closure marking and alone forms a safe commitment.
  for (std::uint32_t pos = 0; pos < k; ++pos)
    if (candidate[pos] && env_need(pos) == 0 && e.enabled_anywhere[pos]) {
      out.commitment = {e.postset[pos]};
      return out;
    }

  std::vector<char> is_var(k, 0);
  std::vector<Id> vars;
  for (std::uint32_t pos = 0; pos < k; ++pos)
    if (candidate[pos] && env_need(pos) == 1 && e.enabled_anywhere[pos]) {
      is_var[pos] = 1;
      vars.push_back(e.postset[pos]);
    }

  TwoSatBuilder builder(vars);
  for (const auto& row : e.rows) {
    std::vector<Id> row_vars;
    for (std::uint32_t pos : row.enabled)
      if (is_var[pos]) row_vars.push_back(e.postset[pos]);
    for (std::size_t i = 0; i < row_vars.size(); ++i)
      for (std::size_t j = i + 1; j < row_vars.size(); ++j)
        builder.add_clause({neg(row_vars[i]), neg(row_vars[j])});
    if (row.env_enabled || row.enabled.empty()) continue;
    bool pair_candidate = false;
    for (std::uint32_t pos : row.enabled)
      if (candidate[pos] && env_need(pos) == 2) pair_candidate = true;
    if (pair_candidate) continue;  // covered by the selection pass below
    std::vector<Lit> clause;
    for (Id v : row_vars) clause.push_back(pos(v));
    builder.add_clause(std::move(clause));
  }
  out.used_solver = true;
  auto model = builder.solve();
  if (!model) {
    out.lost = true;
    return out;
  }
  for (const auto& [v, val] : *model)
    if (val) out.commitment.push_back(v);
  // Selection pass for the two-token candidates.
  for (const auto& row : e.rows) {
    std::uint32_t wpos = 0;
    bool have_w = false;
    bool var_true = false;
    for (std::uint32_t pos : row.enabled) {
      if (candidate[pos] && env_need(pos) == 2) {
        wpos = pos;
        have_w = true;
      }
      if (is_var[pos] &&
          std::binary_search(out.commitment.begin(), out.commitment.end(), e.postset[pos]))
        var_true = true;
    }
    if (have_w && !var_true) out.commitment.push_back(e.postset[wpos]);
  }
  std::sort(out.commitment.begin(), out.commitment.end());
  out.commitment.erase(std::unique(out.commitment.begin(), out.commitment.end()),
                       out.commitment.end());
  return out;
}

}  // namespace

CnfBuild build_cnf(const PetriGame& game, const ReachabilityGraph& reach,
                   std::uint32_t marking_index, const std::vector<char>& attr) {
  StaticEntry e = build_entry(game, reach, marking_index);
  CnfBuild out;
  out.bad_reachable = e.bad_reachable;
  out.cnf = assemble(e, attr);
  return out;
}

std::string mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::Auto: return "auto";
    case SolveMode::General: return "general";
    case SolveMode::TwoSat: return "twosat";
  }
  return "general";
}

Verdict decide(const PetriGame& game, const SolveOptions& options) {
  ReachabilityGraph reach = explore(game.net, game.bound);
  ValidationReport report = validate(game, reach);

  Verdict verdict;
  verdict.stats.reachable_markings = reach.size();
  verdict.stats.max_env_tokens = report.max_env_tokens;

  SolveMode mode = options.mode;
  if (mode == SolveMode::Auto)
    mode = report.max_env_tokens <= 2 ? SolveMode::TwoSat : SolveMode::General;
  if (mode == SolveMode::TwoSat && report.max_env_tokens > 2)
    throw TwoSatPreconditionError("two-literal mode needs at most two environment tokens, saw " +
                                  std::to_string(report.max_env_tokens));
  verdict.stats.mode_used = mode;

  const std::uint32_t n = reach.size();
  const bool parallel = options.workers > 1;
  std::string deferred_error;

  auto run_parallel = [&](auto&& body) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(options.workers))
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        try {
          body(static_cast<std::uint32_t>(i));
        } catch (const std::exception& ex) {
#pragma omp critical
          if (deferred_error.empty()) deferred_error = ex.what();
        }
      }
      if (!deferred_error.empty()) throw std::logic_error(deferred_error);
      return;
    }
#endif
    for (std::uint32_t i = 0; i < n; ++i) body(i);
  };

  std::vector<char> attr(n, 0);

  if (mode == SolveMode::General) {
    std::vector<StaticEntry> entries(n);
    run_parallel([&](std::uint32_t i) { entries[i] = build_entry(game, reach, i); });

    std::vector<std::optional<Assignment>> model(n);
    for (;;) {
      ++verdict.stats.iterations;
      std::vector<char> lost(n, 0);
      run_parallel([&](std::uint32_t i) {
        if (attr[i]) return;
        if (entries[i].bad_reachable) {
          lost[i] = 1;
          return;
        }
        auto a = sat_solve(assemble(entries[i], attr));
        if (a)
          model[i] = std::move(a);
        else
          lost[i] = 1;
      });
      std::uint64_t solved = 0;
      bool changed = false;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (attr[i]) continue;
        if (!entries[i].bad_reachable) ++solved;
        if (lost[i]) changed = true;
      }
      verdict.stats.sat_calls += solved;
      if (!changed) break;
      for (std::uint32_t i = 0; i < n; ++i)
        if (lost[i]) attr[i] = 1;
      if (attr[reach.initial]) {
        verdict.winner = Winner::Environment;
        return verdict;
      }
    }
    // Fixpoint: the last round solved every survivor against the final losing
    // set, so its models are the witness. Re-check them anyway.
    CommitmentStrategy strategy;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (attr[i]) continue;
      if (!model[i]) throw std::logic_error("survivor without model");
      if (!satisfies(assemble(entries[i], attr), *model[i]))
        throw std::logic_error("witness failed re-verification");
      std::vector<Id> committed;
      for (const auto& [v, val] : *model[i])
        if (val) committed.push_back(v);
      strategy.choices.emplace(reach.markings[i], std::move(committed));
    }
    verdict.winner = Winner::System;
    verdict.strategy = std::move(strategy);
    return verdict;
  }

  // Two-environment-token path.
  std::vector<TwoEntry> entries(n);
  run_parallel([&](std::uint32_t i) { entries[i] = build_two_entry(game, reach, i); });

  std::vector<std::vector<Id>> commitment(n);
  for (;;) {
    ++verdict.stats.iterations;
    std::vector<char> lost(n, 0);
    std::vector<char> called(n, 0);
    run_parallel([&](std::uint32_t i) {
      if (attr[i]) return;
      TwoOutcome out = eval_two(game, entries[i], attr);
      called[i] = out.used_solver ? 1 : 0;
      if (out.lost)
        lost[i] = 1;
      else
        commitment[i] = std::move(out.commitment);
    });
    bool changed = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (attr[i]) continue;
      verdict.stats.sat_calls += called[i];
      if (lost[i]) changed = true;
    }
    if (!changed) break;
    for (std::uint32_t i = 0; i < n; ++i)
      if (lost[i]) attr[i] = 1;
    if (attr[reach.initial]) {
      verdict.winner = Winner::Environment;
      return verdict;
    }
  }
  // Witnesses are checked against the full formula, not the two-literal one.
  CommitmentStrategy strategy;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (attr[i]) continue;
    StaticEntry full = build_entry(game, reach, i);
    if (!satisfies(assemble(full, attr), full_assignment(full.vars, commitment[i])))
      throw std::logic_error("witness failed re-verification");
    strategy.choices.emplace(reach.markings[i], commitment[i]);
  }
  verdict.winner = Winner::System;
  verdict.strategy = std::move(strategy);
  return verdict;
}

}  // namespace pg
