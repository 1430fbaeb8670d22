#include "pg/sat.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pg {
namespace {

// Local clause form: variable positions instead of ids.
struct LocalLit {
  std::uint32_t var;
  bool positive;
};

std::uint32_t var_position(const std::vector<Id>& vars, Id v) {
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  if (it == vars.end() || *it != v) throw std::logic_error("clause literal not in variable set");
  return static_cast<std::uint32_t>(it - vars.begin());
}

std::vector<std::vector<LocalLit>> localize(const Cnf& cnf) {
  std::vector<std::vector<LocalLit>> out;
  out.reserve(cnf.clauses.size());
  for (const auto& clause : cnf.clauses) {
    std::vector<LocalLit> c;
    c.reserve(clause.size());
    for (const Lit& l : clause) c.push_back({var_position(cnf.variables, l.var), l.positive});
    out.push_back(std::move(c));
  }
  return out;
}

Assignment export_assignment(const std::vector<Id>& vars, const std::vector<signed char>& value) {
  Assignment out;
  out.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) out.emplace_back(vars[i], value[i] == 1);
  return out;
}

class Dpll {
 public:
  Dpll(std::size_t nvars, const std::vector<std::vector<LocalLit>>& clauses)
      : value_(nvars, -1), clauses_(clauses) {}

  bool search() {
    std::size_t mark = trail_.size();
    int prop = propagate();
    if (prop < 0) {
      undo_to(mark);
      return false;
    }
    if (prop > 0) {
      // Every clause satisfied; unassigned variables complete to false,
      // the minimal completion under the counting order.
      for (std::size_t i = 0; i < value_.size(); ++i)
        if (value_[i] < 0) assign(static_cast<std::uint32_t>(i), false);
      return true;
    }
    // Branch on the highest unassigned variable, false first. Together with
    // propagation this visits satisfying assignments in counting order with
    // variable 0 as the least-significant bit.
    std::uint32_t branch = 0;
    for (std::size_t i = value_.size(); i-- > 0;) {
      if (value_[i] < 0) {
        branch = static_cast<std::uint32_t>(i);
        break;
      }
    }
    for (bool v : {false, true}) {
      std::size_t inner = trail_.size();
      assign(branch, v);
      if (search()) return true;
      undo_to(inner);
    }
    undo_to(mark);
    return false;
  }

  const std::vector<signed char>& value() const { return value_; }

 private:
  void assign(std::uint32_t var, bool v) {
    value_[var] = v ? 1 : 0;
    trail_.push_back(var);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  // Returns -1 on conflict, 1 when all clauses are satisfied, 0 otherwise.
  int propagate() {
    for (;;) {
      bool all_satisfied = true;
      bool forced = false;
      for (const auto& clause : clauses_) {
        bool satisfied = false;
        int unassigned = 0;
        LocalLit unit{0, false};
        for (const LocalLit& l : clause) {
          signed char v = value_[l.var];
          if (v < 0) {
            ++unassigned;
            unit = l;
          } else if ((v == 1) == l.positive) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        all_satisfied = false;
        if (unassigned == 0) return -1;
        if (unassigned == 1) {
          assign(unit.var, unit.positive);
          forced = true;
        }
      }
      if (all_satisfied) return 1;
      if (!forced) return 0;
    }
  }

  std::vector<signed char> value_;
  const std::vector<std::vector<LocalLit>>& clauses_;
  std::vector<std::uint32_t> trail_;
};

}  // namespace

std::optional<Assignment> sat_solve(const Cnf& cnf) {
  for (const auto& clause : cnf.clauses)
    if (clause.empty()) return std::nullopt;
  auto clauses = localize(cnf);
  Dpll dpll(cnf.variables.size(), clauses);
  if (!dpll.search()) return std::nullopt;
  return export_assignment(cnf.variables, dpll.value());
}

std::optional<Assignment> sat_enumerate(const Cnf& cnf) {
  const std::size_t n = cnf.variables.size();
  if (n > 24) throw std::logic_error("sat_enumerate limited to 24 variables");
  auto clauses = localize(cnf);
  for (std::uint64_t word = 0; word < (std::uint64_t{1} << n); ++word) {
    bool ok = true;
    for (const auto& clause : clauses) {
      bool satisfied = false;
      for (const LocalLit& l : clause) {
        bool v = (word >> l.var) & 1;
        if (v == l.positive) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<signed char> value(n);
      for (std::size_t i = 0; i < n; ++i) value[i] = static_cast<signed char>((word >> i) & 1);
      return export_assignment(cnf.variables, value);
    }
  }
  return std::nullopt;
}

bool satisfies(const Cnf& cnf, const Assignment& a) {
  auto lookup = [&](Id var) {
    auto it = std::lower_bound(a.begin(), a.end(), var,
                               [](const auto& entry, Id v) { return entry.first < v; });
    if (it == a.end() || it->first != var) throw std::logic_error("assignment missing variable");
    return it->second;
  };
  for (const auto& clause : cnf.clauses) {
    bool satisfied = false;
    for (const Lit& l : clause) {
      if (lookup(l.var) == l.positive) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

TwoSatBuilder::TwoSatBuilder(std::vector<Id> variables) : variables_(std::move(variables)) {
  if (!std::is_sorted(variables_.begin(), variables_.end()))
    throw std::logic_error("two-literal solver requires sorted variables");
}

void TwoSatBuilder::add_clause(std::vector<Lit> lits) {
  if (lits.empty()) {
    contradiction_ = true;
    return;
  }
  if (lits.size() > 2)
    throw std::logic_error("two-literal invariant broken: clause with " +
                           std::to_string(lits.size()) + " literals");
  for (const Lit& l : lits) var_position(variables_, l.var);
  clauses_.push_back(std::move(lits));
}

void TwoSatBuilder::add_contradiction() { contradiction_ = true; }

std::optional<Assignment> TwoSatBuilder::solve() const {
  if (contradiction_) return std::nullopt;
  const std::size_t n = variables_.size();
  // Implication graph: node 2*i is "variable i false", 2*i+1 "variable i true".
  auto node = [&](const Lit& l) {
    return 2 * var_position(variables_, l.var) + (l.positive ? 1 : 0);
  };
  auto negated = [](std::uint32_t nd) { return nd ^ 1u; };
  std::vector<std::vector<std::uint32_t>> adj(2 * n);
  for (const auto& clause : clauses_) {
    if (clause.size() == 1) {
      adj[negated(node(clause[0]))].push_back(node(clause[0]));
    } else {
      adj[negated(node(clause[0]))].push_back(node(clause[1]));
      adj[negated(node(clause[1]))].push_back(node(clause[0]));
    }
  }

  // Tarjan over nodes in index order; components come out in reverse
  // topological order, so the component with the smaller id is closer to the
  // sinks and naming it "later" picks the forced value deterministically.
  constexpr std::uint32_t kUnvisited = 0xffffffffu;
  std::vector<std::uint32_t> index(2 * n, kUnvisited), low(2 * n, 0), comp(2 * n, kUnvisited);
  std::vector<char> on_stack(2 * n, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0, next_comp = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> frames;
  for (std::uint32_t root = 0; root < 2 * n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        std::uint32_t w = adj[f.v][f.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        std::uint32_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          for (;;) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
      }
    }
  }

  std::vector<signed char> value(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[2 * i] == comp[2 * i + 1]) return std::nullopt;
    value[i] = comp[2 * i + 1] < comp[2 * i] ? 1 : 0;
  }
  return export_assignment(variables_, value);
}

}  // namespace pg
