#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "pg/multiset.hpp"

namespace pg {

/// Literal over a transition-id variable.
struct Lit {
  Id var;
  bool positive;

  bool operator==(const Lit&) const = default;
  auto operator<=>(const Lit&) const = default;
};

inline Lit pos(Id v) { return {v, true}; }
inline Lit neg(Id v) { return {v, false}; }

/// CNF over a fixed variable set. `variables` is sorted ascending; clause
/// literals reference members of it. An empty clause is unsatisfiable.
struct Cnf {
  std::vector<Id> variables;
  std::vector<std::vector<Lit>> clauses;
};

/// Complete assignment, sorted by variable.
using Assignment = std::vector<std::pair<Id, bool>>;

/// Davis-Putnam search with unit propagation. Deterministic: among all
/// satisfying assignments it returns the one that comes first when counting
/// assignments upward with the lowest variable as least-significant bit and
/// false < true; variables left free once every clause is satisfied are
/// completed to false, which keeps commitments minimal.
std::optional<Assignment> sat_solve(const Cnf& cnf);

/// Exhaustive reference evaluation, used by tests and the CLI oracle. Same
/// ordering contract as sat_solve. Refuses more than 24 variables.
std::optional<Assignment> sat_enumerate(const Cnf& cnf);

bool satisfies(const Cnf& cnf, const Assignment& a);

/// Clause collector for the two-environment-token solver. The formula must
/// stay within two literals per clause by construction; add_clause enforces
/// that invariant at runtime. solve() runs the implication-graph
/// strongly-connected-component decision procedure.
class TwoSatBuilder {
 public:
  explicit TwoSatBuilder(std::vector<Id> variables);

  void add_clause(std::vector<Lit> lits);  // 1 or 2 literals; throws std::logic_error on more
  void add_contradiction();

  std::size_t clause_count() const { return clauses_.size(); }
  std::optional<Assignment> solve() const;

 private:
  std::vector<Id> variables_;
  std::vector<std::vector<Lit>> clauses_;
  bool contradiction_ = false;
};

}  // namespace pg
