#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pg/game.hpp"
#include "pg/graph_game.hpp"

namespace pg {

/// Turn-based toggle game: two players alternately flip one of their own
/// boolean variables (or pass). Before every move the environment side may
/// instead freeze the board and claim the formula holds; it wins exactly when
/// the claim is true. The formula is in negation normal form.
struct G5Instance {
  struct Var {
    std::string name;
    bool system_owned = false;
    bool initially_true = false;
  };
  struct Node {
    enum class Kind { Lit, And, Or };
    Kind kind = Kind::Lit;
    std::uint32_t var = 0;  // Lit only
    bool positive = true;   // Lit only
    std::uint32_t left = 0, right = 0;  // And/Or children; indices follow the parent
  };
  std::vector<Var> vars;
  std::vector<Node> formula;  // preorder arena, root at index 0
  bool system_first = false;
};

/// Structural checks: nonempty formula, child indices after parents, variable
/// indices in range. Throws Error.
void validate_g5(const G5Instance& inst);

/// Evaluates the formula under an assignment (one char per variable, 0/1).
bool eval_g5(const G5Instance& inst, const std::vector<char>& assignment);

/// Builds the 1-bounded game with a turn-counter token cycling through the
/// question/move places, one two-place token per variable, and a proving
/// phase with one two-place token per subformula. The only bad place is the
/// root's proved place.
PetriGame gen_g5(const G5Instance& inst);

/// Exact winner of the toggle game by attractor over (assignment, turn)
/// states. Guarded to at most 10 variables.
Winner solve_g5_tiny(const G5Instance& inst);

struct ThreeSatInstance {
  std::uint32_t num_vars = 0;
  std::vector<std::array<int, 3>> clauses;  // signed 1-based variables
};

void validate_3sat(const ThreeSatInstance& inst);

/// Builds the game with one system token and three environment tokens: per
/// clause a joint transition into three per-occurrence literal places, per
/// occurrence a joint take transition with the system token into sinks, and
/// per complementary occurrence pair a contradiction transition plus a
/// self-loop place. No bad markings; the verdict hinges on deadlock
/// avoidance and determinism alone.
PetriGame gen_3sat(const ThreeSatInstance& inst);

/// Exhaustive satisfiability check, at most 20 variables.
bool brute_force_sat(const ThreeSatInstance& inst);

/// DIMACS CNF with exactly three literals per clause.
ThreeSatInstance parse_dimacs(const std::string& text);

/// Line format: `svar NAME 0|1` / `evar NAME 0|1` declarations, `first s|e`,
/// and `formula EXPR` where EXPR is `name`, `(not name)`, `(and EXPR EXPR)`
/// or `(or EXPR EXPR)`.
G5Instance parse_g5(const std::string& text);

/// Seeded instance generators; same seed, same instance, on every platform.
ThreeSatInstance random_3sat(std::uint64_t seed, std::uint32_t vars, std::uint32_t clauses);
G5Instance random_g5(std::uint64_t seed, std::uint32_t vars, std::uint32_t depth);

/// Named ready-made games: the two-employee access-control example, a minimal
/// winning game and a minimal losing game.
std::vector<std::pair<std::string, PetriGame>> builtin_examples();

}  // namespace pg
