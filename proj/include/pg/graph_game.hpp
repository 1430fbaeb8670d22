#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pg/game.hpp"
#include "pg/strategy.hpp"

namespace pg {

/// Which finite safety game to build. Plain is the direct translation;
/// Tracked additionally threads a responsibility multiset R (system place
/// plus the environment tokens answerable for the next system firing), which
/// prunes system firings to those with R inside the precondition.
enum class GameVariant { Plain, Tracked };

/// A vertex of the finite safety game. Player 0 (the system) owns vertices
/// without a commitment and picks one; Player 1 (the environment) owns the
/// rest and schedules firings.
struct GameVertex {
  Marking marking;
  /// Sorted subset of the system place's postset; nullopt = Player 0 to move.
  std::optional<std::vector<Id>> commitment;
  /// Tracked variant only: s_M <= R <= M.
  std::optional<Multiset> responsibility;

  bool player0() const { return !commitment.has_value(); }

  bool operator==(const GameVertex&) const = default;
  auto operator<=>(const GameVertex&) const = default;
};

enum class EdgeKind {
  Commit,   // Player 0 fixes a commitment
  EnvFire,  // purely environmental firing, commitment carried along
  SysFire   // committed system firing, back to a Player-0 vertex
};

/// Why a Player-1 vertex is bad. Evaluated in this order; None for good
/// vertices (and for Player-0 vertices, which are never bad themselves).
enum class BadClass {
  None,
  BadMarking,     // the marking is bad
  CommitClash,    // two committed transitions enabled at once
  InstanceClash,  // a committed transition could consume distinguishable tokens
  Deadlock        // something is enabled, but only unallowed system transitions
};

std::vector<std::pair<EdgeKind, GameVertex>> successors(const PetriGame& game,
                                                        const GameVertex& v,
                                                        GameVariant variant);

BadClass classify_bad(const PetriGame& game, const GameVertex& v);

const char* bad_class_name(BadClass c);

enum class Winner { System, Environment };

struct ExplicitSolve {
  Winner winner = Winner::Environment;
  std::size_t vertex_count = 0;
  std::size_t bad_vertices = 0;
  std::size_t attractor_size = 0;
  /// Filled when the system wins: commitment for every Player-0 marking
  /// reachable under the extracted strategy.
  CommitmentStrategy strategy;
};

/// Materializes the game lazily from the initial vertex, classifies bad
/// vertices, and computes the environment's attractor. Throws VertexCapError
/// when more than `vertex_cap` vertices would be materialized.
ExplicitSolve solve_explicit(const PetriGame& game, GameVariant variant,
                             std::size_t vertex_cap = 10'000'000);

/// (k+1)^|P| * (2^|T|+1): reachable markings times possible commitments plus
/// the choice vertex, the vertex bound for the plain variant. nullopt on
/// 64-bit overflow.
std::optional<std::uint64_t> vertex_count_bound(Count k, std::size_t places,
                                                std::size_t transitions);

}  // namespace pg
