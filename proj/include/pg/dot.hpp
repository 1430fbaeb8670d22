#pragma once

#include <string>

#include "pg/game.hpp"
#include "pg/net.hpp"
#include "pg/strategy.hpp"
#include "pg/unfolding.hpp"

namespace pg {

/// Net structure as a Graphviz digraph: places as ellipses (system places
/// filled gray), transitions as boxes, arc weights above 1 as edge labels,
/// initial tokens as bullet marks in the place label.
std::string dot_game(const PetriGame& game);

/// Marking graph: one node per reachable marking, edges labeled with the
/// fired transition.
std::string dot_reachability(const PetriNet& net, const ReachabilityGraph& reach);

/// One node per marking the strategy covers, annotated with its commitment
/// set; edges are the moves the strategy leaves open (dashed when the
/// environment fires, solid when a committed system transition fires).
std::string dot_strategy(const PetriGame& game, const CommitmentStrategy& strategy);

/// Branching-process prefix: conditions as ellipses labeled with their place
/// image (system-labeled ones gray), instances as boxes labeled with their
/// transition image. Initial-cut conditions are drawn with a double border.
std::string dot_prefix(const PetriGame& game, const UnfoldingPrefix& prefix);

}  // namespace pg
