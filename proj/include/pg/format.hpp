#pragma once

#include <string>

#include "pg/game.hpp"

namespace pg {

/// Parses the line-oriented game format:
///
///   bound 1
///   places system s_closed s_open
///   places env e1 e1_attempt
///   init s_closed e1
///   transition te11 pre e1 post e1_attempt
///   bad places a1 a2          # or one "bad marking <tokens>" line per marking
///
/// '#' starts a comment, token counts default to 1 ("p" == "p:1"), reserved
/// words cannot be used as ids, and `bad places` / `bad marking` cannot be
/// mixed. Throws ParseError with 1-based line/column on malformed input.
PetriGame parse_game(const std::string& text);

/// Canonical serialization: sorted places, sorted transitions, sorted bad
/// section. parse_game(serialize_game(g)) reproduces g exactly.
std::string serialize_game(const PetriGame& game);

/// "p q:2" rendering shared by reports and serialization.
std::string marking_tokens(const PetriNet& net, const Marking& m);

}  // namespace pg
