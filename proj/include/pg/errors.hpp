#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pg {

/// Base class for all domain errors. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A net reference names a place or transition that was never declared.
struct UnknownNodeError : Error {
  using Error::Error;
};

/// Duplicate place or transition id during net construction.
struct DuplicateIdError : Error {
  using Error::Error;
};

/// A transition with an empty precondition or postcondition was declared.
struct EmptyFlowError : Error {
  using Error::Error;
};

/// Firing a transition that is not enabled in the given marking.
struct NotEnabledError : Error {
  using Error::Error;
};

/// Exploration produced a marking that exceeds the declared bound.
struct BoundExceededError : Error {
  BoundExceededError(std::string marking, std::string place, std::uint32_t count,
                     std::uint32_t bound);
  std::string marking;
  std::string place;
  std::uint32_t count;
  std::uint32_t bound;
};

/// A reachable marking whose system-token count differs from one.
struct NotOneSystemPlayerError : Error {
  NotOneSystemPlayerError(std::string marking, std::uint64_t tokens);
  std::string marking;
  std::uint64_t tokens;
};

/// Text-format errors carry the 1-based line and column of the offending token.
struct ParseError : Error {
  ParseError(std::size_t line, std::size_t col, const std::string& what);
  std::size_t line;
  std::size_t col;
};

/// Explicit game construction hit the configured vertex cap.
struct VertexCapError : Error {
  using Error::Error;
};

/// The restricted solver was forced onto a game with more than two
/// environment tokens in some reachable marking.
struct TwoSatPreconditionError : Error {
  using Error::Error;
};

/// A strategy check found a play from the initial vertex to a bad vertex.
struct CounterexampleError : Error {
  CounterexampleError(std::string what, std::vector<std::string> play);
  std::vector<std::string> play;  // vertex descriptions along the losing play
};

/// An unfolding prefix violated one of the four strategy axioms.
struct AxiomViolationError : Error {
  AxiomViolationError(std::string axiom, std::string cut, const std::string& what);
  std::string axiom;
  std::string cut;
};

}  // namespace pg
