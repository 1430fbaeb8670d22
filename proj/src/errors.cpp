#include "pg/errors.hpp"

namespace pg {

BoundExceededError::BoundExceededError(std::string marking_, std::string place_,
                                       std::uint32_t count_, std::uint32_t bound_)
    : Error("marking {" + marking_ + "} puts " + std::to_string(count_) + " tokens on " + place_ +
            ", bound is " + std::to_string(bound_)),
      marking(std::move(marking_)),
      place(std::move(place_)),
      count(count_),
      bound(bound_) {}

NotOneSystemPlayerError::NotOneSystemPlayerError(std::string marking_, std::uint64_t tokens_)
    : Error("marking {" + marking_ + "} carries " + std::to_string(tokens_) +
            " system tokens, expected exactly 1"),
      marking(std::move(marking_)),
      tokens(tokens_) {}

ParseError::ParseError(std::size_t line_, std::size_t col_, const std::string& what_)
    : Error("line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": " + what_),
      line(line_),
      col(col_) {}

CounterexampleError::CounterexampleError(std::string what_, std::vector<std::string> play_)
    : Error(std::move(what_)), play(std::move(play_)) {}

AxiomViolationError::AxiomViolationError(std::string axiom_, std::string cut_,
                                         const std::string& what_)
    : Error(axiom_ + ": " + what_), axiom(std::move(axiom_)), cut(std::move(cut_)) {}

}  // namespace pg
