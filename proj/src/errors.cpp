#include "minigo/errors.hpp"

namespace minigo {

ParseError::ParseError(SourceLoc loc, std::string message)
    : Error(loc.str() + ": " + message), loc_(std::move(loc)),
      message_(std::move(message)) {}

ModelError::ModelError(Kind kind, SourceLoc loc, std::string message)
    : Error(loc.str() + ": " + message), kind_(kind), loc_(std::move(loc)) {}

MissingBound::MissingBound(std::string symbol)
    : Error("no bound given for parameter '" + symbol + "'"),
      symbol_(std::move(symbol)) {}

DivergentTrace::DivergentTrace(std::size_t step)
    : Error("trace diverges at step " + std::to_string(step)),
      step_(step) {}

} // namespace minigo
