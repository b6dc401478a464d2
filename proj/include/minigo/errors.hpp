#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "minigo/ast.hpp"

namespace minigo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(SourceLoc loc, std::string message);
  const SourceLoc &loc() const { return loc_; }
  const std::string &message() const { return message_; }

private:
  SourceLoc loc_;
  std::string message_;
};

class ModelError : public Error {
public:
  enum class Kind { UnsupportedStatement, UnknownFunction, ArityMismatch };
  ModelError(Kind kind, SourceLoc loc, std::string message);
  Kind kind() const { return kind_; }
  const SourceLoc &loc() const { return loc_; }

private:
  Kind kind_;
  SourceLoc loc_;
};

class MissingBound : public Error {
public:
  explicit MissingBound(std::string symbol);
  const std::string &symbol() const { return symbol_; }

private:
  std::string symbol_;
};

class DivergentTrace : public Error {
public:
  explicit DivergentTrace(std::size_t step);
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

} // namespace minigo
