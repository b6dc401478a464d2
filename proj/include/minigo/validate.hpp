#pragma once

#include <string>
#include <vector>

#include "minigo/ast.hpp"

namespace minigo {

struct Violation {
  enum class Kind { DuplicateName, ChannelInExpression, RecursiveSpawn };
  Kind kind;
  std::string name;
  SourceLoc loc;

  std::string describe() const;
  bool operator==(const Violation &other) const {
    return kind == other.kind && name == other.name;
  }
};

const char *to_string(Violation::Kind kind);

/// Checks the standing assumptions of the model extraction: distinct
/// names, no channels inside value expressions, and no goroutine spawning
/// on recursive call cycles. An empty result means they all hold.
std::vector<Violation> validate_assumptions(const Program &program);

} // namespace minigo
