#pragma once

#include <string>
#include <string_view>

#include "minigo/ast.hpp"

namespace minigo {

/// Parses MiniGo source (Go surface syntax) into a Program.
///
/// `package` and `import` clauses are accepted and ignored. Function
/// literals used in `go` or call statements are lifted to fresh
/// declarations named `<enclosing>_func<k>`; channels they capture become
/// trailing channel parameters. Integer constants are substituted into
/// expressions. Throws ParseError with the offending location.
Program parse_program(std::string_view source, const std::string &file = "<input>");

/// Reads and parses a file. Throws Error when it cannot be read.
Program parse_file(const std::string &path);

/// Renders a Program back to source text that parses to the same AST.
std::string print_program(const Program &program);

/// Structural dump used to compare ASTs; locations are omitted.
std::string dump_ast(const Program &program);

} // namespace minigo
