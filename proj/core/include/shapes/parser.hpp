#pragma once

#include <string_view>
#include <vector>

#include "shapes/ast.hpp"
#include "shapes/diag.hpp"

namespace shapes {

struct ParseResult {
  Program program;                    // declarations that parsed cleanly
  std::vector<Diagnostic> diagnostics;  // E001 only
  bool ok() const { return diagnostics.empty(); }
};

// Parses a whole compilation unit. On a syntax error inside a declaration the
// parser records one E001 and resynchronizes at the next top-level `class` or
// `layout` keyword (at brace depth zero), so independent declarations still
// come back. Also enforces the intra-declaration name-distinctness invariants
// (duplicate pool params / fields / methods / method binders) as E001.
ParseResult parse_program(std::string_view source);

}  // namespace shapes
