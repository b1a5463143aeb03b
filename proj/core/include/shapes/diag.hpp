#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "shapes/ast.hpp"

namespace shapes {

// Static-error codes; runtime errors use the R-series in eval.hpp.
namespace errc {
inline constexpr const char* parse = "E001";
inline constexpr const char* unknown_name = "E100";
inline constexpr const char* duplicate_name = "E101";
inline constexpr const char* type_mismatch = "E200";
inline constexpr const char* null_needs_type = "E201";
inline constexpr const char* ill_formed_type = "E210";
inline constexpr const char* layout_repeated_field = "E220";
inline constexpr const char* layout_missing_field = "E221";
inline constexpr const char* malformed_class = "E230";
}  // namespace errc

struct Diagnostic {
  std::string code;
  std::string message;
  SourcePos pos;
};

inline std::string render(const Diagnostic& d, const std::string& file) {
  return file + ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) +
         ": error[" + d.code + "]: " + d.message;
}

// Source order, then code for ties on one position. Stable.
inline void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.pos.line != b.pos.line) return a.pos.line < b.pos.line;
    if (a.pos.col != b.pos.col) return a.pos.col < b.pos.col;
    return a.code < b.code;
  });
}

}  // namespace shapes
