#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "shapes/static_checker.hpp"

namespace shapes {

// Front half of every pipeline: parse + whole-program check.
struct LoadResult {
  std::optional<CheckedProgram> program;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
  bool io_error = false;
  std::string io_message;
};

LoadResult load_program_source(std::string_view source, const CheckOptions& opts = {});
LoadResult load_program_file(const std::string& path, const CheckOptions& opts = {});

}  // namespace shapes
