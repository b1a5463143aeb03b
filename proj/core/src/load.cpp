#include "shapes/load.hpp"

#include <fstream>
#include <sstream>

#include "shapes/parser.hpp"

namespace shapes {

LoadResult load_program_source(std::string_view source, const CheckOptions& opts) {
  LoadResult result;
  ParseResult parsed = parse_program(source);
  if (!parsed.ok()) {
    result.diagnostics = std::move(parsed.diagnostics);
    sort_diagnostics(result.diagnostics);
    return result;
  }
  result.program = CheckedProgram::build(std::move(parsed.program), result.diagnostics, opts);
  return result;
}

LoadResult load_program_file(const std::string& path, const CheckOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    LoadResult result;
    result.io_error = true;
    result.io_message = "cannot read '" + path + "'";
    return result;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_program_source(buf.str(), opts);
}

}  // namespace shapes
