#pragma once

#include <string>
#include <vector>

#include "shapes/ast.hpp"

namespace shapes {

// One manifest row: what the checker and (optionally) the interpreter are
// expected to do with a corpus program.
struct ExpectedDiag {
  std::string code;
  int line = 0;  // 0: any line
};

struct CorpusEntry {
  std::string path;  // relative to the manifest's directory
  int check_exit = 0;
  std::vector<ExpectedDiag> check_diags;
  std::string entry_class, entry_method;  // empty: not runnable
  int run_exit = -1;                      // -1: do not run
  std::vector<std::string> run_codes;     // runtime error codes expected, in order
};

// Manifest line format (whitespace-separated, `#` starts a comment):
//   PATH check=EXIT[:CODE@LINE[,CODE@LINE...]] [run=Class::method:EXIT[:CODE,...]]
// Throws std::runtime_error on unreadable files or malformed rows.
std::vector<CorpusEntry> load_manifest(const std::string& manifest_path);

// In-process replay of one manifest row against the same pipeline the CLI
// uses; `detail` explains the first mismatch.
struct CorpusOutcome {
  bool passed = false;
  std::string detail;
};
CorpusOutcome validate_entry(const std::string& corpus_dir, const CorpusEntry& entry);

// Layout rewriting: the observable behaviour of a program must not depend on
// how layouts cluster fields, so tests re-run programs under these schemes.
enum class LayoutScheme {
  AsDeclared,     // keep the program's own clusters
  SingleCluster,  // every layout becomes one cluster, fields in class order
  PerField,       // every layout gets one cluster per field, in class order
};

Program rewrite_layouts(const Program& program, LayoutScheme scheme);

}  // namespace shapes
