#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shapes/eval.hpp"
#include "shapes/load.hpp"

namespace testutil {

inline shapes::CheckedProgram load_ok(const std::string& src) {
  shapes::LoadResult r = shapes::load_program_source(src);
  if (!r.program) {
    std::string all;
    for (const auto& d : r.diagnostics) all += shapes::render(d, "<test>") + "\n";
    throw std::runtime_error("program did not check:\n" + src + "\n" + all);
  }
  return std::move(*r.program);
}

inline std::vector<shapes::Diagnostic> diags_of(const std::string& src) {
  return shapes::load_program_source(src).diagnostics;
}

// Single expected diagnostic, by code (and line when nonzero).
inline bool only_diag(const std::string& src, const std::string& code, int line = 0) {
  auto diags = diags_of(src);
  if (diags.size() != 1) return false;
  if (diags[0].code != code) return false;
  return line == 0 || diags[0].pos.line == line;
}

struct RunResult {
  shapes::Value value;
  shapes::Heap heap;
};

inline RunResult run_entry(const shapes::CheckedProgram& prog, const std::string& cls,
                           const std::string& method, shapes::EvalObserver* obs = nullptr) {
  RunResult out;
  shapes::EvalOptions opts;
  opts.observer = obs;
  shapes::Evaluator ev(prog, out.heap, opts);
  out.value = ev.run_entry(cls, method);
  return out;
}

// A minimal single-class program whose body is the only varying part.
inline std::string one_method(const std::string& locals, const std::string& body) {
  return "class P<<pp: [P<<pp>>]>> {\n"
         "    f: P<<pp>>;\n"
         "    def m(x: P<<pp>>): P<<pp>> {\n"
         "        pools\n"
         "        locals " + locals + " ;\n" +
         body +
         "        this\n"
         "    }\n"
         "}\n";
}

}  // namespace testutil
