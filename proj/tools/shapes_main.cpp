#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shapes/config_check.hpp"
#include "shapes/eval.hpp"
#include "shapes/load.hpp"

namespace {

// Exit codes: 0 success, 1 static error, 2 runtime error, 3 I/O or usage
// failure, 4 invariant violation / internal error.
constexpr int kOk = 0;
constexpr int kStaticError = 1;
constexpr int kRuntimeError = 2;
constexpr int kIoError = 3;
constexpr int kInvariantError = 4;

int report_load_failure(const shapes::LoadResult& loaded, const std::string& file) {
  if (loaded.io_error) {
    std::cerr << "error: " << loaded.io_message << "\n";
    return kIoError;
  }
  for (const shapes::Diagnostic& d : loaded.diagnostics)
    std::cerr << shapes::render(d, file) << "\n";
  return kStaticError;
}

int cmd_check(const std::string& file) {
  shapes::LoadResult loaded = shapes::load_program_file(file);
  if (!loaded.program) return report_load_failure(loaded, file);
  return kOk;
}

int cmd_run(const std::string& file, const std::string& entry, bool check_invariants,
            bool dump, bool trace, int max_depth) {
  auto sep = entry.find("::");
  if (sep == std::string::npos || sep == 0 || sep + 2 >= entry.size()) {
    std::cerr << "error: --entry wants Class::method\n";
    return kIoError;
  }
  std::string entry_class = entry.substr(0, sep);
  std::string entry_method = entry.substr(sep + 2);

  shapes::LoadResult loaded = shapes::load_program_file(file);
  if (!loaded.program) return report_load_failure(loaded, file);
  const shapes::CheckedProgram& prog = *loaded.program;

  if (!prog.index().method_of(entry_class, entry_method)) {
    std::cerr << "error: no method '" << entry_method << "' on class '" << entry_class << "'\n";
    return kIoError;
  }

  shapes::FanoutObserver fanout;
  shapes::TraceObserver tracer(std::cerr);
  shapes::InvariantObserver invariants(prog);
  if (trace) fanout.add(&tracer);
  if (check_invariants) fanout.add(&invariants);

  shapes::Heap heap;
  shapes::EvalOptions opts;
  opts.max_depth = max_depth;
  if (trace || check_invariants) opts.observer = &fanout;
  shapes::Evaluator evaluator(prog, heap, opts);

  try {
    shapes::Value result = evaluator.run_entry(entry_class, entry_method);
    std::cout << shapes::render(result) << "\n";
    if (dump) std::cout << shapes::dump_heap(heap, prog.index());
  } catch (const shapes::RuntimeError& e) {
    std::cerr << "runtime error[" << e.code << "]: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const shapes::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariantError;
  } catch (const shapes::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariantError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pooled-layout object language: checker and interpreter"};
  app.require_subcommand(1);

  std::string check_file;
  CLI::App* check = app.add_subcommand("check", "parse and typecheck a program");
  check->add_option("file", check_file, "program file")->required();

  std::string run_file, entry;
  bool invariants = false, dump = false, trace = false;
  int max_depth = 10000;
  CLI::App* run = app.add_subcommand("run", "typecheck and run a program");
  run->add_option("file", run_file, "program file")->required();
  run->add_option("--entry", entry, "entry point, Class::method")->required();
  run->add_flag("--check-invariants", invariants,
                "verify heap and frame well-formedness after every step");
  run->add_flag("--dump-heap", dump, "print the final heap after the result");
  run->add_flag("--trace", trace, "stream evaluation steps to stderr");
  run->add_option("--max-depth", max_depth, "call depth limit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIoError;
  }

  if (check->parsed()) return cmd_check(check_file);
  return cmd_run(run_file, entry, invariants, dump, trace, max_depth);
}
