#include "shapes/bench.hpp"

#include <chrono>
#include <sstream>

#include "shapes/eval.hpp"
#include "shapes/load.hpp"

namespace shapes {

std::string traversal_program(size_t n, bool pooled) {
  if (n < 1) throw InternalError("traversal_program: need at least one node");
  std::ostringstream out;
  out << "class Node<<p: [Node<<p>>]>> {\n"
         "    next: Node<<p>>;\n"
         "    payload: Node<<p>>;\n"
         "\n"
         "    def walk(h: Node<<p>>): Node<<p>> {\n"
         "        pools\n"
         "        locals cur: Node<<p>> ;\n"
         "        cur = h";
  for (size_t i = 1; i < n; ++i) out << ";\n        cur = cur.next";
  out << ";\n        cur\n"
         "    }\n"
         "}\n"
         "\n";
  const char* node_type = pooled ? "Node<<lp>>" : "Node<<none>>";
  out << "class Driver<<d: [Driver<<d>>]>> {\n"
         "    def main(go: Driver<<d>>): Driver<<d>> {\n";
  out << (pooled ? "        pools lp: NodeSeq<<lp>>\n" : "        pools\n");
  out << "        locals head: " << node_type << " cur: " << node_type << " tmp: " << node_type
      << " last: " << node_type << " ;\n";
  out << "        head = new " << node_type << ";\n"
         "        cur = head";
  for (size_t i = 1; i < n; ++i)
    out << ";\n        tmp = new " << node_type << ";\n"
           "        cur.next = tmp;\n"
           "        cur = tmp";
  out << ";\n        last = head.walk(head);\n"
         "        this\n"
         "    }\n"
         "}\n"
         "\n"
         "layout NodeSeq: [Node] = rec { next } + rec { payload };\n";
  return out.str();
}

namespace {

// Brackets the evaluation of the first call to `method`.
class CallTimer : public EvalObserver {
 public:
  explicit CallTimer(std::string method) : method_(std::move(method)) {}

  void on_enter(const Expr& e) override {
    const auto* call = std::get_if<CallExpr>(&e.node);
    if (call && call->method == method_ && !running_ && ns_ < 0) {
      running_ = true;
      start_ = std::chrono::steady_clock::now();
    }
  }
  void on_result(const Expr& e, EvalRule, const Value&, const Heap&, const Frame&,
                 const TypingContext*) override {
    const auto* call = std::get_if<CallExpr>(&e.node);
    if (call && call->method == method_ && running_) {
      ns_ = std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::steady_clock::now() - start_)
                .count();
      running_ = false;
    }
  }

  long long ns() const { return ns_; }

 private:
  std::string method_;
  bool running_ = false;
  long long ns_ = -1;
  std::chrono::steady_clock::time_point start_;
};

long long run_variant(size_t n, bool pooled) {
  CheckOptions opts;
  opts.record_node_types = false;  // no invariant checking here; saves a large side table
  LoadResult loaded = load_program_source(traversal_program(n, pooled), opts);
  if (!loaded.program) {
    std::string detail = loaded.io_error ? loaded.io_message : "";
    for (const Diagnostic& d : loaded.diagnostics)
      detail += " " + d.code + "@" + std::to_string(d.pos.line) + " " + d.message;
    throw InternalError("generated traversal program failed its check:" + detail);
  }
  Heap heap;
  CallTimer timer("walk");
  EvalOptions eval_opts;
  eval_opts.observer = &timer;
  Evaluator ev(*loaded.program, heap, eval_opts);
  ev.run_entry("Driver", "main");
  if (timer.ns() < 0) throw InternalError("walk call was never timed");
  return timer.ns();
}

}  // namespace

TraversalReport bench_traversal(size_t n) {
  TraversalReport report;
  report.n = n;
  report.pooled_walk_ns = run_variant(n, /*pooled=*/true);
  report.unpooled_walk_ns = run_variant(n, /*pooled=*/false);
  return report;
}

std::string report_line(const TraversalReport& report, bool pooled) {
  std::ostringstream out;
  out << "traversal " << (pooled ? "pooled" : "unpooled") << " n=" << report.n
      << " walk_ns=" << (pooled ? report.pooled_walk_ns : report.unpooled_walk_ns);
  return out.str();
}

}  // namespace shapes
