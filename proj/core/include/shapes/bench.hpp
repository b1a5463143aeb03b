#pragma once

#include <cstddef>
#include <string>

namespace shapes {

// Generated list program: a Driver that chains `n` nodes and walks them with
// a method call; `pooled` decides whether the nodes go into a pool or onto
// the global heap. The language has no loops, so the bodies are generated
// straight-line code — this is also the interpreter's scalability test.
std::string traversal_program(size_t n, bool pooled);

struct TraversalReport {
  size_t n = 0;
  long long pooled_walk_ns = 0;
  long long unpooled_walk_ns = 0;
};

// Builds, checks, and runs both variants, timing the walk call via an
// evaluation observer. Throws on any pipeline failure — the generated
// programs are supposed to be correct by construction.
TraversalReport bench_traversal(size_t n);

// "traversal pooled n=100000 walk_ns=123456"
std::string report_line(const TraversalReport& report, bool pooled);

}  // namespace shapes
