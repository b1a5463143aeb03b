#include <doctest.h>

#include "helpers.hpp"
#include "shapes/bench.hpp"
#include "shapes/config_check.hpp"
#include "shapes/load.hpp"

using namespace shapes;

TEST_CASE("generated traversal programs pass the full pipeline at both settings") {
  for (bool pooled : {true, false}) {
    CAPTURE(pooled);
    std::string src = traversal_program(6, pooled);
    LoadResult loaded = load_program_source(src);
    REQUIRE_MESSAGE(loaded.program, "generated source failed to check");

    Heap heap;
    Evaluator ev(*loaded.program, heap);
    ev.run_entry("Driver", "main");
    CHECK(wf_heap(*loaded.program, heap));
    if (pooled) {
      REQUIRE(heap.pool_count() == 1);
      CHECK(heap.pool(0).size() == 6);
      CHECK(heap.object_count() == 1);  // just the Driver receiver
    } else {
      CHECK(heap.pool_count() == 0);
      CHECK(heap.object_count() == 7);  // receiver + six nodes
    }
  }
}

TEST_CASE("the chain is linked in allocation order") {
  std::string src = traversal_program(4, true);
  LoadResult loaded = load_program_source(src);
  REQUIRE(loaded.program);
  Heap heap;
  Evaluator ev(*loaded.program, heap);
  ev.run_entry("Driver", "main");
  // next lives in the first cluster; the chain walks 0 -> 1 -> 2 -> 3 -> null
  for (uint32_t i = 0; i + 1 < 4; ++i)
    CHECK(heap.read_slot({0, i}, {0, 0}) == Value{Location{0, i + 1}});
  CHECK(is_null(heap.read_slot({0, 3}, {0, 0})));
}

TEST_CASE("bench produces timings and well-formed report lines") {
  TraversalReport report = bench_traversal(300);
  CHECK(report.n == 300);
  CHECK(report.pooled_walk_ns > 0);
  CHECK(report.unpooled_walk_ns > 0);

  std::string pooled = report_line(report, true);
  std::string unpooled = report_line(report, false);
  CHECK(pooled.rfind("traversal pooled n=300 walk_ns=", 0) == 0);
  CHECK(unpooled.rfind("traversal unpooled n=300 walk_ns=", 0) == 0);
  // the tail is digits only
  std::string tail = pooled.substr(pooled.find("walk_ns=") + 8);
  CHECK(!tail.empty());
  CHECK(tail.find_first_not_of("0123456789") == std::string::npos);
}
