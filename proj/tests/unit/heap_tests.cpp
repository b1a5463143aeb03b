#include <doctest.h>

#include "shapes/heap.hpp"
#include "shapes/parser.hpp"

using namespace shapes;

TEST_CASE("appending to a two-cluster pool of size three yields index three") {
  Heap heap;
  PoolId id = heap.alloc_pool("L", {PoolAddr{0u}}, {2, 1});
  CHECK(heap.pool_append(id) == 0);
  CHECK(heap.pool_append(id) == 1);
  CHECK(heap.pool_append(id) == 2);
  CHECK(heap.pool(id).size() == 3);

  CHECK(heap.pool_append(id) == 3);
  const PoolCell& cell = heap.pool(id);
  CHECK(cell.size() == 4);
  REQUIRE(cell.clusters.size() == 2);
  CHECK(cell.clusters[0].size() == 4);
  CHECK(cell.clusters[1].size() == 4);
}

TEST_CASE("read-after-write round-trips at every record and slot") {
  Heap heap;
  PoolId id = heap.alloc_pool("L", {PoolAddr{0u}}, {2, 1});
  for (int n = 0; n < 3; ++n) heap.pool_append(id);

  // fresh slots read null
  for (uint32_t n = 0; n < 3; ++n) {
    CHECK(is_null(heap.read_slot({id, n}, {0, 0})));
    CHECK(is_null(heap.read_slot({id, n}, {0, 1})));
    CHECK(is_null(heap.read_slot({id, n}, {1, 0})));
  }

  // distinct values everywhere, then read back
  uint32_t stamp = 0;
  for (uint32_t n = 0; n < 3; ++n)
    for (auto [i, j] : {std::pair<size_t, size_t>{0, 0}, {0, 1}, {1, 0}}) {
      heap.write_slot({id, n}, {i, j}, Value{ObjectAddr{stamp}});
      ++stamp;
    }
  stamp = 0;
  for (uint32_t n = 0; n < 3; ++n)
    for (auto [i, j] : {std::pair<size_t, size_t>{0, 0}, {0, 1}, {1, 0}}) {
      CHECK(heap.read_slot({id, n}, {i, j}) == Value{ObjectAddr{stamp}});
      ++stamp;
    }
}

TEST_CASE("objects store fields in declaration order") {
  Heap heap;
  ObjectAddr a = heap.alloc_object("C", {std::nullopt}, 2);
  ObjectAddr b = heap.alloc_object("C", {std::nullopt}, 2);
  CHECK(a.id == 0);
  CHECK(b.id == 1);
  CHECK(is_null(heap.read_field(a, 0)));
  heap.write_field(a, 1, Value{b});
  CHECK(heap.read_field(a, 1) == Value{b});
  CHECK(is_null(heap.read_field(b, 1)));
  CHECK(heap.object(a).class_name == "C");
  CHECK(heap.object_count() == 2);
}

TEST_CASE("mistyped or out-of-range access is an internal error") {
  Heap heap;
  ObjectAddr a = heap.alloc_object("C", {std::nullopt}, 1);
  PoolId id = heap.alloc_pool("L", {PoolAddr{0u}}, {1});
  heap.pool_append(id);

  CHECK_THROWS_AS(heap.read_field(a, 5), InternalError);
  CHECK_THROWS_AS(heap.read_field(ObjectAddr{42}, 0), InternalError);
  CHECK_THROWS_AS(heap.read_slot({id, 7}, {0, 0}), InternalError);
  CHECK_THROWS_AS(heap.read_slot({id, 0}, {3, 0}), InternalError);
  CHECK_THROWS_AS(heap.read_slot({id, 0}, {0, 3}), InternalError);
  CHECK_THROWS_AS(heap.pool(PoolId{9}), InternalError);
}

TEST_CASE("pool initialization is two-phase and one-shot") {
  Heap heap;
  PoolId id = heap.reserve_pool();
  CHECK_THROWS_AS(heap.pool_append(id), InternalError);  // reserved, not initialized
  heap.init_pool(id, "L", {PoolAddr{id}}, {1});
  CHECK_THROWS_AS(heap.init_pool(id, "L", {PoolAddr{id}}, {1}), InternalError);
  CHECK(heap.pool_append(id) == 0);
}

TEST_CASE("heap dump renders objects then pools in allocation order") {
  ParseResult r = parse_program(
      "class C<<a: [C<<a>>]>> { f: C<<a>>; g: C<<a>>; }\n"
      "layout L: [C] = rec { g } + rec { f };\n");
  REQUIRE(r.ok());
  ProgramIndex idx = ProgramIndex::build(r.program);

  Heap heap;
  ObjectAddr obj = heap.alloc_object("C", {std::nullopt}, 2);
  PoolId pool = heap.alloc_pool("L", {PoolAddr{0u}}, {1, 1});
  heap.pool_append(pool);
  heap.pool_append(pool);
  heap.write_field(obj, 0, Value{Location{pool, 1}});
  heap.write_slot({pool, 0}, {1, 0}, Value{obj});
  heap.write_slot({pool, 1}, {0, 0}, Value{Location{pool, 0}});

  CHECK(dump_heap(heap, idx) ==
        "obj@0 : C<none> { f = (pool@0, 1), g = null }\n"
        "pool@0 : L<pool@0> size=2 clusters=[[g],[f]]"
        " | record 0: (null) (obj@0) | record 1: ((pool@0, 0)) (null)\n");
}

TEST_CASE("value rendering") {
  CHECK(render(Value{}) == "null");
  CHECK(render(Value{ObjectAddr{3}}) == "obj@3");
  CHECK(render(Value{Location{1, 4}}) == "(pool@1, 4)");
  CHECK(render(PoolAddr{}) == "none");
  CHECK(render(PoolAddr{2u}) == "pool@2");
}
