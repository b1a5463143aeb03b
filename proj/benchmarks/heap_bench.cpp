#include <benchmark/benchmark.h>

#include <vector>

#include "shapes/bench.hpp"
#include "shapes/heap.hpp"

namespace {

shapes::PoolId make_pool(shapes::Heap& heap, std::vector<size_t> widths) {
  shapes::PoolId id = heap.reserve_pool();
  heap.init_pool(id, "L", {id}, widths);
  return id;
}

void BM_PoolAppend(benchmark::State& state) {
  for (auto _ : state) {
    shapes::Heap heap;
    shapes::PoolId id = make_pool(heap, {2, 1});
    for (int i = 0; i < state.range(0); ++i)
      benchmark::DoNotOptimize(heap.pool_append(id));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PoolAppend)->Arg(1024)->Arg(16384);

void BM_SlotChase(benchmark::State& state) {
  shapes::Heap heap;
  shapes::PoolId id = make_pool(heap, {2, 1});
  uint32_t n = uint32_t(state.range(0));
  for (uint32_t i = 0; i < n; ++i) heap.pool_append(id);
  for (uint32_t i = 0; i + 1 < n; ++i)
    heap.write_slot({id, i}, {0, 0}, shapes::Value{shapes::Location{id, i + 1}});
  for (auto _ : state) {
    shapes::Value v = heap.read_slot({id, 0}, {0, 0});
    while (!shapes::is_null(v))
      v = heap.read_slot(std::get<shapes::Location>(v), {0, 0});
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SlotChase)->Arg(1024)->Arg(16384);

void BM_ObjectFieldChase(benchmark::State& state) {
  shapes::Heap heap;
  size_t n = size_t(state.range(0));
  std::vector<shapes::ObjectAddr> ids;
  for (size_t i = 0; i < n; ++i) ids.push_back(heap.alloc_object("C", {std::nullopt}, 1));
  for (size_t i = 0; i + 1 < n; ++i) heap.write_field(ids[i], 0, shapes::Value{ids[i + 1]});
  for (auto _ : state) {
    shapes::Value v = heap.read_field(ids[0], 0);
    while (!shapes::is_null(v))
      v = heap.read_field(std::get<shapes::ObjectAddr>(v), 0);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ObjectFieldChase)->Arg(1024)->Arg(16384);

void BM_TraversalSource(benchmark::State& state) {
  bool pooled = state.range(1) != 0;
  for (auto _ : state) {
    std::string src = shapes::traversal_program(size_t(state.range(0)), pooled);
    benchmark::DoNotOptimize(src.size());
  }
}
BENCHMARK(BM_TraversalSource)->Args({1024, 0})->Args({1024, 1});

}  // namespace

BENCHMARK_MAIN();
