#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "shapes/eval.hpp"

using namespace shapes;
using testutil::load_ok;
using testutil::run_entry;

namespace {

const char* kSmall =
    "class C<<a: [C<<a>>]>> {\n"
    "    f: C<<a>>;\n"
    "    def m(x: C<<a>>): C<<a>> {\n"
    "        pools p: L<<p>>\n"
    "        locals v: C<<p>> w: C<<p>> ;\n"
    "        v = new C<<p>>;\n"
    "        v.f = v;\n"
    "        w = v.f;\n"
    "        this\n"
    "    }\n"
    "}\n"
    "layout L: [C] = rec { f };\n";

}  // namespace

TEST_CASE("evaluation fires one result event per expression, in order") {
  CheckedProgram prog = load_ok(kSmall);
  RecordingObserver rec;
  auto out = run_entry(prog, "C", "m", &rec);

  Value pooled{Location{0, 0}};
  Value receiver{ObjectAddr{0}};
  std::vector<std::pair<EvalRule, Value>> expected{
      {EvalRule::NewPooledObject, pooled}, {EvalRule::Assignment, pooled},
      {EvalRule::PooledObjectWrite, pooled}, {EvalRule::PooledObjectRead, pooled},
      {EvalRule::Assignment, pooled},      {EvalRule::Variable, receiver},
      {EvalRule::Sequence, receiver},      {EvalRule::Sequence, receiver},
      {EvalRule::Sequence, receiver},
  };
  REQUIRE(rec.events.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(rec.events[i].rule == expected[i].first);
    CHECK(rec.events[i].value == expected[i].second);
  }
  CHECK(out.value == receiver);
  // the written field really is in the pool
  CHECK(out.heap.read_slot({0, 0}, {0, 0}) == pooled);
}

TEST_CASE("entry protocol: receiver obj@0 with none parameters, null argument") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a, b>>], b: [C<<b, a>>]>> {\n"
      "    def m(x: C<<a, b>>): C<<a, b>> {\n"
      "        pools\n"
      "        locals ;\n"
      "        x\n"
      "    }\n"
      "}\n");
  auto out = run_entry(prog, "C", "m");
  CHECK(is_null(out.value));  // the parameter arrives null
  REQUIRE(out.heap.object_count() == 1);
  const ObjectCell& receiver = out.heap.object(ObjectAddr{0});
  CHECK(receiver.class_name == "C");
  CHECK(receiver.params == std::vector<PoolAddr>{std::nullopt, std::nullopt});
  CHECK(out.heap.pool_count() == 0);
}

TEST_CASE("calls run the callee body before the call event") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a>>]>> {\n"
      "    f: C<<a>>;\n"
      "    def outer(x: C<<a>>): C<<a>> {\n"
      "        pools\n"
      "        locals me: C<<a>> r: C<<a>> ;\n"
      "        me = this;\n"
      "        r = me.inner(x);\n"
      "        r\n"
      "    }\n"
      "    def inner(y: C<<a>>): C<<a>> {\n"
      "        pools\n"
      "        locals fresh: C<<a>> ;\n"
      "        fresh = new C<<a>>;\n"
      "        fresh\n"
      "    }\n"
      "}\n"
      "layout L: [C] = rec { f };\n");
  RecordingObserver rec;
  auto out = run_entry(prog, "C", "outer", &rec);
  // receiver obj@0, fresh obj@1 (a is none at the entry receiver)
  CHECK(out.value == Value{ObjectAddr{1}});

  // the callee's new-object event lands before the caller's method-call event
  size_t new_at = rec.events.size(), call_at = rec.events.size();
  for (size_t i = 0; i < rec.events.size(); ++i) {
    if (rec.events[i].rule == EvalRule::NewObject && new_at == rec.events.size()) new_at = i;
    if (rec.events[i].rule == EvalRule::MethodCall) call_at = i;
  }
  REQUIRE(new_at < rec.events.size());
  REQUIRE(call_at < rec.events.size());
  CHECK(new_at < call_at);
  CHECK(rec.events[call_at].value == Value{ObjectAddr{1}});
}

TEST_CASE("null receivers raise R001 with the failing name") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a>>]>> {\n"
      "    f: C<<a>>;\n"
      "    def m(x: C<<a>>): C<<a>> {\n"
      "        pools\n"
      "        locals v: C<<a>> ;\n"
      "        v = x.f;\n"
      "        v\n"
      "    }\n"
      "}\n"
      "layout L: [C] = rec { f };\n");
  Heap heap;
  Evaluator ev(prog, heap);
  try {
    ev.run_entry("C", "m");
    FAIL("expected a runtime error");
  } catch (const RuntimeError& e) {
    CHECK(e.code == errc::null_deref);
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
}

TEST_CASE("call depth is bounded by max_depth") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a>>]>> {\n"
      "    def m(x: C<<a>>): C<<a>> {\n"
      "        pools\n"
      "        locals me: C<<a>> r: C<<a>> ;\n"
      "        me = this;\n"
      "        r = me.m(me);\n"
      "        r\n"
      "    }\n"
      "}\n");
  Heap heap;
  EvalOptions opts;
  opts.max_depth = 7;
  Evaluator ev(prog, heap, opts);
  try {
    ev.run_entry("C", "m");
    FAIL("expected a depth error");
  } catch (const RuntimeError& e) {
    CHECK(e.code == errc::depth_exceeded);
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("unknown entry points are internal errors, not runtime errors") {
  CheckedProgram prog = load_ok(kSmall);
  Heap heap;
  Evaluator ev(prog, heap);
  CHECK_THROWS_AS(ev.run_entry("C", "nope"), InternalError);
  CHECK_THROWS_AS(ev.run_entry("Zip", "m"), InternalError);
}

TEST_CASE("trace observer writes one line per event") {
  CheckedProgram prog = load_ok(kSmall);
  std::ostringstream trace;
  TraceObserver obs(trace);
  run_entry(prog, "C", "m", &obs);
  std::string text = trace.str();
  CHECK(text.find("new-pooled-object => (pool@0, 0)\n") == 0);
  CHECK(text.find("variable => obj@0\n") != std::string::npos);
  CHECK(text.rfind("sequence => obj@0\n") == text.size() - 18);
}

TEST_CASE("two runs of one program produce identical heaps") {
  CheckedProgram prog = load_ok(kSmall);
  auto a = run_entry(prog, "C", "m");
  auto b = run_entry(prog, "C", "m");
  CHECK(render(a.value) == render(b.value));
  CHECK(dump_heap(a.heap, prog.index()) == dump_heap(b.heap, prog.index()));
}

TEST_CASE("assignment stores into the frame, not the heap") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a>>]>> {\n"
      "    def m(x: C<<a>>): C<<none>> {\n"
      "        pools\n"
      "        locals v: C<<none>> ;\n"
      "        v = new C<<none>>;\n"
      "        v = null;\n"
      "        v\n"
      "    }\n"
      "}\n");
  auto out = run_entry(prog, "C", "m");
  CHECK(is_null(out.value));
  // the allocation itself survives unreferenced
  CHECK(out.heap.object_count() == 2);
}
