#include <doctest.h>

#include "helpers.hpp"
#include "shapes/config_check.hpp"
#include "shapes/corpus.hpp"
#include "shapes/parser.hpp"
#include "shapes/pretty.hpp"

using namespace shapes;
using testutil::load_ok;
using testutil::run_entry;

namespace {

const char* kPooledPair =
    "class C<<a: [C<<a>>]>> {\n"
    "    f: C<<a>>;\n"
    "    def m(x: C<<a>>): C<<a>> {\n"
    "        pools p: L<<p>>\n"
    "        locals v: C<<p>> w: C<<none>> ;\n"
    "        v = new C<<p>>;\n"
    "        v.f = v;\n"
    "        w = new C<<none>>;\n"
    "        w.f = w;\n"
    "        this\n"
    "    }\n"
    "}\n"
    "layout L: [C] = rec { f };\n";

}  // namespace

TEST_CASE("weak agreement accepts the values evaluation actually builds") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto out = run_entry(prog, "C", "m");

  RtClass pooled{"C", {PoolAddr{0u}}};
  RtClass unpooled{"C", {std::nullopt}};
  CHECK(weak_agree(prog, out.heap, Value{}, pooled));  // null fits anything
  CHECK(weak_agree(prog, out.heap, Value{Location{0, 0}}, pooled));
  CHECK(weak_agree(prog, out.heap, Value{ObjectAddr{1}}, unpooled));

  // an unpooled object never satisfies a pooled expectation, nor vice versa
  CHECK_FALSE(weak_agree(prog, out.heap, Value{ObjectAddr{1}}, pooled));
  CHECK_FALSE(weak_agree(prog, out.heap, Value{Location{0, 0}}, unpooled));
  // out-of-range pool member
  CHECK_FALSE(weak_agree(prog, out.heap, Value{Location{0, 7}}, pooled));
  // wrong class
  CHECK_FALSE(weak_agree(prog, out.heap, Value{ObjectAddr{1}}, RtClass{"D", {std::nullopt}}));
}

TEST_CASE("pool addresses agree with bounds and pool types by exact parameters") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto out = run_entry(prog, "C", "m");

  RtBound bound{"C", {PoolAddr{0u}}};
  CHECK(weak_agree(prog, out.heap, PoolAddr{}, bound));  // none fits any bound
  CHECK(weak_agree(prog, out.heap, PoolAddr{0u}, bound));
  CHECK_FALSE(weak_agree(prog, out.heap, PoolAddr{0u}, RtBound{"D", {PoolAddr{0u}}}));

  RtPool pool_t{"L", {PoolAddr{0u}}};
  CHECK(weak_agree(prog, out.heap, PoolAddr{0u}, pool_t));
  CHECK_FALSE(weak_agree(prog, out.heap, PoolAddr{}, pool_t));  // a pool var is never none
  CHECK_FALSE(weak_agree(prog, out.heap, PoolAddr{0u}, RtPool{"M", {PoolAddr{0u}}}));
}

TEST_CASE("a clean run has a well-formed heap; corruption is reported") {
  CheckedProgram prog = load_ok(
      "class C<<a: [C<<a>>]>> {\n"
      "    f: C<<a>>;\n"
      "    def m(x: C<<a>>): C<<none>> {\n"
      "        pools\n"
      "        locals v: C<<none>> w: D<<none>> ;\n"
      "        v = new C<<none>>;\n"
      "        w = new D<<none>>;\n"
      "        v.f = v;\n"
      "        v\n"
      "    }\n"
      "}\n"
      "class D<<d: [D<<d>>]>> {\n"
      "    g: D<<d>>;\n"
      "}\n");
  auto out = run_entry(prog, "C", "m");
  CHECK(wf_heap(prog, out.heap));
  CHECK(heap_violation(prog, out.heap) == std::nullopt);

  // smuggle the D object into a C-typed field
  out.heap.write_field(ObjectAddr{1}, 0, Value{ObjectAddr{2}});
  REQUIRE_FALSE(wf_heap(prog, out.heap));
  std::string why = *heap_violation(prog, out.heap);
  CHECK(why.find("obj@1") != std::string::npos);
  CHECK(why.find("f") != std::string::npos);
}

TEST_CASE("pooled cells are checked against their layout's class") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto out = run_entry(prog, "C", "m");
  CHECK(wf_heap(prog, out.heap));

  // point a pooled f-slot at the unpooled object: C<<p>> expects pool 0
  out.heap.write_slot({0, 0}, {0, 0}, Value{ObjectAddr{1}});
  REQUIRE_FALSE(wf_heap(prog, out.heap));
  CHECK(heap_violation(prog, out.heap)->find("pool@0") != std::string::npos);
}

TEST_CASE("frames must bind exactly the context, with agreeing values") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto out = run_entry(prog, "C", "m");
  const TypingContext* ctx = prog.method_context("C", "m");
  REQUIRE(ctx);

  Frame good;
  good.bind_pool("a", std::nullopt);
  good.bind_value("this", Value{ObjectAddr{0}});
  good.bind_value("x", Value{});
  good.bind_pool("p", PoolAddr{0u});
  good.bind_value("v", Value{Location{0, 0}});
  good.bind_value("w", Value{ObjectAddr{1}});
  CHECK(wf_frame(prog, *ctx, out.heap, good));

  Frame partial;
  partial.bind_pool("a", std::nullopt);
  partial.bind_value("this", Value{ObjectAddr{0}});
  partial.bind_value("x", Value{});
  partial.bind_pool("p", PoolAddr{0u});
  partial.bind_value("v", Value{Location{0, 0}});
  CHECK_FALSE(wf_frame(prog, *ctx, out.heap, partial));

  Frame extra = good;
  extra.bind_value("stray", Value{});
  CHECK_FALSE(wf_frame(prog, *ctx, out.heap, extra));

  Frame wrong = good;
  wrong.set_value("v", Value{ObjectAddr{1}});  // unpooled object in a pooled slot
  CHECK_FALSE(wf_frame(prog, *ctx, out.heap, wrong));

  // a pool slot where an object slot belongs
  Frame mis;
  mis.bind_pool("a", std::nullopt);
  mis.bind_value("this", Value{ObjectAddr{0}});
  mis.bind_pool("x", std::nullopt);
  mis.bind_pool("p", PoolAddr{0u});
  mis.bind_value("v", Value{Location{0, 0}});
  mis.bind_value("w", Value{ObjectAddr{1}});
  CHECK_FALSE(wf_frame(prog, *ctx, out.heap, mis));
}

TEST_CASE("the invariant observer passes clean runs and counts its checks") {
  CheckedProgram prog = load_ok(kPooledPair);
  InvariantObserver obs(prog);
  auto out = run_entry(prog, "C", "m", &obs);
  CHECK(out.value == Value{ObjectAddr{0}});
  CHECK(obs.checks_run() > 0);
}

TEST_CASE("the invariant observer throws on a corrupted heap") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto out = run_entry(prog, "C", "m");
  // reuse a typed node from the program for the callback
  const MethodDecl* m = prog.index().method_of("C", "m");
  REQUIRE(m);
  const auto* seq = std::get_if<SeqExpr>(&m->body.node);
  REQUIRE(seq);
  const Expr* stmt = seq->first.get();

  out.heap.write_slot({0, 0}, {0, 0}, Value{ObjectAddr{1}});
  InvariantObserver obs(prog);
  Frame frame;
  CHECK_THROWS_AS(
      obs.on_result(*stmt, EvalRule::Assignment, Value{}, out.heap, frame, nullptr),
      InvariantViolation);
}

TEST_CASE("heap isomorphism relates runs of the same program and splits different ones") {
  CheckedProgram prog = load_ok(kPooledPair);
  auto a = run_entry(prog, "C", "m");
  auto b = run_entry(prog, "C", "m");
  CHECK(heap_iso(prog, a.heap, a.value, prog, b.heap, b.value));
  // roots can be pool members and plain objects alike
  CHECK(heap_iso(prog, a.heap, Value{Location{0, 0}}, prog, b.heap, Value{Location{0, 0}}));
  CHECK(heap_iso(prog, a.heap, Value{}, prog, b.heap, Value{}));
  // null vs object never match
  CHECK_FALSE(heap_iso(prog, a.heap, a.value, prog, b.heap, Value{}));
  // self-loop vs null field: different graphs
  CHECK_FALSE(
      heap_iso(prog, a.heap, Value{Location{0, 0}}, prog, b.heap, Value{ObjectAddr{0}}));
}

TEST_CASE("isomorphism is layout-blind") {
  ParseResult parsed = parse_program(kPooledPair);
  REQUIRE(parsed.ok());

  auto run_scheme = [&](LayoutScheme scheme) {
    Program variant = rewrite_layouts(parsed.program, scheme);
    std::vector<Diagnostic> diags;
    auto prog = CheckedProgram::build(std::move(variant), diags);
    REQUIRE(prog);
    REQUIRE(diags.empty());
    auto out = run_entry(*prog, "C", "m");
    return std::make_pair(std::move(*prog), std::move(out));
  };

  auto declared = run_scheme(LayoutScheme::AsDeclared);
  auto single = run_scheme(LayoutScheme::SingleCluster);
  auto per_field = run_scheme(LayoutScheme::PerField);

  CHECK(heap_iso(declared.first, declared.second.heap, declared.second.value, single.first,
                 single.second.heap, single.second.value));
  CHECK(heap_iso(declared.first, declared.second.heap, declared.second.value, per_field.first,
                 per_field.second.heap, per_field.second.value));
  CHECK(render(declared.second.value) == render(per_field.second.value));
}
