#include <doctest.h>

#include "helpers.hpp"
#include "shapes/parser.hpp"
#include "shapes/static_checker.hpp"

using namespace shapes;
using testutil::diags_of;
using testutil::only_diag;

namespace {

// Two-pool class pair used by most expression-level cases.
std::string two_pool(const std::string& body, const std::string& locals) {
  return "class C<<a: [C<<a>>]>> {\n"
         "    f: C<<a>>;\n"
         "    def m(x: C<<a>>): C<<a>> {\n"
         "        pools p: L<<p>> q: L<<q>>\n"
         "        locals " + locals + " ;\n" +
         body +
         "    }\n"
         "}\n"
         "layout L: [C] = rec { f };\n";
}

}  // namespace

TEST_CASE("assignment requires matching class types") {
  CHECK(only_diag(two_pool("        v = w;\n        this\n",
                           "v: C<<p>> w: C<<q>>"),
                  errc::type_mismatch, 6));
  CHECK(diags_of(two_pool("        v = w;\n        this\n",
                          "v: C<<p>> w: C<<p>>"))
            .empty());
}

TEST_CASE("field writes check the substituted field type") {
  // f of C<<p>> has type C<<p>>; w lives in q's pool
  CHECK(only_diag(two_pool("        v.f = w;\n        this\n",
                           "v: C<<p>> w: C<<q>>"),
                  errc::type_mismatch, 6));
  CHECK(diags_of(two_pool("        v.f = w;\n        this\n",
                          "v: C<<p>> w: C<<p>>"))
            .empty());
}

TEST_CASE("field reads substitute the receiver's pool arguments") {
  // v.f : C<<p>>, assigned into w : C<<q>>
  CHECK(only_diag(two_pool("        w = v.f;\n        this\n",
                           "v: C<<p>> w: C<<q>>"),
                  errc::type_mismatch, 6));
}

TEST_CASE("method calls check the substituted parameter type") {
  CHECK(only_diag(two_pool("        v = v.m(w);\n        this\n",
                           "v: C<<p>> w: C<<q>>"),
                  errc::type_mismatch, 6));
  CHECK(diags_of(two_pool("        v = v.m(v);\n        this\n",
                          "v: C<<p>> w: C<<q>>"))
            .empty());
}

TEST_CASE("the body must end in the declared return type") {
  CHECK(only_diag(two_pool("        v\n", "v: C<<p>>"), errc::type_mismatch, 6));
}

TEST_CASE("null literals only type against an assignment target") {
  CHECK(diags_of(two_pool("        v = null;\n        this\n", "v: C<<p>>")).empty());
  // as a statement it has no expected type
  CHECK(only_diag(two_pool("        null;\n        this\n", "v: C<<p>>"),
                  errc::null_needs_type, 6));
  // as the body result likewise
  CHECK(only_diag(two_pool("        null\n", "v: C<<p>>"), errc::null_needs_type, 6));
}

TEST_CASE("unknown and mis-sorted names in expressions") {
  CHECK(only_diag(two_pool("        v = ghost;\n        this\n", "v: C<<p>>"),
                  errc::unknown_name, 6));
  // a pool is not an object variable
  CHECK(only_diag(two_pool("        v = p;\n        this\n", "v: C<<p>>"),
                  errc::type_mismatch, 6));
  // and cannot be assigned to
  CHECK(only_diag(two_pool("        p = v;\n        this\n", "v: C<<p>>"),
                  errc::type_mismatch, 6));
}

TEST_CASE("allocation checks the full class type") {
  // C<<q>> is fine; D does not exist
  CHECK(only_diag(two_pool("        v = new D<<p>>;\n        this\n", "v: C<<p>>"),
                  errc::unknown_name, 6));
  // arity error on the allocated type
  CHECK(only_diag(two_pool("        v = new C<<p, q>>;\n        this\n", "v: C<<p>>"),
                  errc::ill_formed_type, 6));
}

TEST_CASE("diagnostics survive consistent renaming of pool binders") {
  auto rename = [](std::string s) {
    // crude but adequate: the names below only occur as identifiers
    auto replace_all = [&s](const std::string& from, const std::string& to) {
      size_t at = 0;
      while ((at = s.find(from, at)) != std::string::npos) {
        s.replace(at, from.size(), to);
        at += to.size();
      }
    };
    replace_all("<<a", "<<zz");
    replace_all("a:", "zz:");
    replace_all("<<p", "<<r1");
    replace_all("p:", "r1:");
    replace_all("<<q", "<<r2");
    replace_all("q:", "r2:");
    return s;
  };
  std::string bad = two_pool("        v = w;\n        this\n", "v: C<<p>> w: C<<q>>");
  auto before = diags_of(bad);
  auto after = diags_of(rename(bad));
  REQUIRE(before.size() == 1);
  REQUIRE(after.size() == 1);
  CHECK(before[0].code == after[0].code);
  CHECK(before[0].pos.line == after[0].pos.line);
  CHECK(before[0].pos.col == after[0].pos.col);

  std::string good = two_pool("        v.f = w;\n        this\n", "v: C<<p>> w: C<<p>>");
  CHECK(diags_of(rename(good)).empty());
}

TEST_CASE("typed programs expose per-method contexts and node types") {
  shapes::CheckedProgram prog =
      testutil::load_ok(two_pool("        v = new C<<p>>;\n        this\n", "v: C<<p>>"));
  const TypingContext* ctx = prog.method_context("C", "m");
  REQUIRE(ctx);
  CHECK(ctx->contains("this"));
  CHECK(ctx->contains("x"));
  CHECK(ctx->contains("p"));
  CHECK(ctx->contains("v"));
  CHECK_FALSE(ctx->contains("ghost"));

  // the body's new-expression carries its static type
  const MethodDecl* m = prog.index().method_of("C", "m");
  REQUIRE(m);
  const auto* seq = std::get_if<SeqExpr>(&m->body.node);
  REQUIRE(seq);
  const auto* assign = std::get_if<AssignExpr>(&seq->first->node);
  REQUIRE(assign);
  const ClassType* t = prog.node_type(assign->rhs.get());
  REQUIRE(t);
  CHECK(*t == ClassType{"C", {PoolArg{"p"}}, {}});
}
