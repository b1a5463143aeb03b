#include "shapes/parser.hpp"

#include <set>
#include <utility>

#include "shapes/lexer.hpp"

namespace shapes {

namespace {

struct ParseError {
  Diagnostic diag;
};

class Parser {
 public:
  explicit Parser(std::string_view source) : toks_(lex(source)) {}

  ParseResult run() {
    ParseResult result;
    while (!at(Tok::End)) {
      if (at(Tok::Error)) {
        result.diagnostics.push_back({errc::parse, cur().text, cur().pos});
        break;
      }
      try {
        if (at(Tok::KwClass)) {
          result.program.classes.push_back(parse_class());
        } else if (at(Tok::KwLayout)) {
          result.program.layouts.push_back(parse_layout());
        } else {
          fail("expected 'class' or 'layout' at top level");
        }
      } catch (const ParseError& e) {
        result.diagnostics.push_back(e.diag);
        recover();
      }
    }
    return result;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  const Token& advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError{{errc::parse, msg, cur().pos}};
  }
  [[noreturn]] void fail_at(const std::string& msg, SourcePos pos) const {
    throw ParseError{{errc::parse, msg, pos}};
  }

  const Token& expect(Tok k, const char* where) {
    if (!at(k))
      fail(std::string("expected ") + token_name(k) + " " + where + ", found " +
           token_name(cur().kind));
    return advance();
  }

  // Skip to the next top-level declaration keyword outside braces.
  void recover() {
    int depth = 0;
    while (!at(Tok::End) && !at(Tok::Error)) {
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace) && depth > 0) --depth;
      if (depth == 0 && (at(Tok::KwClass) || at(Tok::KwLayout))) return;
      advance();
    }
  }

  std::string expect_name(const char* where) {
    if (at(Tok::KwNone)) fail(std::string("'none' cannot be used as a name ") + where);
    return expect(Tok::Ident, where).text;
  }

  PoolArg parse_pool_arg() {
    if (at(Tok::KwNone)) {
      advance();
      return kNone;
    }
    return PoolArg(expect(Tok::Ident, "in pool argument list").text);
  }

  std::vector<PoolArg> parse_pool_args() {
    expect(Tok::LShift, "before pool arguments");
    std::vector<PoolArg> args;
    args.push_back(parse_pool_arg());
    while (at(Tok::Comma)) {
      advance();
      args.push_back(parse_pool_arg());
    }
    expect(Tok::RShift, "after pool arguments");
    return args;
  }

  ClassType parse_class_type() {
    SourcePos pos = cur().pos;
    std::string name = expect(Tok::Ident, "as class name in type").text;
    return ClassType{std::move(name), parse_pool_args(), pos};
  }

  PoolType parse_pool_type() {
    SourcePos pos = cur().pos;
    std::string name = expect(Tok::Ident, "as layout name in pool type").text;
    return PoolType{std::move(name), parse_pool_args(), pos};
  }

  PoolBound parse_bound() {
    SourcePos pos = cur().pos;
    expect(Tok::LBracket, "before pool bound");
    std::string name = expect(Tok::Ident, "as class name in bound").text;
    std::vector<PoolArg> args = parse_pool_args();
    expect(Tok::RBracket, "after pool bound");
    return PoolBound{std::move(name), std::move(args), pos};
  }

  ClassDecl parse_class() {
    ClassDecl decl;
    decl.pos = expect(Tok::KwClass, "").pos;
    decl.name = expect_name("after 'class'");
    expect(Tok::LShift, "before pool parameters");
    std::set<std::string> param_names;
    while (true) {
      PoolParam p;
      p.pos = cur().pos;
      p.name = expect_name("as pool parameter");
      if (!param_names.insert(p.name).second)
        fail_at("duplicate pool parameter '" + p.name + "'", p.pos);
      expect(Tok::Colon, "after pool parameter name");
      p.bound = parse_bound();
      decl.params.push_back(std::move(p));
      if (!at(Tok::Comma)) break;
      advance();
    }
    expect(Tok::RShift, "after pool parameters");
    expect(Tok::LBrace, "before class body");
    std::set<std::string> field_names, method_names;
    while (!at(Tok::RBrace)) {
      if (at(Tok::KwDef)) {
        MethodDecl m = parse_method();
        if (!method_names.insert(m.name).second)
          fail_at("duplicate method '" + m.name + "'", m.pos);
        decl.methods.push_back(std::move(m));
      } else if (at(Tok::Ident)) {
        FieldDecl f;
        f.pos = cur().pos;
        f.name = advance().text;
        if (!field_names.insert(f.name).second)
          fail_at("duplicate field '" + f.name + "'", f.pos);
        expect(Tok::Colon, "after field name");
        f.type = parse_class_type();
        expect(Tok::Semi, "after field declaration");
        decl.fields.push_back(std::move(f));
      } else {
        fail("expected field declaration, 'def', or '}' in class body");
      }
    }
    advance();  // }
    return decl;
  }

  MethodDecl parse_method() {
    MethodDecl m;
    m.pos = expect(Tok::KwDef, "").pos;
    m.name = expect_name("after 'def'");
    expect(Tok::LParen, "after method name");
    m.param_name = expect_name("as parameter name");
    expect(Tok::Colon, "after parameter name");
    m.param_type = parse_class_type();
    expect(Tok::RParen, "after parameter");
    expect(Tok::Colon, "before return type");
    m.return_type = parse_class_type();
    expect(Tok::LBrace, "before method body");

    std::set<std::string> binders{m.param_name};
    expect(Tok::KwPools, "at start of method body");
    while (at(Tok::Ident)) {
      LocalPoolDecl p;
      p.pos = cur().pos;
      p.name = advance().text;
      if (!binders.insert(p.name).second)
        fail_at("duplicate binder '" + p.name + "' in method", p.pos);
      expect(Tok::Colon, "after pool name");
      p.type = parse_pool_type();
      m.pools.push_back(std::move(p));
    }
    expect(Tok::KwLocals, "after pool declarations");
    while (at(Tok::Ident)) {
      LocalVarDecl v;
      v.pos = cur().pos;
      v.name = advance().text;
      if (!binders.insert(v.name).second)
        fail_at("duplicate binder '" + v.name + "' in method", v.pos);
      expect(Tok::Colon, "after local name");
      v.type = parse_class_type();
      m.locals.push_back(std::move(v));
    }
    expect(Tok::Semi, "after local declarations");
    m.body = parse_seq();
    expect(Tok::RBrace, "after method body");
    return m;
  }

  // expr (';' expr)* — folded to the right so evaluation order is the spine.
  Expr parse_seq() {
    std::vector<Expr> parts;
    parts.push_back(parse_simple());
    while (at(Tok::Semi)) {
      advance();
      parts.push_back(parse_simple());
    }
    Expr result = std::move(parts.back());
    for (size_t i = parts.size() - 1; i-- > 0;) {
      SourcePos pos = parts[i].pos;
      result = Expr(SeqExpr{box<Expr>(std::move(parts[i])), box<Expr>(std::move(result))}, pos);
    }
    return result;
  }

  Expr parse_simple() {
    SourcePos pos = cur().pos;
    if (at(Tok::KwNull)) {
      advance();
      return Expr(NullLit{}, pos);
    }
    if (at(Tok::KwThis)) {
      advance();
      return Expr(ThisRef{}, pos);
    }
    if (at(Tok::KwNew)) {
      advance();
      return Expr(NewExpr{parse_class_type()}, pos);
    }
    std::string name = expect(Tok::Ident, "at start of expression").text;
    if (at(Tok::Assign)) {
      advance();
      return Expr(AssignExpr{std::move(name), box<Expr>(parse_simple())}, pos);
    }
    if (at(Tok::Dot)) {
      advance();
      std::string member = expect(Tok::Ident, "after '.'").text;
      if (at(Tok::LParen)) {
        advance();
        std::string arg = expect(Tok::Ident, "as call argument").text;
        expect(Tok::RParen, "after call argument");
        return Expr(CallExpr{std::move(name), std::move(member), std::move(arg)}, pos);
      }
      if (at(Tok::Assign)) {
        advance();
        std::string source = expect(Tok::Ident, "as field-write source").text;
        return Expr(FieldWrite{std::move(name), std::move(member), std::move(source)}, pos);
      }
      return Expr(FieldRead{std::move(name), std::move(member)}, pos);
    }
    return Expr(VarRef{std::move(name)}, pos);
  }

  LayoutDecl parse_layout() {
    LayoutDecl decl;
    decl.pos = expect(Tok::KwLayout, "").pos;
    decl.name = expect_name("after 'layout'");
    expect(Tok::Colon, "after layout name");
    expect(Tok::LBracket, "before layout class");
    decl.class_name = expect(Tok::Ident, "as layout class").text;
    expect(Tok::RBracket, "after layout class");
    expect(Tok::Assign, "before clusters");
    decl.clusters.push_back(parse_cluster());
    while (at(Tok::Plus)) {
      advance();
      decl.clusters.push_back(parse_cluster());
    }
    expect(Tok::Semi, "after layout declaration");
    return decl;
  }

  std::vector<LayoutField> parse_cluster() {
    expect(Tok::KwRec, "at start of cluster");
    expect(Tok::LBrace, "after 'rec'");
    std::vector<LayoutField> fields;
    SourcePos p = cur().pos;
    fields.push_back({expect(Tok::Ident, "as cluster field").text, p});
    while (at(Tok::Comma)) {
      advance();
      p = cur().pos;
      fields.push_back({expect(Tok::Ident, "as cluster field").text, p});
    }
    expect(Tok::RBrace, "after cluster fields");
    return fields;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

ParseResult parse_program(std::string_view source) { return Parser(source).run(); }

}  // namespace shapes
