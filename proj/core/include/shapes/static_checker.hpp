#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "shapes/ast.hpp"
#include "shapes/diag.hpp"
#include "shapes/program_index.hpp"

namespace shapes {

// What a name stands for in a typing context: an object variable, a pool
// variable declared with a layout, or a pool parameter known only by bound.
using TypeEntry = std::variant<ClassType, PoolType, PoolBound>;

std::string to_string(const TypeEntry& entry);

// Ordered name -> entry map. Duplicate binds are an InternalError: the checker
// rejects shadowing before any context is built.
class TypingContext {
 public:
  struct Entry {
    std::string name;
    TypeEntry type;
  };

  void bind(std::string name, TypeEntry type);
  const TypeEntry* lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return lookup(name) != nullptr; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> by_name_;
};

struct CheckOptions {
  // Per-expression result types drive the runtime invariant checker; the
  // benchmark generator turns this off to avoid a few hundred MB of tables.
  bool record_node_types = true;
};

// Static semantics: declaration well-formedness plus expression typing. The
// two judgement families are mutually recursive (a bound's argument is typed
// against further bounds), so they live on one class, split across
// wellformed.cpp and typecheck.cpp.
class StaticChecker {
 public:
  StaticChecker(const Program& program, const ProgramIndex& index)
      : program_(program), idx_(index) {}

  // Whole-program pipeline: duplicate top-level names, then layouts, then
  // classes (header, fields, methods in order), at most one diagnostic per
  // declaration. Diagnostics come out sorted by source position.
  bool check_program(const CheckOptions& opts = {});

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

  // Judgement-level entry points, also used directly by tests.
  bool wf_bound(const TypingContext& ctx, const PoolBound& bound, Diagnostic* out = nullptr);
  bool wf_class_type(const TypingContext& ctx, const ClassType& type, Diagnostic* out = nullptr);
  bool wf_pool_type(const TypingContext& ctx, const PoolType& type, Diagnostic* out = nullptr);
  bool wf_context(const TypingContext& ctx, Diagnostic* out = nullptr);

  // Does `arg` satisfy `expected` in ctx? `none` satisfies any well-formed
  // bound; a variable must carry exactly the expected bound.
  bool type_of_pool(const TypingContext& ctx, const PoolArg& arg, const PoolBound& expected,
                    SourcePos use_pos, Diagnostic* out = nullptr);

  // Type synthesis; nullopt with a diagnostic on failure. A bare null literal
  // fails (it only types against an expected type, i.e. as an assignment rhs).
  std::optional<ClassType> type_of_expr(const TypingContext& ctx, const Expr& expr,
                                        Diagnostic* out = nullptr);

  bool wf_layout(const LayoutDecl& layout, Diagnostic* out = nullptr);
  bool wf_class(const ClassDecl& cls, Diagnostic* out = nullptr);
  bool check_method(const ClassDecl& cls, const MethodDecl& method, Diagnostic* out = nullptr);

  // Pool parameters by bound, in declaration order.
  TypingContext class_context(const ClassDecl& cls) const;
  // class_context + this + parameter + local pools + local variables.
  // Throws InternalError on shadowing; callers reject that first.
  TypingContext method_context_of(const ClassDecl& cls, const MethodDecl& method) const;

  // Results accumulated by successful whole-program checks.
  using MethodKey = std::pair<std::string, std::string>;  // class, method
  std::map<MethodKey, TypingContext> take_method_contexts() { return std::move(contexts_); }
  std::unordered_map<const Expr*, ClassType> take_node_types() { return std::move(node_types_); }

 private:
  bool wf_head_args(const TypingContext& ctx, const std::string& class_name,
                    const std::vector<PoolArg>& args, SourcePos pos, const std::string& shown,
                    Diagnostic* out);
  std::optional<ClassType> type_of_object_var(const TypingContext& ctx, const std::string& name,
                                              SourcePos pos, Diagnostic* out);
  std::optional<ClassType> field_type_at(const ClassType& receiver, const std::string& field,
                                         SourcePos pos, Diagnostic* out);
  bool resolve_args(const std::vector<PoolArg>& args, const std::set<std::string>& scope,
                    bool allow_none, SourcePos pos, const std::string& what, Diagnostic* out);
  void record(const Expr& e, const ClassType& t);

  const Program& program_;
  const ProgramIndex& idx_;
  std::vector<Diagnostic> diags_;
  bool record_types_ = true;
  // Bounds currently being justified; revisiting one succeeds (the bound
  // well-formedness relation is a greatest fixpoint — `none` arguments make
  // self-referential bounds legitimately circular).
  std::set<std::string> visiting_;
  std::map<MethodKey, TypingContext> contexts_;
  std::unordered_map<const Expr*, ClassType> node_types_;
};

// A program that passed the whole pipeline, with everything the runtime needs:
// the owned AST, lookup tables, per-method typing contexts, and per-expression
// static types. Addresses handed out (Expr*, decl pointers) stay stable for
// the lifetime of this object.
class CheckedProgram {
 public:
  static std::optional<CheckedProgram> build(Program&& program, std::vector<Diagnostic>& diags,
                                             const CheckOptions& opts = {});

  const Program& program() const { return *program_; }
  const ProgramIndex& index() const { return *index_; }
  const TypingContext* method_context(const std::string& cls, const std::string& method) const;
  const ClassType* node_type(const Expr* node) const;

 private:
  std::unique_ptr<Program> program_;
  std::unique_ptr<ProgramIndex> index_;
  std::map<StaticChecker::MethodKey, TypingContext> contexts_;
  std::unordered_map<const Expr*, ClassType> node_types_;
};

}  // namespace shapes
