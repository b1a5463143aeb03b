#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace shapes {

// Thrown when a caller breaks an API precondition (arity mismatches, malformed
// internal state). Never used for user-facing diagnostics.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct SourcePos {
  int line = 0;  // 1-based; 0 means "no position"
  int col = 0;
  bool operator==(const SourcePos&) const = default;
};

// A pool argument: either a pool variable name or the global-heap sentinel.
// nullopt encodes `none` and is distinct from every identifier.
using PoolArg = std::optional<std::string>;

inline const PoolArg kNone = std::nullopt;

std::string to_string(const PoolArg& arg);

// C<<a0, a1, ...>> used as the type of objects (fields, locals, params, returns).
struct ClassType {
  std::string class_name;
  std::vector<PoolArg> args;
  SourcePos pos;
  bool operator==(const ClassType& o) const {
    return class_name == o.class_name && args == o.args;
  }
};

// L<<a0, a1, ...>> — the type of a pool variable, naming a layout.
struct PoolType {
  std::string layout_name;
  std::vector<PoolArg> args;
  SourcePos pos;
  bool operator==(const PoolType& o) const {
    return layout_name == o.layout_name && args == o.args;
  }
};

// [C<<a0, a1, ...>>] — the bound of a class pool parameter.
struct PoolBound {
  std::string class_name;
  std::vector<PoolArg> args;
  SourcePos pos;
  bool operator==(const PoolBound& o) const {
    return class_name == o.class_name && args == o.args;
  }
};

// Deep-copying, heap-allocating value box; lets Expr contain Exprs.
template <typename T>
class box {
 public:
  box() = default;
  box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  box(const box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  box(box&&) noexcept = default;
  box& operator=(const box& other) {
    if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  box& operator=(box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  T* get() { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }
  std::unique_ptr<T> take() { return std::move(ptr_); }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;

struct NullLit {};
struct ThisRef {};
struct VarRef {
  std::string name;
};
struct NewExpr {
  ClassType type;
};
struct FieldRead {
  std::string receiver;
  std::string field;
};
struct FieldWrite {
  std::string receiver;
  std::string field;
  std::string source;  // rhs variable; the grammar only allows a name here
};
struct CallExpr {
  std::string receiver;
  std::string method;
  std::string arg;
};
struct AssignExpr {
  std::string target;
  box<Expr> rhs;
};
struct SeqExpr {
  box<Expr> first;
  box<Expr> second;
};

using ExprNode = std::variant<NullLit, ThisRef, VarRef, NewExpr, FieldRead, FieldWrite,
                              CallExpr, AssignExpr, SeqExpr>;

struct Expr {
  ExprNode node;
  SourcePos pos;

  Expr() = default;
  Expr(ExprNode n, SourcePos p) : node(std::move(n)), pos(p) {}
  Expr(const Expr&) = default;
  Expr(Expr&&) noexcept = default;
  Expr& operator=(const Expr&) = default;
  Expr& operator=(Expr&&) noexcept = default;
  // Iterative teardown: generated programs chain hundreds of thousands of
  // sequence nodes, which would overflow the stack with the default destructor.
  ~Expr();
};

bool expr_equal(const Expr& a, const Expr& b);  // structural; ignores positions

struct PoolParam {
  std::string name;
  PoolBound bound;
  SourcePos pos;
};

struct FieldDecl {
  std::string name;
  ClassType type;
  SourcePos pos;
};

struct LocalPoolDecl {
  std::string name;
  PoolType type;
  SourcePos pos;
};

struct LocalVarDecl {
  std::string name;
  ClassType type;
  SourcePos pos;
};

struct MethodDecl {
  std::string name;
  std::string param_name;
  ClassType param_type;
  ClassType return_type;
  std::vector<LocalPoolDecl> pools;
  std::vector<LocalVarDecl> locals;
  Expr body;
  SourcePos pos;
};

struct ClassDecl {
  std::string name;
  std::vector<PoolParam> params;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  SourcePos pos;
};

struct LayoutField {
  std::string name;
  SourcePos pos;
};

struct LayoutDecl {
  std::string name;
  std::string class_name;
  std::vector<std::vector<LayoutField>> clusters;  // nonempty, each cluster nonempty
  SourcePos pos;
};

struct Program {
  std::vector<ClassDecl> classes;
  std::vector<LayoutDecl> layouts;
};

bool program_equal(const Program& a, const Program& b);  // structural; ignores positions

// Positional renaming of pool arguments: each argument equal to formals[i]
// becomes actuals[i]; `none` and unknown names pass through untouched.
// Throws InternalError when the spans differ in length.
std::vector<PoolArg> subst_args(const std::vector<PoolArg>& args,
                                std::span<const std::string> formals,
                                std::span<const PoolArg> actuals);
ClassType subst_pool_args(const ClassType& t, std::span<const std::string> formals,
                          std::span<const PoolArg> actuals);
PoolType subst_pool_args(const PoolType& t, std::span<const std::string> formals,
                         std::span<const PoolArg> actuals);
PoolBound subst_pool_args(const PoolBound& t, std::span<const std::string> formals,
                          std::span<const PoolArg> actuals);

std::set<std::string> free_pool_vars(const ClassType& t);
std::set<std::string> free_pool_vars(const PoolType& t);
std::set<std::string> free_pool_vars(const PoolBound& t);

std::string to_string(const ClassType& t);
std::string to_string(const PoolType& t);
std::string to_string(const PoolBound& t);

}  // namespace shapes
