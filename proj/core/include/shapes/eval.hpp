#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shapes/heap.hpp"
#include "shapes/static_checker.hpp"

namespace shapes {

// User-visible runtime failures (null dereference, call-depth overflow).
struct RuntimeError : std::runtime_error {
  std::string code;  // R001 / R002
  RuntimeError(std::string c, const std::string& message)
      : std::runtime_error(message), code(std::move(c)) {}
};

namespace errc {
inline constexpr const char* null_deref = "R001";
inline constexpr const char* depth_exceeded = "R002";
}  // namespace errc

// Evaluation reached a state the type system is supposed to preclude.
struct StuckError : InternalError {
  using InternalError::InternalError;
};

enum class EvalRule {
  Value,
  Variable,
  Assignment,
  NewObject,
  NewPooledObject,
  ObjectRead,
  PooledObjectRead,
  ObjectWrite,
  PooledObjectWrite,
  MethodCall,
  Sequence,
};

const char* rule_name(EvalRule rule);

inline bool is_field_read(EvalRule rule) {
  return rule == EvalRule::ObjectRead || rule == EvalRule::PooledObjectRead;
}

// Called around every expression. `ctx` is the typing context of the method
// the expression executes in (null only for observers installed without a
// checked program, which does not happen through the public entry points).
class EvalObserver {
 public:
  virtual ~EvalObserver() = default;
  virtual void on_enter(const Expr&) {}
  virtual void on_result(const Expr&, EvalRule, const Value&, const Heap&, const Frame&,
                         const TypingContext* ctx) {
    (void)ctx;
  }
};

// Collects (rule, value) per evaluated expression; tests and the layout
// comparison harness read the field-read subsequence off it.
class RecordingObserver : public EvalObserver {
 public:
  struct Event {
    EvalRule rule;
    Value value;
  };
  void on_result(const Expr&, EvalRule rule, const Value& v, const Heap&, const Frame&,
                 const TypingContext*) override {
    events.push_back({rule, v});
  }
  std::vector<Event> events;
};

// Streams one line per evaluated expression: "<rule> => <value>".
class TraceObserver : public EvalObserver {
 public:
  explicit TraceObserver(std::ostream& out) : out_(out) {}
  void on_result(const Expr&, EvalRule rule, const Value& v, const Heap&, const Frame&,
                 const TypingContext*) override;

 private:
  std::ostream& out_;
};

// Forwards to several observers in order.
class FanoutObserver : public EvalObserver {
 public:
  void add(EvalObserver* observer) { observers_.push_back(observer); }
  void on_enter(const Expr& e) override {
    for (EvalObserver* o : observers_) o->on_enter(e);
  }
  void on_result(const Expr& e, EvalRule rule, const Value& v, const Heap& heap,
                 const Frame& frame, const TypingContext* ctx) override {
    for (EvalObserver* o : observers_) o->on_result(e, rule, v, heap, frame, ctx);
  }

 private:
  std::vector<EvalObserver*> observers_;
};

struct EvalOptions {
  int max_depth = 10000;
  EvalObserver* observer = nullptr;
};

class Evaluator {
 public:
  Evaluator(const CheckedProgram& program, Heap& heap, EvalOptions options = {});

  // Entry protocol: allocate a receiver of `cls` with every pool parameter
  // `none`, bind the method parameter to null, run the body. The receiver is
  // always obj@0 of the fresh heap.
  Value run_entry(const std::string& cls, const std::string& method);

 private:
  Value run_entry_on_this_stack(const std::string& cls, const std::string& method);
  Value eval(const Expr& expr, Frame& frame, const TypingContext* ctx);
  std::pair<Value, EvalRule> eval_simple_with_rule(const Expr& expr, Frame& frame,
                                                   const TypingContext* ctx);
  Value do_call(const CallExpr& call, Frame& caller, SourcePos pos);
  Value run_method(const ClassDecl& cls, const MethodDecl& method, Frame frame);
  std::vector<PoolAddr> resolve_pool_args(const std::vector<PoolArg>& args, const Frame& frame,
                                          SourcePos pos) const;
  const Value& value_slot(const Frame& frame, const std::string& name, SourcePos pos) const;

  const CheckedProgram& prog_;
  Heap& heap_;
  EvalOptions opts_;
  int depth_ = 0;
};

}  // namespace shapes
