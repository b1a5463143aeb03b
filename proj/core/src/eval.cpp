#include "shapes/eval.hpp"

#include <pthread.h>

#include <algorithm>
#include <functional>
#include <ostream>

namespace shapes {

const char* rule_name(EvalRule rule) {
  switch (rule) {
    case EvalRule::Value: return "value";
    case EvalRule::Variable: return "variable";
    case EvalRule::Assignment: return "assignment";
    case EvalRule::NewObject: return "new-object";
    case EvalRule::NewPooledObject: return "new-pooled-object";
    case EvalRule::ObjectRead: return "object-read";
    case EvalRule::PooledObjectRead: return "pooled-object-read";
    case EvalRule::ObjectWrite: return "object-write";
    case EvalRule::PooledObjectWrite: return "pooled-object-write";
    case EvalRule::MethodCall: return "method-call";
    case EvalRule::Sequence: return "sequence";
  }
  return "?";
}

void TraceObserver::on_result(const Expr&, EvalRule rule, const Value& v, const Heap&,
                              const Frame&, const TypingContext*) {
  out_ << rule_name(rule) << " => " << render(v) << "\n";
}

namespace {

std::string at(SourcePos pos) {
  return " (line " + std::to_string(pos.line) + ", col " + std::to_string(pos.col) + ")";
}

[[noreturn]] void null_deref(const std::string& what, SourcePos pos) {
  throw RuntimeError(errc::null_deref, "null dereference: " + what + at(pos));
}

}  // namespace

Evaluator::Evaluator(const CheckedProgram& program, Heap& heap, EvalOptions options)
    : prog_(program), heap_(heap), opts_(options) {}

const Value& Evaluator::value_slot(const Frame& frame, const std::string& name,
                                   SourcePos pos) const {
  const Value* v = frame.value(name);
  if (!v) throw StuckError("unbound object variable '" + name + "'" + at(pos));
  return *v;
}

std::vector<PoolAddr> Evaluator::resolve_pool_args(const std::vector<PoolArg>& args,
                                                   const Frame& frame, SourcePos pos) const {
  std::vector<PoolAddr> out;
  out.reserve(args.size());
  for (const PoolArg& a : args) {
    if (!a) {
      out.push_back(std::nullopt);
      continue;
    }
    const PoolAddr* p = frame.pool_addr(*a);
    if (!p) throw StuckError("unbound pool variable '" + *a + "'" + at(pos));
    out.push_back(*p);
  }
  return out;
}

Value Evaluator::eval(const Expr& expr, Frame& frame, const TypingContext* ctx) {
  if (std::holds_alternative<SeqExpr>(expr.node)) {
    // Iterate the statement spine; recursion is reserved for the (shallow)
    // statements themselves. Every spine node yields the final value, so the
    // observer sees them unwind innermost-first once the last statement ran.
    std::vector<const Expr*> spine;
    const Expr* e = &expr;
    while (const auto* seq = std::get_if<SeqExpr>(&e->node)) {
      if (opts_.observer) opts_.observer->on_enter(*e);
      spine.push_back(e);
      eval(*seq->first, frame, ctx);
      e = seq->second.get();
    }
    Value v = eval(*e, frame, ctx);
    if (opts_.observer)
      for (size_t i = spine.size(); i-- > 0;)
        opts_.observer->on_result(*spine[i], EvalRule::Sequence, v, heap_, frame, ctx);
    return v;
  }
  if (opts_.observer) opts_.observer->on_enter(expr);
  auto [v, rule] = eval_simple_with_rule(expr, frame, ctx);
  if (opts_.observer) opts_.observer->on_result(expr, rule, v, heap_, frame, ctx);
  return v;
}

std::pair<Value, EvalRule> Evaluator::eval_simple_with_rule(const Expr& expr, Frame& frame,
                                                            const TypingContext* ctx) {
  const SourcePos pos = expr.pos;
  return std::visit(
      [&](const auto& n) -> std::pair<Value, EvalRule> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NullLit>) {
          return {Value{}, EvalRule::Value};
        } else if constexpr (std::is_same_v<T, ThisRef>) {
          return {value_slot(frame, "this", pos), EvalRule::Variable};
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return {value_slot(frame, n.name, pos), EvalRule::Variable};
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          std::vector<PoolAddr> params = resolve_pool_args(n.type.args, frame, pos);
          if (params.empty()) throw StuckError("class type without pool arguments" + at(pos));
          if (!params[0]) {
            const std::vector<std::string>* fields = prog_.index().fields_of(n.type.class_name);
            if (!fields) throw StuckError("unknown class '" + n.type.class_name + "'" + at(pos));
            return {Value{heap_.alloc_object(n.type.class_name, std::move(params),
                                             fields->size())},
                    EvalRule::NewObject};
          }
          PoolId pid = *params[0];
          const PoolCell& cell = heap_.pool(pid);
          const LayoutDecl* layout = prog_.index().layout_of(cell.layout_name);
          if (!layout || layout->class_name != n.type.class_name)
            throw StuckError("pool holds " + cell.layout_name + " records, cannot allocate " +
                             n.type.class_name + at(pos));
          uint32_t index = heap_.pool_append(pid);
          return {Value{Location{pid, index}}, EvalRule::NewPooledObject};
        } else if constexpr (std::is_same_v<T, FieldRead>) {
          const Value& recv = value_slot(frame, n.receiver, pos);
          if (is_null(recv)) null_deref("reading field '" + n.field + "' of null '" + n.receiver + "'", pos);
          if (const auto* obj = std::get_if<ObjectAddr>(&recv)) {
            auto off = prog_.index().field_offset_class(heap_.object(*obj).class_name, n.field);
            if (!off) throw StuckError("no field '" + n.field + "'" + at(pos));
            return {heap_.read_field(*obj, *off), EvalRule::ObjectRead};
          }
          const Location& loc = std::get<Location>(recv);
          auto off = prog_.index().field_offset_layout(heap_.pool(loc.pool).layout_name, n.field);
          if (!off) throw StuckError("no field '" + n.field + "' in layout" + at(pos));
          return {heap_.read_slot(loc, *off), EvalRule::PooledObjectRead};
        } else if constexpr (std::is_same_v<T, FieldWrite>) {
          const Value& recv = value_slot(frame, n.receiver, pos);
          if (is_null(recv)) null_deref("writing field '" + n.field + "' of null '" + n.receiver + "'", pos);
          Value v = value_slot(frame, n.source, pos);
          if (const auto* obj = std::get_if<ObjectAddr>(&recv)) {
            auto off = prog_.index().field_offset_class(heap_.object(*obj).class_name, n.field);
            if (!off) throw StuckError("no field '" + n.field + "'" + at(pos));
            heap_.write_field(*obj, *off, v);
            return {v, EvalRule::ObjectWrite};
          }
          const Location& loc = std::get<Location>(recv);
          auto off = prog_.index().field_offset_layout(heap_.pool(loc.pool).layout_name, n.field);
          if (!off) throw StuckError("no field '" + n.field + "' in layout" + at(pos));
          heap_.write_slot(loc, *off, v);
          return {v, EvalRule::PooledObjectWrite};
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          return {do_call(n, frame, pos), EvalRule::MethodCall};
        } else if constexpr (std::is_same_v<T, AssignExpr>) {
          Value v = eval(*n.rhs, frame, ctx);
          frame.set_value(n.target, v);
          return {v, EvalRule::Assignment};
        } else {
          static_assert(std::is_same_v<T, SeqExpr>);
          throw InternalError("sequence handled by eval()");
        }
      },
      expr.node);
}

Value Evaluator::do_call(const CallExpr& call, Frame& caller, SourcePos pos) {
  const Value& recv = value_slot(caller, call.receiver, pos);
  if (is_null(recv))
    null_deref("calling method '" + call.method + "' on null '" + call.receiver + "'", pos);

  // Receiver class and pool parameters, uniformly for both allocation kinds.
  std::string class_name;
  const std::vector<PoolAddr>* recv_params = nullptr;
  if (const auto* obj = std::get_if<ObjectAddr>(&recv)) {
    const ObjectCell& cell = heap_.object(*obj);
    class_name = cell.class_name;
    recv_params = &cell.params;
  } else {
    const PoolCell& cell = heap_.pool(std::get<Location>(recv).pool);
    const LayoutDecl* layout = prog_.index().layout_of(cell.layout_name);
    if (!layout) throw StuckError("pool with unknown layout '" + cell.layout_name + "'" + at(pos));
    class_name = layout->class_name;
    recv_params = &cell.params;
  }

  const ClassDecl* cls = prog_.index().class_of(class_name);
  const MethodDecl* method = prog_.index().method_of(class_name, call.method);
  if (!cls || !method)
    throw StuckError("no method '" + call.method + "' on '" + class_name + "'" + at(pos));
  if (cls->params.size() != recv_params->size())
    throw StuckError("pool parameter arity mismatch on '" + class_name + "'" + at(pos));

  if (depth_ >= opts_.max_depth)
    throw RuntimeError(errc::depth_exceeded,
                       "call depth exceeded " + std::to_string(opts_.max_depth) + at(pos));

  Frame callee;
  callee.bind_value("this", recv);
  callee.bind_value(method->param_name, value_slot(caller, call.arg, pos));
  for (size_t i = 0; i < cls->params.size(); ++i)
    callee.bind_pool(cls->params[i].name, (*recv_params)[i]);

  ++depth_;
  Value result = run_method(*cls, *method, std::move(callee));
  --depth_;
  return result;
}

Value Evaluator::run_method(const ClassDecl& cls, const MethodDecl& method, Frame frame) {
  // Reserve every pool of the block first: their types may reference each
  // other in any order, including cyclically.
  for (const LocalPoolDecl& p : method.pools) frame.bind_pool(p.name, heap_.reserve_pool());
  for (const LocalVarDecl& v : method.locals) frame.bind_value(v.name, Value{});
  for (const LocalPoolDecl& p : method.pools) {
    const LayoutDecl* layout = prog_.index().layout_of(p.type.layout_name);
    if (!layout) throw StuckError("unknown layout '" + p.type.layout_name + "'" + at(p.pos));
    std::vector<size_t> widths;
    widths.reserve(layout->clusters.size());
    for (const auto& cluster : layout->clusters) widths.push_back(cluster.size());
    heap_.init_pool(**frame.pool_addr(p.name), p.type.layout_name,
                    resolve_pool_args(p.type.args, frame, p.pos), widths);
  }
  const TypingContext* ctx = prog_.method_context(cls.name, method.name);
  return eval(method.body, frame, ctx);
}

namespace {

// Deep call chains cost several native frames per language-level call; the
// default thread stack cannot hold max_depth of them.
void* trampoline(void* fn) {
  (*static_cast<std::function<void()>*>(fn))();
  return nullptr;
}

void run_on_big_stack(size_t stack_bytes, std::function<void()> fn) {
  pthread_attr_t attr;
  if (pthread_attr_init(&attr) != 0) throw InternalError("pthread_attr_init failed");
  pthread_attr_setstacksize(&attr, stack_bytes);
  pthread_t thread;
  if (pthread_create(&thread, &attr, trampoline, &fn) != 0) {
    pthread_attr_destroy(&attr);
    throw InternalError("cannot spawn evaluation thread");
  }
  pthread_join(thread, nullptr);
  pthread_attr_destroy(&attr);
}

}  // namespace

Value Evaluator::run_entry(const std::string& cls_name, const std::string& method_name) {
  size_t depth = opts_.max_depth > 0 ? size_t(opts_.max_depth) : 0;
  size_t stack = std::clamp<size_t>((size_t{64} << 20) + depth * 8192,
                                    size_t{64} << 20, size_t{1} << 30);
  Value out;
  std::exception_ptr failure;
  run_on_big_stack(stack, [&] {
    try {
      out = run_entry_on_this_stack(cls_name, method_name);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return out;
}

Value Evaluator::run_entry_on_this_stack(const std::string& cls_name,
                                         const std::string& method_name) {
  const ClassDecl* cls = prog_.index().class_of(cls_name);
  if (!cls) throw InternalError("entry class '" + cls_name + "' not found");
  const MethodDecl* method = prog_.index().method_of(cls_name, method_name);
  if (!method) throw InternalError("entry method '" + method_name + "' not found");

  std::vector<PoolAddr> params(cls->params.size(), std::nullopt);
  ObjectAddr receiver = heap_.alloc_object(cls_name, params, cls->fields.size());

  Frame frame;
  frame.bind_value("this", Value{receiver});
  frame.bind_value(method->param_name, Value{});
  for (size_t i = 0; i < cls->params.size(); ++i)
    frame.bind_pool(cls->params[i].name, std::nullopt);

  depth_ = 1;
  return run_method(*cls, *method, std::move(frame));
}

}  // namespace shapes
