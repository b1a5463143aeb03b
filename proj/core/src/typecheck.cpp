#include "shapes/static_checker.hpp"

namespace shapes {

namespace {

void emit(Diagnostic* out, const char* code, std::string message, SourcePos pos) {
  if (out) *out = Diagnostic{code, std::move(message), pos};
}

}  // namespace

bool StaticChecker::type_of_pool(const TypingContext& ctx, const PoolArg& arg,
                                 const PoolBound& expected, SourcePos use_pos, Diagnostic* out) {
  if (!arg) {
    // `none` inhabits any well-formed bound: the global heap stands in for a
    // pool of any class.
    Diagnostic inner;
    if (!wf_bound(ctx, expected, &inner)) {
      emit(out, errc::ill_formed_type,
           "'none' used at ill-formed bound " + to_string(expected) + " (" + inner.message + ")",
           use_pos);
      return false;
    }
    return true;
  }
  const TypeEntry* entry = ctx.lookup(*arg);
  if (!entry) {
    emit(out, errc::unknown_name, "unknown pool variable '" + *arg + "'", use_pos);
    return false;
  }
  if (const auto* bound = std::get_if<PoolBound>(entry)) {
    if (bound->class_name == expected.class_name && bound->args == expected.args) return true;
    emit(out, errc::type_mismatch,
         "pool '" + *arg + "' has bound " + to_string(*bound) + ", expected " +
             to_string(expected),
         use_pos);
    return false;
  }
  if (const auto* pool = std::get_if<PoolType>(entry)) {
    const LayoutDecl* layout = idx_.layout_of(pool->layout_name);
    if (!layout) {
      emit(out, errc::unknown_name, "unknown layout '" + pool->layout_name + "'", use_pos);
      return false;
    }
    if (layout->class_name == expected.class_name && pool->args == expected.args) return true;
    emit(out, errc::type_mismatch,
         "pool '" + *arg + "' holds " + layout->class_name + " objects as " + to_string(*pool) +
             ", expected " + to_string(expected),
         use_pos);
    return false;
  }
  emit(out, errc::type_mismatch, "'" + *arg + "' is an object variable, not a pool", use_pos);
  return false;
}

std::optional<ClassType> StaticChecker::type_of_object_var(const TypingContext& ctx,
                                                           const std::string& name,
                                                           SourcePos pos, Diagnostic* out) {
  const TypeEntry* entry = ctx.lookup(name);
  if (!entry) {
    emit(out, errc::unknown_name, "unknown variable '" + name + "'", pos);
    return std::nullopt;
  }
  if (const auto* t = std::get_if<ClassType>(entry)) return *t;
  emit(out, errc::type_mismatch, "'" + name + "' is a pool, not an object variable", pos);
  return std::nullopt;
}

// Declared field type with the receiver's pool arguments substituted in.
std::optional<ClassType> StaticChecker::field_type_at(const ClassType& receiver,
                                                      const std::string& field, SourcePos pos,
                                                      Diagnostic* out) {
  const std::vector<std::string>* params = idx_.pool_params_of(receiver.class_name);
  if (!params) {
    emit(out, errc::unknown_name, "unknown class '" + receiver.class_name + "'", pos);
    return std::nullopt;
  }
  const ClassType* ft = idx_.field_type_of(receiver.class_name, field);
  if (!ft) {
    emit(out, errc::unknown_name,
         "class '" + receiver.class_name + "' has no field '" + field + "'", pos);
    return std::nullopt;
  }
  return subst_pool_args(*ft, *params, receiver.args);
}

void StaticChecker::record(const Expr& e, const ClassType& t) {
  if (record_types_) node_types_.emplace(&e, t);
}

std::optional<ClassType> StaticChecker::type_of_expr(const TypingContext& ctx, const Expr& expr,
                                                     Diagnostic* out) {
  // Sequences are typed along the spine iteratively; generated programs chain
  // enough of them to exhaust the stack otherwise.
  std::vector<const Expr*> spine;
  const Expr* e = &expr;
  while (const auto* seq = std::get_if<SeqExpr>(&e->node)) {
    spine.push_back(e);
    Diagnostic d;
    if (!type_of_expr(ctx, *seq->first, &d)) {
      if (out) *out = std::move(d);
      return std::nullopt;
    }
    e = seq->second.get();
  }

  std::optional<ClassType> result = std::visit(
      [&](const auto& n) -> std::optional<ClassType> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NullLit>) {
          emit(out, errc::null_needs_type,
               "null here has no type of its own; it is only allowed as the right-hand side "
               "of an assignment",
               e->pos);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ThisRef>) {
          return type_of_object_var(ctx, "this", e->pos, out);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return type_of_object_var(ctx, n.name, e->pos, out);
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          if (!wf_class_type(ctx, n.type, out)) return std::nullopt;
          return n.type;
        } else if constexpr (std::is_same_v<T, FieldRead>) {
          auto recv = type_of_object_var(ctx, n.receiver, e->pos, out);
          if (!recv) return std::nullopt;
          return field_type_at(*recv, n.field, e->pos, out);
        } else if constexpr (std::is_same_v<T, FieldWrite>) {
          auto recv = type_of_object_var(ctx, n.receiver, e->pos, out);
          if (!recv) return std::nullopt;
          auto ft = field_type_at(*recv, n.field, e->pos, out);
          if (!ft) return std::nullopt;
          auto src = type_of_object_var(ctx, n.source, e->pos, out);
          if (!src) return std::nullopt;
          if (!(*src == *ft)) {
            emit(out, errc::type_mismatch,
                 "field '" + n.field + "' of " + to_string(*recv) + " has type " +
                     to_string(*ft) + " but '" + n.source + "' has type " + to_string(*src),
                 e->pos);
            return std::nullopt;
          }
          return ft;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          auto recv = type_of_object_var(ctx, n.receiver, e->pos, out);
          if (!recv) return std::nullopt;
          const std::vector<std::string>* params = idx_.pool_params_of(recv->class_name);
          if (!params) {
            emit(out, errc::unknown_name, "unknown class '" + recv->class_name + "'", e->pos);
            return std::nullopt;
          }
          const MethodDecl* m = idx_.method_of(recv->class_name, n.method);
          if (!m) {
            emit(out, errc::unknown_name,
                 "class '" + recv->class_name + "' has no method '" + n.method + "'", e->pos);
            return std::nullopt;
          }
          ClassType want = subst_pool_args(m->param_type, *params, recv->args);
          auto arg = type_of_object_var(ctx, n.arg, e->pos, out);
          if (!arg) return std::nullopt;
          if (!(*arg == want)) {
            emit(out, errc::type_mismatch,
                 "method '" + n.method + "' of " + to_string(*recv) + " takes " +
                     to_string(want) + " but '" + n.arg + "' has type " + to_string(*arg),
                 e->pos);
            return std::nullopt;
          }
          return subst_pool_args(m->return_type, *params, recv->args);
        } else if constexpr (std::is_same_v<T, AssignExpr>) {
          const TypeEntry* entry = ctx.lookup(n.target);
          if (!entry) {
            emit(out, errc::unknown_name, "unknown variable '" + n.target + "'", e->pos);
            return std::nullopt;
          }
          const auto* tt = std::get_if<ClassType>(entry);
          if (!tt) {
            emit(out, errc::type_mismatch, "cannot assign to pool '" + n.target + "'", e->pos);
            return std::nullopt;
          }
          // The one checking position: null takes the target's type.
          if (std::holds_alternative<NullLit>(n.rhs->node)) {
            record(*n.rhs, *tt);
            return *tt;
          }
          auto rhs = type_of_expr(ctx, *n.rhs, out);
          if (!rhs) return std::nullopt;
          if (!(*rhs == *tt)) {
            emit(out, errc::type_mismatch,
                 "cannot assign " + to_string(*rhs) + " to '" + n.target + "' of type " +
                     to_string(*tt),
                 e->pos);
            return std::nullopt;
          }
          return rhs;
        } else {
          static_assert(std::is_same_v<T, SeqExpr>);
          throw InternalError("sequence handled on the spine");
        }
      },
      e->node);

  if (!result) return std::nullopt;
  record(*e, *result);
  for (const Expr* s : spine) record(*s, *result);
  return result;
}

bool StaticChecker::check_method(const ClassDecl& cls, const MethodDecl& method,
                                 Diagnostic* out) {
  std::set<std::string> params;
  for (const PoolParam& p : cls.params) params.insert(p.name);

  // The runtime frame is flat: receiver pool parameters and method binders
  // share it, so shadowing a pool parameter would corrupt the frame.
  auto no_shadow = [&](const std::string& name, SourcePos pos) {
    if (params.count(name)) {
      emit(out, errc::malformed_class,
           "'" + name + "' shadows a pool parameter of '" + cls.name + "'", pos);
      return false;
    }
    return true;
  };
  if (!no_shadow(method.param_name, method.pos)) return false;
  for (const LocalPoolDecl& p : method.pools)
    if (!no_shadow(p.name, p.pos)) return false;
  for (const LocalVarDecl& v : method.locals)
    if (!no_shadow(v.name, v.pos)) return false;

  if (!resolve_args(method.param_type.args, params, /*allow_none=*/true, method.param_type.pos,
                    "the parameter type of method '" + method.name + "'", out))
    return false;
  if (!resolve_args(method.return_type.args, params, /*allow_none=*/true, method.return_type.pos,
                    "the return type of method '" + method.name + "'", out))
    return false;

  std::set<std::string> local_scope = params;
  for (const LocalPoolDecl& p : method.pools) local_scope.insert(p.name);
  for (const LocalPoolDecl& p : method.pools) {
    if (!resolve_args(p.type.args, local_scope, /*allow_none=*/false, p.type.pos,
                      "the pool declaration of '" + p.name + "'", out))
      return false;
  }
  for (const LocalVarDecl& v : method.locals) {
    if (!resolve_args(v.type.args, local_scope, /*allow_none=*/true, v.type.pos,
                      "the type of local '" + v.name + "'", out))
      return false;
  }

  TypingContext ctx = method_context_of(cls, method);
  if (!wf_context(ctx, out)) return false;
  if (!wf_class_type(ctx, method.return_type, out)) return false;

  std::optional<ClassType> body = type_of_expr(ctx, method.body, out);
  if (!body) return false;
  if (!(*body == method.return_type)) {
    // Point at the result expression (end of the sequence spine).
    const Expr* last = &method.body;
    while (const auto* seq = std::get_if<SeqExpr>(&last->node)) last = seq->second.get();
    emit(out, errc::type_mismatch,
         "method '" + method.name + "' returns " + to_string(method.return_type) +
             " but its body has type " + to_string(*body),
         last->pos);
    return false;
  }
  contexts_.emplace(MethodKey{cls.name, method.name}, std::move(ctx));
  return true;
}

}  // namespace shapes
