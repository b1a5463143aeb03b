#include <algorithm>

#include "shapes/static_checker.hpp"

namespace shapes {

std::string to_string(const TypeEntry& entry) {
  return std::visit([](const auto& t) { return to_string(t); }, entry);
}

void TypingContext::bind(std::string name, TypeEntry type) {
  if (by_name_.count(name))
    throw InternalError("TypingContext: duplicate binding for '" + name + "'");
  by_name_.emplace(name, entries_.size());
  entries_.push_back(Entry{std::move(name), std::move(type)});
}

const TypeEntry* TypingContext::lookup(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &entries_[it->second].type;
}

namespace {

void emit(Diagnostic* out, const char* code, std::string message, SourcePos pos) {
  if (out) *out = Diagnostic{code, std::move(message), pos};
}

}  // namespace

// Shared premise of bound / class-type / pool-type well-formedness: the head
// class exists, arity matches, and every argument satisfies the corresponding
// substituted bound.
bool StaticChecker::wf_head_args(const TypingContext& ctx, const std::string& class_name,
                                 const std::vector<PoolArg>& args, SourcePos pos,
                                 const std::string& shown, Diagnostic* out) {
  const ClassDecl* cls = idx_.class_of(class_name);
  if (!cls) {
    emit(out, errc::unknown_name, "unknown class '" + class_name + "'", pos);
    return false;
  }
  const std::vector<std::string>& params = *idx_.pool_params_of(class_name);
  if (args.size() != params.size()) {
    emit(out, errc::ill_formed_type,
         shown + ": class '" + class_name + "' takes " + std::to_string(params.size()) +
             " pool argument(s), got " + std::to_string(args.size()),
         pos);
    return false;
  }
  for (size_t i = 0; i < args.size(); ++i) {
    PoolBound expected = subst_pool_args(*idx_.bound_of(class_name, params[i]), params, args);
    Diagnostic inner;
    if (!type_of_pool(ctx, args[i], expected, pos, &inner)) {
      emit(out, errc::ill_formed_type,
           shown + ": pool argument '" + to_string(args[i]) + "' does not satisfy " +
               to_string(expected) + " (" + inner.message + ")",
           pos);
      return false;
    }
  }
  return true;
}

bool StaticChecker::wf_bound(const TypingContext& ctx, const PoolBound& bound, Diagnostic* out) {
  std::string key = to_string(bound);
  if (visiting_.count(key)) return true;  // coinductive: assume the goal in progress
  visiting_.insert(key);
  bool ok = wf_head_args(ctx, bound.class_name, bound.args, bound.pos, to_string(bound), out);
  visiting_.erase(key);
  return ok;
}

bool StaticChecker::wf_class_type(const TypingContext& ctx, const ClassType& type,
                                  Diagnostic* out) {
  return wf_head_args(ctx, type.class_name, type.args, type.pos, to_string(type), out);
}

bool StaticChecker::wf_pool_type(const TypingContext& ctx, const PoolType& type, Diagnostic* out) {
  const LayoutDecl* layout = idx_.layout_of(type.layout_name);
  if (!layout) {
    emit(out, errc::unknown_name, "unknown layout '" + type.layout_name + "'", type.pos);
    return false;
  }
  return wf_head_args(ctx, layout->class_name, type.args, type.pos, to_string(type), out);
}

bool StaticChecker::wf_context(const TypingContext& ctx, Diagnostic* out) {
  for (const TypingContext::Entry& entry : ctx.entries()) {
    // A pool variable's type must put the variable itself first: the first
    // argument is the pool an object lives in, and a pool always contains
    // itself as its own first parameter.
    const std::vector<PoolArg>* args = nullptr;
    SourcePos pos{};
    if (const auto* bound = std::get_if<PoolBound>(&entry.type)) {
      args = &bound->args;
      pos = bound->pos;
    } else if (const auto* pool = std::get_if<PoolType>(&entry.type)) {
      args = &pool->args;
      pos = pool->pos;
    }
    if (args) {
      if (args->empty() || !(*args)[0] || *(*args)[0] != entry.name) {
        emit(out, errc::ill_formed_type,
             "first pool argument of " + to_string(entry.type) + " must be '" + entry.name +
                 "' itself",
             pos);
        return false;
      }
    }
    bool ok = std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ClassType>) return wf_class_type(ctx, t, out);
          else if constexpr (std::is_same_v<T, PoolType>) return wf_pool_type(ctx, t, out);
          else return wf_bound(ctx, t, out);
        },
        entry.type);
    if (!ok) return false;
  }
  return true;
}

bool StaticChecker::wf_layout(const LayoutDecl& layout, Diagnostic* out) {
  const ClassDecl* cls = idx_.class_of(layout.class_name);
  if (!cls) {
    emit(out, errc::unknown_name, "unknown class '" + layout.class_name + "' in layout '" +
             layout.name + "'",
         layout.pos);
    return false;
  }
  const std::vector<std::string>& fields = *idx_.fields_of(layout.class_name);
  std::set<std::string> seen;
  for (const auto& cluster : layout.clusters) {
    for (const LayoutField& f : cluster) {
      if (std::find(fields.begin(), fields.end(), f.name) == fields.end()) {
        emit(out, errc::unknown_name,
             "class '" + layout.class_name + "' has no field '" + f.name + "'", f.pos);
        return false;
      }
      if (!seen.insert(f.name).second) {
        emit(out, errc::layout_repeated_field,
             "field '" + f.name + "' appears more than once in layout '" + layout.name + "'",
             f.pos);
        return false;
      }
    }
  }
  for (const std::string& f : fields) {
    if (!seen.count(f)) {
      emit(out, errc::layout_missing_field,
           "layout '" + layout.name + "' does not cover field '" + f + "' of class '" +
               layout.class_name + "'",
           layout.pos);
      return false;
    }
  }
  return true;
}

TypingContext StaticChecker::class_context(const ClassDecl& cls) const {
  TypingContext ctx;
  for (const PoolParam& p : cls.params) ctx.bind(p.name, p.bound);
  return ctx;
}

TypingContext StaticChecker::method_context_of(const ClassDecl& cls,
                                               const MethodDecl& method) const {
  TypingContext ctx = class_context(cls);
  ClassType self{cls.name, {}, cls.pos};
  for (const PoolParam& p : cls.params) self.args.emplace_back(p.name);
  ctx.bind("this", std::move(self));
  ctx.bind(method.param_name, method.param_type);
  for (const LocalPoolDecl& p : method.pools) ctx.bind(p.name, p.type);
  for (const LocalVarDecl& v : method.locals) ctx.bind(v.name, v.type);
  return ctx;
}

// Pure name-resolution for pool arguments; runs before any type-level check so
// scoping mistakes surface as malformed-declaration errors, not type errors.
bool StaticChecker::resolve_args(const std::vector<PoolArg>& args,
                                 const std::set<std::string>& scope, bool allow_none,
                                 SourcePos pos, const std::string& what, Diagnostic* out) {
  for (const PoolArg& a : args) {
    if (!a) {
      if (!allow_none) {
        emit(out, errc::malformed_class, "'none' cannot be used as a pool argument in " + what,
             pos);
        return false;
      }
      continue;
    }
    if (!scope.count(*a)) {
      emit(out, errc::malformed_class, "unknown pool '" + *a + "' in " + what, pos);
      return false;
    }
  }
  return true;
}

bool StaticChecker::wf_class(const ClassDecl& cls, Diagnostic* out) {
  // Header shape: the first parameter is bounded by the class itself applied
  // to the full parameter list, verbatim.
  const PoolBound& first = cls.params[0].bound;
  bool self_bound = first.class_name == cls.name && first.args.size() == cls.params.size();
  if (self_bound) {
    for (size_t i = 0; i < cls.params.size(); ++i)
      if (!first.args[i] || *first.args[i] != cls.params[i].name) self_bound = false;
  }
  if (!self_bound) {
    std::string want = cls.name + "<<";
    for (size_t i = 0; i < cls.params.size(); ++i)
      want += (i ? ", " : "") + cls.params[i].name;
    emit(out, errc::malformed_class,
         "first pool parameter of '" + cls.name + "' must be bounded by [" + want + ">>]",
         first.pos);
    return false;
  }

  std::set<std::string> params;
  for (const PoolParam& p : cls.params) params.insert(p.name);
  for (const PoolParam& p : cls.params) {
    if (!resolve_args(p.bound.args, params, /*allow_none=*/false, p.bound.pos,
                      "the bound of pool parameter '" + p.name + "'", out))
      return false;
  }

  TypingContext ctx = class_context(cls);
  if (!wf_context(ctx, out)) return false;

  for (const FieldDecl& f : cls.fields) {
    if (!resolve_args(f.type.args, params, /*allow_none=*/true, f.type.pos,
                      "the type of field '" + f.name + "'", out))
      return false;
    if (!wf_class_type(ctx, f.type, out)) return false;
  }

  for (const MethodDecl& m : cls.methods)
    if (!check_method(cls, m, out)) return false;
  return true;
}

bool StaticChecker::check_program(const CheckOptions& opts) {
  record_types_ = opts.record_node_types;
  diags_.clear();

  std::set<std::string> class_names, layout_names;
  for (const ClassDecl& c : program_.classes)
    if (!class_names.insert(c.name).second)
      diags_.push_back({errc::duplicate_name, "duplicate class '" + c.name + "'", c.pos});
  for (const LayoutDecl& l : program_.layouts)
    if (!layout_names.insert(l.name).second)
      diags_.push_back({errc::duplicate_name, "duplicate layout '" + l.name + "'", l.pos});

  for (const LayoutDecl& l : program_.layouts) {
    Diagnostic d;
    if (!wf_layout(l, &d)) diags_.push_back(std::move(d));
  }
  for (const ClassDecl& c : program_.classes) {
    Diagnostic d;
    if (!wf_class(c, &d)) diags_.push_back(std::move(d));
  }
  sort_diagnostics(diags_);
  return diags_.empty();
}

std::optional<CheckedProgram> CheckedProgram::build(Program&& program,
                                                    std::vector<Diagnostic>& diags,
                                                    const CheckOptions& opts) {
  CheckedProgram cp;
  cp.program_ = std::make_unique<Program>(std::move(program));
  cp.index_ = std::make_unique<ProgramIndex>(ProgramIndex::build(*cp.program_));
  StaticChecker checker(*cp.program_, *cp.index_);
  bool ok = checker.check_program(opts);
  diags = checker.diagnostics();
  if (!ok) return std::nullopt;
  cp.contexts_ = checker.take_method_contexts();
  cp.node_types_ = checker.take_node_types();
  return cp;
}

const TypingContext* CheckedProgram::method_context(const std::string& cls,
                                                    const std::string& method) const {
  auto it = contexts_.find({cls, method});
  return it == contexts_.end() ? nullptr : &it->second;
}

const ClassType* CheckedProgram::node_type(const Expr* node) const {
  auto it = node_types_.find(node);
  return it == node_types_.end() ? nullptr : &it->second;
}

}  // namespace shapes
