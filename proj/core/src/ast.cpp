#include "shapes/ast.hpp"

#include <sstream>

namespace shapes {

Expr::~Expr() {
  // Harvest child expressions breadth-first so deeply right-nested sequences
  // (the generated benchmark bodies) tear down in constant stack space.
  std::vector<std::unique_ptr<Expr>> pending;
  auto harvest = [&pending](Expr& e) {
    if (auto* a = std::get_if<AssignExpr>(&e.node)) {
      if (a->rhs) pending.push_back(a->rhs.take());
    } else if (auto* s = std::get_if<SeqExpr>(&e.node)) {
      if (s->first) pending.push_back(s->first.take());
      if (s->second) pending.push_back(s->second.take());
    }
  };
  harvest(*this);
  while (!pending.empty()) {
    std::unique_ptr<Expr> e = std::move(pending.back());
    pending.pop_back();
    harvest(*e);
    // e now has no boxed children; its destructor bottoms out immediately.
  }
}

std::string to_string(const PoolArg& arg) { return arg ? *arg : "none"; }

namespace {

std::string render_head_args(const std::string& head, const std::vector<PoolArg>& args) {
  std::ostringstream out;
  out << head << "<<";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out << ", ";
    out << to_string(args[i]);
  }
  out << ">>";
  return out.str();
}

}  // namespace

std::string to_string(const ClassType& t) { return render_head_args(t.class_name, t.args); }
std::string to_string(const PoolType& t) { return render_head_args(t.layout_name, t.args); }
std::string to_string(const PoolBound& t) {
  return "[" + render_head_args(t.class_name, t.args) + "]";
}

std::vector<PoolArg> subst_args(const std::vector<PoolArg>& args,
                                std::span<const std::string> formals,
                                std::span<const PoolArg> actuals) {
  if (formals.size() != actuals.size())
    throw InternalError("subst_args: formal/actual length mismatch");
  std::vector<PoolArg> out;
  out.reserve(args.size());
  for (const PoolArg& a : args) {
    PoolArg r = a;
    if (a) {
      for (size_t i = 0; i < formals.size(); ++i) {
        if (*a == formals[i]) {
          r = actuals[i];
          break;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

ClassType subst_pool_args(const ClassType& t, std::span<const std::string> formals,
                          std::span<const PoolArg> actuals) {
  return ClassType{t.class_name, subst_args(t.args, formals, actuals), t.pos};
}

PoolType subst_pool_args(const PoolType& t, std::span<const std::string> formals,
                         std::span<const PoolArg> actuals) {
  return PoolType{t.layout_name, subst_args(t.args, formals, actuals), t.pos};
}

PoolBound subst_pool_args(const PoolBound& t, std::span<const std::string> formals,
                          std::span<const PoolArg> actuals) {
  return PoolBound{t.class_name, subst_args(t.args, formals, actuals), t.pos};
}

namespace {

std::set<std::string> vars_of(const std::vector<PoolArg>& args) {
  std::set<std::string> out;
  for (const PoolArg& a : args)
    if (a) out.insert(*a);
  return out;
}

}  // namespace

std::set<std::string> free_pool_vars(const ClassType& t) { return vars_of(t.args); }
std::set<std::string> free_pool_vars(const PoolType& t) { return vars_of(t.args); }
std::set<std::string> free_pool_vars(const PoolBound& t) { return vars_of(t.args); }

bool expr_equal(const Expr& a, const Expr& b) {
  // Iterative over a worklist for the same stack-depth reason as the destructor.
  std::vector<std::pair<const Expr*, const Expr*>> work{{&a, &b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x->node.index() != y->node.index()) return false;
    bool same = std::visit(
        [&](const auto& xn) {
          using T = std::decay_t<decltype(xn)>;
          const T& yn = std::get<T>(y->node);
          if constexpr (std::is_same_v<T, NullLit> || std::is_same_v<T, ThisRef>) {
            return true;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            return xn.name == yn.name;
          } else if constexpr (std::is_same_v<T, NewExpr>) {
            return xn.type == yn.type;
          } else if constexpr (std::is_same_v<T, FieldRead>) {
            return xn.receiver == yn.receiver && xn.field == yn.field;
          } else if constexpr (std::is_same_v<T, FieldWrite>) {
            return xn.receiver == yn.receiver && xn.field == yn.field && xn.source == yn.source;
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            return xn.receiver == yn.receiver && xn.method == yn.method && xn.arg == yn.arg;
          } else if constexpr (std::is_same_v<T, AssignExpr>) {
            if (xn.target != yn.target) return false;
            work.emplace_back(xn.rhs.get(), yn.rhs.get());
            return true;
          } else {
            static_assert(std::is_same_v<T, SeqExpr>);
            work.emplace_back(xn.first.get(), yn.first.get());
            work.emplace_back(xn.second.get(), yn.second.get());
            return true;
          }
        },
        x->node);
    if (!same) return false;
  }
  return true;
}

namespace {

bool method_equal(const MethodDecl& a, const MethodDecl& b) {
  if (a.name != b.name || a.param_name != b.param_name || !(a.param_type == b.param_type) ||
      !(a.return_type == b.return_type))
    return false;
  if (a.pools.size() != b.pools.size() || a.locals.size() != b.locals.size()) return false;
  for (size_t i = 0; i < a.pools.size(); ++i)
    if (a.pools[i].name != b.pools[i].name || !(a.pools[i].type == b.pools[i].type)) return false;
  for (size_t i = 0; i < a.locals.size(); ++i)
    if (a.locals[i].name != b.locals[i].name || !(a.locals[i].type == b.locals[i].type))
      return false;
  return expr_equal(a.body, b.body);
}

bool class_equal(const ClassDecl& a, const ClassDecl& b) {
  if (a.name != b.name) return false;
  if (a.params.size() != b.params.size() || a.fields.size() != b.fields.size() ||
      a.methods.size() != b.methods.size())
    return false;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name || !(a.params[i].bound == b.params[i].bound))
      return false;
  for (size_t i = 0; i < a.fields.size(); ++i)
    if (a.fields[i].name != b.fields[i].name || !(a.fields[i].type == b.fields[i].type))
      return false;
  for (size_t i = 0; i < a.methods.size(); ++i)
    if (!method_equal(a.methods[i], b.methods[i])) return false;
  return true;
}

bool layout_equal(const LayoutDecl& a, const LayoutDecl& b) {
  if (a.name != b.name || a.class_name != b.class_name) return false;
  if (a.clusters.size() != b.clusters.size()) return false;
  for (size_t i = 0; i < a.clusters.size(); ++i) {
    if (a.clusters[i].size() != b.clusters[i].size()) return false;
    for (size_t j = 0; j < a.clusters[i].size(); ++j)
      if (a.clusters[i][j].name != b.clusters[i][j].name) return false;
  }
  return true;
}

}  // namespace

bool program_equal(const Program& a, const Program& b) {
  if (a.classes.size() != b.classes.size() || a.layouts.size() != b.layouts.size()) return false;
  for (size_t i = 0; i < a.classes.size(); ++i)
    if (!class_equal(a.classes[i], b.classes[i])) return false;
  for (size_t i = 0; i < a.layouts.size(); ++i)
    if (!layout_equal(a.layouts[i], b.layouts[i])) return false;
  return true;
}

}  // namespace shapes
