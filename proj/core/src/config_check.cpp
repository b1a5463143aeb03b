#include "shapes/config_check.hpp"

#include <deque>
#include <map>

namespace shapes {

namespace {

std::vector<PoolAddr> resolve_args(const std::vector<PoolArg>& args, const Frame& frame) {
  std::vector<PoolAddr> out;
  out.reserve(args.size());
  for (const PoolArg& a : args) {
    if (!a) {
      out.push_back(std::nullopt);
      continue;
    }
    const PoolAddr* p = frame.pool_addr(*a);
    if (!p) throw StuckError("pool variable '" + *a + "' missing from frame");
    out.push_back(*p);
  }
  return out;
}

// Substitute a class's formal params with runtime pool addresses in a field
// type: named arguments index into the receiver's parameter vector.
RtClass field_rt_type(const ClassType& field_type, const std::vector<std::string>& formals,
                      const std::vector<PoolAddr>& actuals) {
  RtClass rt;
  rt.class_name = field_type.class_name;
  rt.params.reserve(field_type.args.size());
  for (const PoolArg& a : field_type.args) {
    if (!a) {
      rt.params.push_back(std::nullopt);
      continue;
    }
    bool found = false;
    for (size_t i = 0; i < formals.size(); ++i) {
      if (formals[i] == *a) {
        rt.params.push_back(actuals[i]);
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("field type names unknown pool parameter '" + *a + "'");
  }
  return rt;
}

bool pool_matches(const CheckedProgram& prog, const Heap& heap, PoolId id,
                  const std::string& class_name, const std::vector<PoolAddr>& params) {
  if (id >= heap.pool_count()) return false;
  const PoolCell& cell = heap.pool(id);
  const LayoutDecl* layout = prog.index().layout_of(cell.layout_name);
  if (!layout || layout->class_name != class_name) return false;
  return cell.params == params;
}

}  // namespace

RtClass resolve_type(const ClassType& t, const Frame& frame) {
  return RtClass{t.class_name, resolve_args(t.args, frame)};
}

bool weak_agree(const CheckedProgram& prog, const Heap& heap, const Value& v, const RtClass& rt) {
  if (is_null(v)) return true;
  if (rt.params.empty()) return false;
  if (const auto* obj = std::get_if<ObjectAddr>(&v)) {
    if (rt.params[0]) return false;  // an unpooled object lives on the global heap
    if (obj->id >= heap.object_count()) return false;
    const ObjectCell& cell = heap.object(*obj);
    return cell.class_name == rt.class_name && cell.params == rt.params;
  }
  const Location& loc = std::get<Location>(v);
  if (!rt.params[0] || *rt.params[0] != loc.pool) return false;
  if (!pool_matches(prog, heap, loc.pool, rt.class_name, rt.params)) return false;
  return loc.index < heap.pool(loc.pool).size();
}

bool weak_agree(const CheckedProgram& prog, const Heap& heap, const PoolAddr& p,
                const RtBound& rt) {
  if (!p) return true;  // the global heap inhabits every bound
  if (rt.params.empty() || !rt.params[0] || *rt.params[0] != *p) return false;
  return pool_matches(prog, heap, *p, rt.class_name, rt.params);
}

bool weak_agree(const CheckedProgram&, const Heap& heap, const PoolAddr& p, const RtPool& rt) {
  if (!p) return false;  // a layout-typed variable always holds a real pool
  if (*p >= heap.pool_count()) return false;
  const PoolCell& cell = heap.pool(*p);
  if (cell.layout_name != rt.layout_name) return false;
  if (rt.params.empty() || !rt.params[0] || *rt.params[0] != *p) return false;
  return cell.params == rt.params;
}

std::optional<std::string> object_violation(const CheckedProgram& prog, const Heap& heap,
                                            ObjectAddr addr) {
  const ObjectCell& cell = heap.object(addr);
  std::string who = "obj@" + std::to_string(addr.id);
  const ClassDecl* cls = prog.index().class_of(cell.class_name);
  if (!cls) return who + ": unknown class '" + cell.class_name + "'";
  if (cell.params.size() != cls->params.size()) return who + ": pool parameter arity mismatch";
  if (cell.params.empty() || cell.params[0])
    return who + ": first pool parameter of an unpooled object must be none";
  const std::vector<std::string>& fields = *prog.index().fields_of(cell.class_name);
  if (cell.fields.size() != fields.size()) return who + ": field count mismatch";
  const std::vector<std::string>& formals = *prog.index().pool_params_of(cell.class_name);
  for (size_t i = 0; i < fields.size(); ++i) {
    const ClassType& ft = *prog.index().field_type_of(cell.class_name, fields[i]);
    if (!weak_agree(prog, heap, cell.fields[i], field_rt_type(ft, formals, cell.params)))
      return who + ": field '" + fields[i] + "' = " + render(cell.fields[i]) +
             " disagrees with its type";
  }
  return std::nullopt;
}

std::optional<std::string> pool_violation(const CheckedProgram& prog, const Heap& heap,
                                          PoolId id) {
  const PoolCell& cell = heap.pool(id);
  std::string who = "pool@" + std::to_string(id);
  const LayoutDecl* layout = prog.index().layout_of(cell.layout_name);
  if (!layout) return who + ": unknown layout '" + cell.layout_name + "'";
  const ClassDecl* cls = prog.index().class_of(layout->class_name);
  if (!cls) return who + ": layout over unknown class";
  if (cell.params.size() != cls->params.size()) return who + ": pool parameter arity mismatch";
  if (cell.params.empty() || !cell.params[0] || *cell.params[0] != id)
    return who + ": first pool parameter must be the pool itself";
  if (cell.clusters.size() != layout->clusters.size()) return who + ": cluster count mismatch";
  size_t n = cell.size();
  for (size_t i = 0; i < cell.clusters.size(); ++i) {
    if (cell.clusters[i].size() != n) return who + ": ragged cluster lengths";
    if (cell.widths[i] != layout->clusters[i].size()) return who + ": cluster width mismatch";
  }
  const std::vector<std::string>& formals = *prog.index().pool_params_of(layout->class_name);
  for (size_t i = 0; i < layout->clusters.size(); ++i) {
    for (size_t j = 0; j < layout->clusters[i].size(); ++j) {
      const std::string& fname = layout->clusters[i][j].name;
      const ClassType* ft = prog.index().field_type_of(layout->class_name, fname);
      if (!ft) return who + ": layout field '" + fname + "' not on class";
      RtClass rt = field_rt_type(*ft, formals, cell.params);
      for (size_t rec = 0; rec < n; ++rec) {
        const Value& v = cell.clusters[i][rec][j];
        if (!weak_agree(prog, heap, v, rt))
          return who + " record " + std::to_string(rec) + ": field '" + fname + "' = " +
                 render(v) + " disagrees with its type";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> heap_violation(const CheckedProgram& prog, const Heap& heap) {
  for (size_t k = 0; k < heap.object_count(); ++k)
    if (auto v = object_violation(prog, heap, ObjectAddr{static_cast<ObjectId>(k)})) return v;
  for (size_t k = 0; k < heap.pool_count(); ++k)
    if (auto v = pool_violation(prog, heap, static_cast<PoolId>(k))) return v;
  return std::nullopt;
}

std::optional<std::string> frame_violation(const CheckedProgram& prog, const TypingContext& ctx,
                                           const Heap& heap, const Frame& frame) {
  for (const auto& [name, slot] : frame.slots())
    if (!ctx.contains(name)) return "frame binds '" + name + "' outside its typing context";
  for (const TypingContext::Entry& entry : ctx.entries()) {
    auto it = frame.slots().find(entry.name);
    if (it == frame.slots().end()) return "frame is missing '" + entry.name + "'";
    const FrameSlot& slot = it->second;
    bool ok = std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ClassType>) {
            const Value* v = std::get_if<Value>(&slot);
            return v && weak_agree(prog, heap, *v, resolve_type(t, frame));
          } else if constexpr (std::is_same_v<T, PoolType>) {
            const PoolAddr* p = std::get_if<PoolAddr>(&slot);
            return p && weak_agree(prog, heap, *p,
                                   RtPool{t.layout_name, resolve_args(t.args, frame)});
          } else {
            static_assert(std::is_same_v<T, PoolBound>);
            const PoolAddr* p = std::get_if<PoolAddr>(&slot);
            return p && weak_agree(prog, heap, *p,
                                   RtBound{t.class_name, resolve_args(t.args, frame)});
          }
        },
        entry.type);
    if (!ok)
      return "'" + entry.name + "' disagrees with its declared type " + to_string(entry.type);
  }
  return std::nullopt;
}

void InvariantObserver::on_result(const Expr& expr, EvalRule, const Value& v, const Heap& heap,
                                  const Frame& frame, const TypingContext* ctx) {
  ++checks_;
  if (auto violation = heap_violation(prog_, heap))
    throw InvariantViolation("heap: " + *violation);
  if (ctx) {
    if (auto violation = frame_violation(prog_, *ctx, heap, frame))
      throw InvariantViolation("frame: " + *violation);
  }
  if (const ClassType* t = prog_.node_type(&expr)) {
    if (!weak_agree(prog_, heap, v, resolve_type(*t, frame)))
      throw InvariantViolation("result " + render(v) + " disagrees with static type " +
                               to_string(*t) + " at line " + std::to_string(expr.pos.line));
  }
}

namespace {

// Identity of a dereferenceable cell, uniform across allocation kinds.
using NodeKey = uint64_t;

NodeKey key_of(const Value& v) {
  if (const auto* obj = std::get_if<ObjectAddr>(&v)) return obj->id;
  const Location& loc = std::get<Location>(v);
  return (1ULL << 63) | (static_cast<uint64_t>(loc.pool) << 32) | loc.index;
}

struct Side {
  const CheckedProgram& prog;
  const Heap& heap;

  // Class of the cell a value points to; nullopt for null / dangling.
  std::optional<std::string> class_of(const Value& v) const {
    if (const auto* obj = std::get_if<ObjectAddr>(&v)) {
      if (obj->id >= heap.object_count()) return std::nullopt;
      return heap.object(*obj).class_name;
    }
    const Location& loc = std::get<Location>(v);
    if (loc.pool >= heap.pool_count()) return std::nullopt;
    const LayoutDecl* layout = prog.index().layout_of(heap.pool(loc.pool).layout_name);
    if (!layout) return std::nullopt;
    return layout->class_name;
  }

  std::optional<Value> field(const Value& v, const std::string& name) const {
    if (const auto* obj = std::get_if<ObjectAddr>(&v)) {
      auto off = prog.index().field_offset_class(heap.object(*obj).class_name, name);
      if (!off) return std::nullopt;
      return heap.read_field(*obj, *off);
    }
    const Location& loc = std::get<Location>(v);
    auto off = prog.index().field_offset_layout(heap.pool(loc.pool).layout_name, name);
    if (!off) return std::nullopt;
    return heap.read_slot(loc, *off);
  }
};

}  // namespace

bool heap_iso(const CheckedProgram& prog_a, const Heap& heap_a, const Value& root_a,
              const CheckedProgram& prog_b, const Heap& heap_b, const Value& root_b) {
  Side a{prog_a, heap_a}, b{prog_b, heap_b};
  std::map<NodeKey, NodeKey> fwd, bwd;
  std::deque<std::pair<Value, Value>> work{{root_a, root_b}};
  while (!work.empty()) {
    auto [va, vb] = work.front();
    work.pop_front();
    if (is_null(va) || is_null(vb)) {
      if (is_null(va) != is_null(vb)) return false;
      continue;
    }
    NodeKey ka = key_of(va), kb = key_of(vb);
    auto fit = fwd.find(ka);
    auto bit = bwd.find(kb);
    if (fit != fwd.end() || bit != bwd.end()) {
      // Already matched: the pairing must be consistent both ways.
      if (fit == fwd.end() || bit == bwd.end()) return false;
      if (fit->second != kb || bit->second != ka) return false;
      continue;
    }
    std::optional<std::string> ca = a.class_of(va), cb = b.class_of(vb);
    if (!ca || !cb || *ca != *cb) return false;
    const std::vector<std::string>* fields_a = a.prog.index().fields_of(*ca);
    const std::vector<std::string>* fields_b = b.prog.index().fields_of(*cb);
    if (!fields_a || !fields_b || *fields_a != *fields_b) return false;
    fwd.emplace(ka, kb);
    bwd.emplace(kb, ka);
    for (const std::string& f : *fields_a) {
      std::optional<Value> fa = a.field(va, f), fb = b.field(vb, f);
      if (!fa || !fb) return false;
      work.emplace_back(*fa, *fb);
    }
  }
  return true;
}

}  // namespace shapes
