#include "shapes/heap.hpp"

#include <sstream>

namespace shapes {

std::string render(const Value& v) {
  if (const auto* obj = std::get_if<ObjectAddr>(&v)) return "obj@" + std::to_string(obj->id);
  if (const auto* loc = std::get_if<Location>(&v))
    return "(pool@" + std::to_string(loc->pool) + ", " + std::to_string(loc->index) + ")";
  return "null";
}

std::string render(const PoolAddr& p) { return p ? "pool@" + std::to_string(*p) : "none"; }

ObjectAddr Heap::alloc_object(std::string class_name, std::vector<PoolAddr> params,
                              size_t field_count) {
  ObjectCell cell;
  cell.class_name = std::move(class_name);
  cell.params = std::move(params);
  cell.fields.assign(field_count, Value{});
  objects_.push_back(std::move(cell));
  return ObjectAddr{static_cast<ObjectId>(objects_.size() - 1)};
}

PoolId Heap::reserve_pool() {
  pools_.emplace_back();
  return static_cast<PoolId>(pools_.size() - 1);
}

void Heap::init_pool(PoolId id, std::string layout_name, std::vector<PoolAddr> params,
                     const std::vector<size_t>& cluster_widths) {
  if (id >= pools_.size()) throw InternalError("init_pool: unreserved pool id");
  PoolCell& cell = pools_[id];
  if (!cell.layout_name.empty()) throw InternalError("init_pool: pool already initialized");
  if (layout_name.empty()) throw InternalError("init_pool: empty layout name");
  cell.layout_name = std::move(layout_name);
  cell.params = std::move(params);
  cell.widths = cluster_widths;
  cell.clusters.resize(cluster_widths.size());
}

PoolId Heap::alloc_pool(std::string layout_name, std::vector<PoolAddr> params,
                        const std::vector<size_t>& cluster_widths) {
  PoolId id = reserve_pool();
  init_pool(id, std::move(layout_name), std::move(params), cluster_widths);
  return id;
}

uint32_t Heap::pool_append(PoolId id) {
  if (id >= pools_.size() || pools_[id].layout_name.empty())
    throw InternalError("pool_append: no such pool");
  PoolCell& cell = pools_[id];
  uint32_t index = static_cast<uint32_t>(cell.size());
  for (size_t i = 0; i < cell.clusters.size(); ++i)
    cell.clusters[i].emplace_back(cell.widths[i], Value{});
  return index;
}

const ObjectCell& Heap::object(ObjectAddr addr) const {
  if (addr.id >= objects_.size()) throw InternalError("dangling object address");
  return objects_[addr.id];
}

const PoolCell& Heap::pool(PoolId id) const {
  if (id >= pools_.size() || pools_[id].layout_name.empty())
    throw InternalError("dangling pool address");
  return pools_[id];
}

Value Heap::read_field(ObjectAddr addr, size_t offset) const {
  const ObjectCell& cell = object(addr);
  if (offset >= cell.fields.size()) throw InternalError("field offset out of range");
  return cell.fields[offset];
}

void Heap::write_field(ObjectAddr addr, size_t offset, Value v) {
  if (addr.id >= objects_.size()) throw InternalError("dangling object address");
  ObjectCell& cell = objects_[addr.id];
  if (offset >= cell.fields.size()) throw InternalError("field offset out of range");
  cell.fields[offset] = v;
}

Value Heap::read_slot(Location loc, ProgramIndex::SlotOffset offset) const {
  const PoolCell& cell = pool(loc.pool);
  if (offset.cluster >= cell.clusters.size()) throw InternalError("cluster out of range");
  const auto& cluster = cell.clusters[offset.cluster];
  if (loc.index >= cluster.size()) throw InternalError("pool index out of range");
  const auto& record = cluster[loc.index];
  if (offset.slot >= record.size()) throw InternalError("slot out of range");
  return record[offset.slot];
}

void Heap::write_slot(Location loc, ProgramIndex::SlotOffset offset, Value v) {
  if (loc.pool >= pools_.size()) throw InternalError("dangling pool address");
  PoolCell& cell = pools_[loc.pool];
  if (offset.cluster >= cell.clusters.size()) throw InternalError("cluster out of range");
  auto& cluster = cell.clusters[offset.cluster];
  if (loc.index >= cluster.size()) throw InternalError("pool index out of range");
  auto& record = cluster[loc.index];
  if (offset.slot >= record.size()) throw InternalError("slot out of range");
  record[offset.slot] = v;
}

namespace {

std::string render_params(const std::vector<PoolAddr>& params) {
  std::string out = "<";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ", ";
    out += render(params[i]);
  }
  return out + ">";
}

}  // namespace

std::string dump_heap(const Heap& heap, const ProgramIndex& index) {
  std::ostringstream out;
  for (size_t k = 0; k < heap.object_count(); ++k) {
    const ObjectCell& cell = heap.object(ObjectAddr{static_cast<ObjectId>(k)});
    out << "obj@" << k << " : " << cell.class_name << render_params(cell.params) << " {";
    const std::vector<std::string>* fields = index.fields_of(cell.class_name);
    for (size_t i = 0; i < cell.fields.size(); ++i) {
      out << (i == 0 ? " " : ", ");
      if (fields && i < fields->size()) out << (*fields)[i] << " = ";
      out << render(cell.fields[i]);
    }
    out << (cell.fields.empty() ? "}" : " }") << "\n";
  }
  for (size_t k = 0; k < heap.pool_count(); ++k) {
    const PoolCell& cell = heap.pool(static_cast<PoolId>(k));
    out << "pool@" << k << " : " << cell.layout_name << render_params(cell.params)
        << " size=" << cell.size() << " clusters=[";
    const LayoutDecl* layout = index.layout_of(cell.layout_name);
    for (size_t i = 0; i < cell.clusters.size(); ++i) {
      out << (i == 0 ? "[" : ",[");
      if (layout && i < layout->clusters.size()) {
        for (size_t j = 0; j < layout->clusters[i].size(); ++j)
          out << (j == 0 ? "" : ",") << layout->clusters[i][j].name;
      }
      out << "]";
    }
    out << "]";
    for (size_t n = 0; n < cell.size(); ++n) {
      out << " | record " << n << ":";
      for (const auto& cluster : cell.clusters) {
        out << " (";
        const auto& record = cluster[n];
        for (size_t j = 0; j < record.size(); ++j) {
          if (j > 0) out << ", ";
          out << render(record[j]);
        }
        out << ")";
      }
    }
    out << "\n";
  }
  return out.str();
}

void Frame::bind_value(const std::string& name, Value v) {
  if (!slots_.emplace(name, FrameSlot{std::move(v)}).second)
    throw InternalError("frame: duplicate binding '" + name + "'");
}

void Frame::bind_pool(const std::string& name, PoolAddr p) {
  if (!slots_.emplace(name, FrameSlot{std::move(p)}).second)
    throw InternalError("frame: duplicate binding '" + name + "'");
}

void Frame::set_value(const std::string& name, Value v) {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw InternalError("frame: assignment to unbound '" + name + "'");
  if (!std::holds_alternative<Value>(it->second))
    throw InternalError("frame: assignment to pool variable '" + name + "'");
  it->second = FrameSlot{std::move(v)};
}

const Value* Frame::value(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) return nullptr;
  return std::get_if<Value>(&it->second);
}

const PoolAddr* Frame::pool_addr(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) return nullptr;
  return std::get_if<PoolAddr>(&it->second);
}

}  // namespace shapes
