#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shapes/ast.hpp"
#include "shapes/program_index.hpp"

namespace shapes {

using ObjectId = uint32_t;
using PoolId = uint32_t;

// Runtime pool parameter: an allocated pool, or the global heap.
using PoolAddr = std::optional<PoolId>;

struct ObjectAddr {
  ObjectId id;
  bool operator==(const ObjectAddr&) const = default;
};

// A pooled object: the pool it lives in and its index there.
struct Location {
  PoolId pool;
  uint32_t index;
  bool operator==(const Location&) const = default;
};

// null | object address | pooled location
using Value = std::variant<std::monostate, ObjectAddr, Location>;

inline constexpr std::monostate kNull{};

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

std::string render(const Value& v);     // null / obj@K / (pool@K, n)
std::string render(const PoolAddr& p);  // none / pool@K

struct ObjectCell {
  std::string class_name;
  std::vector<PoolAddr> params;  // one per class pool parameter
  std::vector<Value> fields;     // declaration order
};

struct PoolCell {
  std::string layout_name;  // empty while the cell is only reserved
  std::vector<PoolAddr> params;
  std::vector<size_t> widths;  // slots per cluster record
  // clusters[i][n][j]: cluster i, record n, slot j. Every cluster has one
  // record per pool member, so all outer vectors share a length.
  std::vector<std::vector<std::vector<Value>>> clusters;

  size_t size() const { return clusters.empty() ? 0 : clusters[0].size(); }
};

// Object and pool stores with dense, separately-numbered ids. Nothing is ever
// deallocated; allocation order is the dump order, which is what makes runs
// byte-for-byte reproducible. Out-of-range or mistyped access throws
// InternalError — the type system is supposed to make those unreachable.
class Heap {
 public:
  ObjectAddr alloc_object(std::string class_name, std::vector<PoolAddr> params,
                          size_t field_count);

  // Pools in one `pools` block may reference each other, so creation is split:
  // reserve ids for the whole block, then initialize each cell.
  PoolId reserve_pool();
  void init_pool(PoolId id, std::string layout_name, std::vector<PoolAddr> params,
                 const std::vector<size_t>& cluster_widths);
  PoolId alloc_pool(std::string layout_name, std::vector<PoolAddr> params,
                    const std::vector<size_t>& cluster_widths);

  // Appends one all-null record across every cluster; returns its index.
  uint32_t pool_append(PoolId id);

  Value read_field(ObjectAddr addr, size_t offset) const;
  void write_field(ObjectAddr addr, size_t offset, Value v);
  Value read_slot(Location loc, ProgramIndex::SlotOffset offset) const;
  void write_slot(Location loc, ProgramIndex::SlotOffset offset, Value v);

  const ObjectCell& object(ObjectAddr addr) const;
  const PoolCell& pool(PoolId id) const;
  size_t object_count() const { return objects_.size(); }
  size_t pool_count() const { return pools_.size(); }

 private:
  std::vector<ObjectCell> objects_;
  std::vector<PoolCell> pools_;
};

// One line per cell, objects first, both in allocation order:
//   obj@K : C<pp, ...> { f = V, ... }
//   pool@K : L<pp, ...> size=N clusters=[[f,...],...] | record 0: (V, ...)(V, ...) | ...
// Field names come from the program's declarations.
std::string dump_heap(const Heap& heap, const ProgramIndex& index);

// What a variable holds at runtime: object variables hold a Value, pool
// variables a PoolAddr.
using FrameSlot = std::variant<Value, PoolAddr>;

class Frame {
 public:
  void bind_value(const std::string& name, Value v);
  void bind_pool(const std::string& name, PoolAddr p);
  // Assignment to an existing object-variable slot.
  void set_value(const std::string& name, Value v);

  const Value* value(const std::string& name) const;     // null when absent or a pool slot
  const PoolAddr* pool_addr(const std::string& name) const;

  const std::map<std::string, FrameSlot>& slots() const { return slots_; }

 private:
  std::map<std::string, FrameSlot> slots_;
};

}  // namespace shapes
