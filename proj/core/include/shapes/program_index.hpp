#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapes/ast.hpp"

namespace shapes {

// Pre-resolved lookup tables over a Program: classes, layouts, field order,
// and both flavors of field offset. Built once; answers in O(1). All lookups
// return null/nullopt on a miss — turning misses into diagnostics is the
// checker's job. When the program contains duplicate top-level names the first
// declaration wins (the checker reports E101 separately).
//
// The index borrows the Program; the Program must outlive it.
class ProgramIndex {
 public:
  struct SlotOffset {
    size_t cluster;  // 0-based cluster position
    size_t slot;     // 0-based position within the cluster
    bool operator==(const SlotOffset&) const = default;
  };

  static ProgramIndex build(const Program& program);

  const ClassDecl* class_of(const std::string& name) const;
  const LayoutDecl* layout_of(const std::string& name) const;

  // Declaration-order pool parameter names of a class.
  const std::vector<std::string>* pool_params_of(const std::string& class_name) const;
  const PoolBound* bound_of(const std::string& class_name, const std::string& param) const;
  const MethodDecl* method_of(const std::string& class_name, const std::string& method) const;
  const ClassType* field_type_of(const std::string& class_name, const std::string& field) const;

  // Declaration-order field names; null for unknown classes.
  const std::vector<std::string>* fields_of(const std::string& class_name) const;

  // Position of `field` in declaration order.
  std::optional<size_t> field_offset_class(const std::string& class_name,
                                           const std::string& field) const;
  // (cluster, slot) of `field` in a layout. Meaningful for well-formed layouts;
  // for a layout that repeats a field the first occurrence wins.
  std::optional<SlotOffset> field_offset_layout(const std::string& layout_name,
                                                const std::string& field) const;

 private:
  struct ClassInfo {
    const ClassDecl* decl;
    std::vector<std::string> param_names;
    std::unordered_map<std::string, const PoolBound*> bounds;
    std::unordered_map<std::string, const MethodDecl*> methods;
    std::unordered_map<std::string, const ClassType*> field_types;
    std::vector<std::string> field_order;
    std::unordered_map<std::string, size_t> field_index;
  };
  struct LayoutInfo {
    const LayoutDecl* decl;
    std::unordered_map<std::string, SlotOffset> offsets;
  };

  const ClassInfo* class_info(const std::string& name) const;
  const LayoutInfo* layout_info(const std::string& name) const;

  std::unordered_map<std::string, ClassInfo> classes_;
  std::unordered_map<std::string, LayoutInfo> layouts_;
};

}  // namespace shapes
