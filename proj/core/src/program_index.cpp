#include "shapes/program_index.hpp"

namespace shapes {

ProgramIndex ProgramIndex::build(const Program& program) {
  ProgramIndex idx;
  for (const ClassDecl& c : program.classes) {
    if (idx.classes_.count(c.name)) continue;  // first declaration wins
    ClassInfo info;
    info.decl = &c;
    for (const PoolParam& p : c.params) {
      info.param_names.push_back(p.name);
      info.bounds.emplace(p.name, &p.bound);
    }
    for (const FieldDecl& f : c.fields) {
      info.field_index.emplace(f.name, info.field_order.size());
      info.field_order.push_back(f.name);
      info.field_types.emplace(f.name, &f.type);
    }
    for (const MethodDecl& m : c.methods) info.methods.emplace(m.name, &m);
    idx.classes_.emplace(c.name, std::move(info));
  }
  for (const LayoutDecl& l : program.layouts) {
    if (idx.layouts_.count(l.name)) continue;
    LayoutInfo info;
    info.decl = &l;
    for (size_t i = 0; i < l.clusters.size(); ++i)
      for (size_t j = 0; j < l.clusters[i].size(); ++j)
        info.offsets.emplace(l.clusters[i][j].name, SlotOffset{i, j});
    idx.layouts_.emplace(l.name, std::move(info));
  }
  return idx;
}

const ProgramIndex::ClassInfo* ProgramIndex::class_info(const std::string& name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : &it->second;
}

const ProgramIndex::LayoutInfo* ProgramIndex::layout_info(const std::string& name) const {
  auto it = layouts_.find(name);
  return it == layouts_.end() ? nullptr : &it->second;
}

const ClassDecl* ProgramIndex::class_of(const std::string& name) const {
  const ClassInfo* info = class_info(name);
  return info ? info->decl : nullptr;
}

const LayoutDecl* ProgramIndex::layout_of(const std::string& name) const {
  const LayoutInfo* info = layout_info(name);
  return info ? info->decl : nullptr;
}

const std::vector<std::string>* ProgramIndex::pool_params_of(const std::string& class_name) const {
  const ClassInfo* info = class_info(class_name);
  return info ? &info->param_names : nullptr;
}

const PoolBound* ProgramIndex::bound_of(const std::string& class_name,
                                        const std::string& param) const {
  const ClassInfo* info = class_info(class_name);
  if (!info) return nullptr;
  auto it = info->bounds.find(param);
  return it == info->bounds.end() ? nullptr : it->second;
}

const MethodDecl* ProgramIndex::method_of(const std::string& class_name,
                                          const std::string& method) const {
  const ClassInfo* info = class_info(class_name);
  if (!info) return nullptr;
  auto it = info->methods.find(method);
  return it == info->methods.end() ? nullptr : it->second;
}

const ClassType* ProgramIndex::field_type_of(const std::string& class_name,
                                             const std::string& field) const {
  const ClassInfo* info = class_info(class_name);
  if (!info) return nullptr;
  auto it = info->field_types.find(field);
  return it == info->field_types.end() ? nullptr : it->second;
}

const std::vector<std::string>* ProgramIndex::fields_of(const std::string& class_name) const {
  const ClassInfo* info = class_info(class_name);
  return info ? &info->field_order : nullptr;
}

std::optional<size_t> ProgramIndex::field_offset_class(const std::string& class_name,
                                                       const std::string& field) const {
  const ClassInfo* info = class_info(class_name);
  if (!info) return std::nullopt;
  auto it = info->field_index.find(field);
  if (it == info->field_index.end()) return std::nullopt;
  return it->second;
}

std::optional<ProgramIndex::SlotOffset> ProgramIndex::field_offset_layout(
    const std::string& layout_name, const std::string& field) const {
  const LayoutInfo* info = layout_info(layout_name);
  if (!info) return std::nullopt;
  auto it = info->offsets.find(field);
  if (it == info->offsets.end()) return std::nullopt;
  return it->second;
}

}  // namespace shapes
