#include "shapes/pretty.hpp"

#include <sstream>

namespace shapes {

namespace {

void print_simple(std::ostream& out, const Expr& e);

// Statements along the right-nested sequence spine, iteratively.
void print_body(std::ostream& out, const Expr& body, const std::string& indent) {
  const Expr* e = &body;
  while (const auto* seq = std::get_if<SeqExpr>(&e->node)) {
    out << indent;
    print_simple(out, *seq->first);
    out << ";\n";
    e = seq->second.get();
  }
  out << indent;
  print_simple(out, *e);
  out << "\n";
}

void print_simple(std::ostream& out, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NullLit>) {
          out << "null";
        } else if constexpr (std::is_same_v<T, ThisRef>) {
          out << "this";
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out << n.name;
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          out << "new " << to_string(n.type);
        } else if constexpr (std::is_same_v<T, FieldRead>) {
          out << n.receiver << "." << n.field;
        } else if constexpr (std::is_same_v<T, FieldWrite>) {
          out << n.receiver << "." << n.field << " = " << n.source;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          out << n.receiver << "." << n.method << "(" << n.arg << ")";
        } else if constexpr (std::is_same_v<T, AssignExpr>) {
          out << n.target << " = ";
          print_simple(out, *n.rhs);
        } else {
          static_assert(std::is_same_v<T, SeqExpr>);
          // A sequence nested inside an assignment rhs cannot be produced by
          // the grammar; print it inline defensively.
          print_simple(out, *n.first);
          out << "; ";
          print_simple(out, *n.second);
        }
      },
      e.node);
}

}  // namespace

std::string pretty(const Expr& expr) {
  std::ostringstream out;
  print_simple(out, expr);
  return out.str();
}

std::string pretty(const Program& program) {
  std::ostringstream out;
  bool first = true;
  for (const ClassDecl& c : program.classes) {
    if (!first) out << "\n";
    first = false;
    out << "class " << c.name << "<<";
    for (size_t i = 0; i < c.params.size(); ++i) {
      if (i > 0) out << ", ";
      out << c.params[i].name << ": " << to_string(c.params[i].bound);
    }
    out << ">> {\n";
    for (const FieldDecl& f : c.fields)
      out << "    " << f.name << ": " << to_string(f.type) << ";\n";
    for (const MethodDecl& m : c.methods) {
      out << "\n    def " << m.name << "(" << m.param_name << ": " << to_string(m.param_type)
          << "): " << to_string(m.return_type) << " {\n";
      out << "        pools";
      for (const LocalPoolDecl& p : m.pools)
        out << "\n            " << p.name << ": " << to_string(p.type);
      out << "\n        locals";
      for (const LocalVarDecl& v : m.locals)
        out << "\n            " << v.name << ": " << to_string(v.type);
      out << "\n        ;\n";
      print_body(out, m.body, "        ");
      out << "    }\n";
    }
    out << "}\n";
  }
  for (const LayoutDecl& l : program.layouts) {
    if (!first) out << "\n";
    first = false;
    out << "layout " << l.name << ": [" << l.class_name << "] =";
    for (size_t i = 0; i < l.clusters.size(); ++i) {
      out << (i == 0 ? " rec { " : " + rec { ");
      for (size_t j = 0; j < l.clusters[i].size(); ++j) {
        if (j > 0) out << ", ";
        out << l.clusters[i][j].name;
      }
      out << " }";
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace shapes
