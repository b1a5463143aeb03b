#pragma once

#include <string>

#include "shapes/ast.hpp"

namespace shapes {

// Canonical source rendering; parse(pretty(p)) is structurally equal to p.
std::string pretty(const Program& program);
std::string pretty(const Expr& expr);

}  // namespace shapes
