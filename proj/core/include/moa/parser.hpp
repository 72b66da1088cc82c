// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "moa/expr.hpp"

namespace moa {

using ShapeTable = std::map<std::string, Shape, std::less<>>;

/// Parses the expression syntax
///
///   expr  := NAME
///          | outer '(' OP ',' expr ',' expr ')'      OP: mul | add | sub | div
///          | kron '(' expr ',' expr ')'
///          | transpose '(' list ',' expr ')'
///          | reshape '(' list ',' expr ')'
///   list  := '[' [INT {',' INT}] ']'
///   NAME  := [A-Za-z_][A-Za-z0-9_]*
///
/// Whitespace is insignificant and '#' starts a comment running to the end
/// of the line. Leaf shapes come from `shapes`. Syntax errors and unknown
/// names throw ParseError with the 1-based line and column; ill-shaped
/// nodes throw the expression-construction error unchanged.
Expr parse_expression(std::string_view text, const ShapeTable& shapes);

Expr parse_expression(std::string_view text, const Environment& env);

}  // namespace moa
