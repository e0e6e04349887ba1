#pragma once

#include <string_view>

#include "ctmc/expr.hpp"

namespace ctmc {

// Reads the syntax produced by RateExpr::render back into an expression:
// sums of '+' terms, '*' / '/' left to right, "x^-1" reciprocals, parentheses,
// identifiers and non-negative literals. Exists so golden tests can check
// that rendered output round-trips; not a general expression language.
// Throws std::invalid_argument on malformed input.
RateExpr read_expr(std::string_view text);

}  // namespace ctmc
