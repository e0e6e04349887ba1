#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "ctmc/model.hpp"

namespace ctmc {

enum class ParseErrorKind {
    Syntax,
    DuplicateState,
    DuplicateTransition,
    UnknownState,
    UnknownRate,
    NonPositiveRate,
    SelfLoop,
    NoRoot,
    NotStronglyConnected,
    AbsorbingState,
};

const char* parse_error_kind_name(ParseErrorKind k);

struct ParseError {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based
    ParseErrorKind kind = ParseErrorKind::Syntax;
    std::string message;

    std::string to_string() const;  // "LINE:COL MESSAGE"
};

using ParseResult = std::variant<Model, ParseError>;

// Parse the line-oriented model text. One statement per line; '#' starts a
// comment; LF and CRLF both accepted. Statements:
//
//   model IDENT
//   root IDENT                      (optional, at most once; may forward-reference)
//   state IDENT (up | down)
//   rate IDENT = POSITIVE-FLOAT
//   trans IDENT -> IDENT : (IDENT | POSITIVE-FLOAT)
//
// States and rates must be declared before a trans statement uses them. An
// inline literal rate is auto-bound to the symbol "r<src>_<dst>". The first
// error wins: scanning stops at the first offending line; whole-model checks
// (missing root, absorbing states, connectivity) run afterwards and point at
// the declaration of the offending state.
ParseResult parse_model(std::string_view text);

// Canonical text: model, root, states in index order, rates sorted by name,
// transitions sorted by (src, dst) with symbolic rates. parse_model of the
// output reconstructs an equal Model; serializing a parsed canonical text
// reproduces it byte for byte.
std::string serialize_model(const Model& model);

// One-line JSON report of a solved model:
//   {"model": name, "pi": {state: value, ...}, "availability": v, "residual": v}
// with "pi" keys in state index order and numbers at 17 significant digits.
std::string emit_json(const SteadyState& ss, const Model& model);

}  // namespace ctmc
