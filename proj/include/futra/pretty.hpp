#pragma once

#include <string>

#include "futra/ast.hpp"
#include "futra/datum.hpp"

namespace futra {

// Canonical PhySL form: `head(a, b)` with one space after each comma, no
// spaces inside parens, floats as shortest round-trip decimals that always
// contain '.' or 'e', strings re-escaped.
inline void pretty_to(const Ast& a, std::string& out) {
  switch (a.kind) {
    case Ast::Kind::Ident: out += a.name; return;
    case Ast::Kind::Int: out += std::to_string(a.int_val); return;
    case Ast::Kind::Float: out += format_float_literal(a.float_val); return;
    case Ast::Kind::Str: out += escape_string(a.str_val); return;
    case Ast::Kind::Bool: out += a.bool_val ? "true" : "false"; return;
    case Ast::Kind::Nil: out += "nil"; return;
    case Ast::Kind::Apply: {
      out += a.name;
      out += '(';
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        pretty_to(a.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

inline std::string pretty(const Ast& a) {
  std::string out;
  pretty_to(a, out);
  return out;
}

}  // namespace futra
