#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "futra/error.hpp"

namespace futra {

// PhySL expression node: an identifier, a literal, or an application
// head(args...). This textual AST is the intermediate representation between
// the surface language and the execution tree.
struct Ast {
  enum class Kind { Ident, Int, Float, Str, Bool, Nil, Apply };

  Kind kind = Kind::Nil;
  SourceSpan span;
  std::string name;        // Ident name or Apply head
  std::int64_t int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string str_val;
  std::vector<Ast> args;   // Apply arguments

  static Ast ident(std::string n, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Ident;
    a.name = std::move(n);
    a.span = s;
    return a;
  }
  static Ast lit_int(std::int64_t v, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Int;
    a.int_val = v;
    a.span = s;
    return a;
  }
  static Ast lit_float(double v, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Float;
    a.float_val = v;
    a.span = s;
    return a;
  }
  static Ast lit_str(std::string v, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Str;
    a.str_val = std::move(v);
    a.span = s;
    return a;
  }
  static Ast lit_bool(bool v, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Bool;
    a.bool_val = v;
    a.span = s;
    return a;
  }
  static Ast lit_nil(SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Nil;
    a.span = s;
    return a;
  }
  static Ast apply(std::string head, std::vector<Ast> args, SourceSpan s = {}) {
    Ast a;
    a.kind = Kind::Apply;
    a.name = std::move(head);
    a.args = std::move(args);
    a.span = s;
    return a;
  }

  bool is_apply(const std::string& head) const { return kind == Kind::Apply && name == head; }
};

namespace detail {
inline bool float_bits_equal(double x, double y) {
  std::uint64_t ux, uy;
  static_assert(sizeof(double) == 8);
  __builtin_memcpy(&ux, &x, 8);
  __builtin_memcpy(&uy, &y, 8);
  return ux == uy;
}
}  // namespace detail

// Structural equality ignoring spans (float literals compare by bits).
inline bool ast_equal(const Ast& a, const Ast& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Ast::Kind::Ident: return a.name == b.name;
    case Ast::Kind::Int: return a.int_val == b.int_val;
    case Ast::Kind::Float: return detail::float_bits_equal(a.float_val, b.float_val);
    case Ast::Kind::Str: return a.str_val == b.str_val;
    case Ast::Kind::Bool: return a.bool_val == b.bool_val;
    case Ast::Kind::Nil: return true;
    case Ast::Kind::Apply: {
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!ast_equal(a.args[i], b.args[i])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace futra
