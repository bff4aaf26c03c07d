#pragma once

#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "futra/error.hpp"

// PyLite: the restricted Python-style surface language. A file is a sequence
// of `def` functions; statements are assignment, augmented assignment, row
// assignment, while, if/elif/else, return and expression statements.
// Indentation is spaces-only with a consistent width per block.

namespace futra::pylite {

enum class BinaryOp { Add, Sub, Mul, Div, MatMul };
enum class CompareOp { Lt, Le, Gt, Ge, Eq, Ne };

struct Expr {
  enum class Kind {
    Name, IntLit, FloatLit, StrLit, BoolLit, NoneLit,
    Neg, Binary, Compare, Call, NpCall, Transpose, ShapeIndex, Index, ListDisplay,
  };

  Kind kind = Kind::NoneLit;
  SourceSpan span;
  std::string name;    // Name, Call callee, NpCall path ("dot", "linalg.solve", ...)
  std::int64_t int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string str_val;
  BinaryOp bin_op = BinaryOp::Add;
  CompareOp cmp_op = CompareOp::Lt;
  std::vector<Expr> children;
};

struct Stmt {
  enum class Kind { Assign, AugAssign, IndexAssign, While, If, Return, ExprStmt };

  Kind kind = Kind::ExprStmt;
  SourceSpan span;
  std::string target;               // Assign/AugAssign/IndexAssign target name
  bool first_binding = false;       // filled by the validator
  BinaryOp aug_op = BinaryOp::Add;
  std::vector<Expr> exprs;          // Assign: [value]; IndexAssign: [index, value];
                                    // While/If: [cond...]; Return/ExprStmt: [value]
  std::vector<Stmt> body;           // While body; If: first arm body
  std::vector<std::vector<Stmt>> elif_bodies;  // If: bodies for exprs[1..]
  std::vector<Stmt> else_body;
  bool has_else = false;
};

struct FuncDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
  SourceSpan span;
};

namespace detail {

struct Tok {
  enum class Kind {
    Name, Int, Float, Str, Op, Newline, Indent, Dedent, End,
  };
  Kind kind;
  SourceSpan span;
  std::string text;  // name, op spelling, or decoded string
  std::int64_t int_val = 0;
  double float_val = 0.0;
};

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Constructs PyLite knowingly rejects, by leading keyword.
inline bool is_unsupported_keyword(const std::string& w) {
  static const char* words[] = {
      "for", "in", "import", "from", "class", "lambda", "try", "except", "finally",
      "with", "as", "del", "global", "nonlocal", "pass", "break", "continue",
      "not", "and", "or", "is", "yield", "assert", "raise",
  };
  for (const char* k : words)
    if (w == k) return true;
  return false;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    std::vector<int> indents{0};
    std::size_t pos = 0;
    int line_no = 0;
    bool saw_any = false;
    while (pos <= src_.size()) {
      if (pos == src_.size() && src_.empty()) break;
      std::size_t eol = src_.find('\n', pos);
      bool last = eol == std::string_view::npos;
      std::string_view line = src_.substr(pos, last ? std::string_view::npos : eol - pos);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lex_line(line, line_no, indents, out, saw_any);
      if (last) break;
      pos = eol + 1;
    }
    while (indents.size() > 1) {
      indents.pop_back();
      out.push_back({Tok::Kind::Dedent, {line_no + 1, 1, 0}, ""});
    }
    out.push_back({Tok::Kind::End, {line_no + 1, 1, 0}, ""});
    return out;
  }

 private:
  void lex_line(std::string_view line, int line_no, std::vector<int>& indents,
                std::vector<Tok>& out, bool& saw_any) {
    int indent = 0;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
      if (line[i] == '\t')
        throw Error(ErrorCode::IndentationError, {line_no, static_cast<int>(i) + 1, 1},
                    "tabs are not allowed in indentation");
      ++indent;
      ++i;
    }
    if (i >= line.size() || line[i] == '#') return;  // blank or comment-only line

    if (indent > indents.back()) {
      indents.push_back(indent);
      out.push_back({Tok::Kind::Indent, {line_no, 1, 0}, ""});
    } else {
      while (indent < indents.back()) {
        indents.pop_back();
        out.push_back({Tok::Kind::Dedent, {line_no, 1, 0}, ""});
      }
      if (indent != indents.back())
        throw Error(ErrorCode::IndentationError, {line_no, indent + 1, 0},
                    "unindent does not match any outer indentation level");
    }
    saw_any = true;

    while (i < line.size()) {
      char c = line[i];
      int col = static_cast<int>(i) + 1;
      if (c == ' ') { ++i; continue; }
      if (c == '\t')
        throw Error(ErrorCode::IndentationError, {line_no, col, 1}, "tab in statement");
      if (c == '#') break;
      if (is_ident_start(c)) {
        std::size_t s = i;
        while (i < line.size() && is_ident_char(line[i])) ++i;
        Tok t{Tok::Kind::Name, {line_no, col, static_cast<int>(i - s)}, std::string(line.substr(s, i - s))};
        out.push_back(std::move(t));
        continue;
      }
      if (c >= '0' && c <= '9') {
        out.push_back(lex_number(line, i, line_no));
        continue;
      }
      if (c == '"' || c == '\'') {
        out.push_back(lex_string(line, i, line_no));
        continue;
      }
      out.push_back(lex_op(line, i, line_no));
    }
    out.push_back({Tok::Kind::Newline, {line_no, static_cast<int>(line.size()) + 1, 0}, ""});
  }

  Tok lex_number(std::string_view line, std::size_t& i, int line_no) {
    std::size_t s = i;
    int col = static_cast<int>(i) + 1;
    bool is_float = false;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i < line.size() && line[i] == '.') {
      // ".shape" must not swallow the dot of a trailing attribute; floats
      // in PyLite always have a digit before the dot, so a following
      // identifier character means attribute access on an int literal.
      if (i + 1 < line.size() && is_ident_start(line[i + 1])) {
        // leave the '.' for the op lexer
      } else {
        is_float = true;
        ++i;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
      }
    }
    if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
      std::size_t save = i;
      ++i;
      if (i < line.size() && (line[i] == '+' || line[i] == '-')) ++i;
      if (i < line.size() && line[i] >= '0' && line[i] <= '9') {
        is_float = true;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
      } else {
        i = save;
      }
    }
    std::string_view num = line.substr(s, i - s);
    Tok t;
    t.span = {line_no, col, static_cast<int>(num.size())};
    if (is_float) {
      t.kind = Tok::Kind::Float;
      auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), t.float_val);
      if (ec != std::errc{} || end != num.data() + num.size())
        throw Error(ErrorCode::LexError, t.span, "malformed float literal");
    } else {
      t.kind = Tok::Kind::Int;
      auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), t.int_val);
      if (ec == std::errc::result_out_of_range)
        throw Error(ErrorCode::LexError, t.span, "integer literal out of range");
      if (ec != std::errc{} || end != num.data() + num.size())
        throw Error(ErrorCode::LexError, t.span, "malformed integer literal");
    }
    return t;
  }

  Tok lex_string(std::string_view line, std::size_t& i, int line_no) {
    char quote = line[i];
    int col = static_cast<int>(i) + 1;
    std::size_t s = i++;
    std::string value;
    while (i < line.size()) {
      char c = line[i];
      if (c == quote) {
        ++i;
        return {Tok::Kind::Str, {line_no, col, static_cast<int>(i - s)}, std::move(value)};
      }
      if (c == '\\') {
        if (i + 1 >= line.size())
          throw Error(ErrorCode::LexError, {line_no, static_cast<int>(i) + 1, 1}, "unterminated escape");
        char e = line[i + 1];
        switch (e) {
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            throw Error(ErrorCode::LexError, {line_no, static_cast<int>(i) + 1, 2},
                        std::string("unknown escape '\\") + e + "'");
        }
        i += 2;
        continue;
      }
      value += c;
      ++i;
    }
    throw Error(ErrorCode::LexError, {line_no, col, static_cast<int>(i - s)}, "unterminated string literal");
  }

  Tok lex_op(std::string_view line, std::size_t& i, int line_no) {
    int col = static_cast<int>(i) + 1;
    auto two = line.substr(i, 2);
    auto make = [&](std::string text) {
      Tok t{Tok::Kind::Op, {line_no, col, static_cast<int>(text.size())}, std::move(text)};
      i += t.text.size();
      return t;
    };
    for (const char* op : {"**", "//", "<<", ">>"})
      if (two == op)
        throw Error(ErrorCode::UnsupportedSyntax, {line_no, col, 2}, std::string("operator '") + op + "'");
    for (const char* op : {"+=", "-=", "*=", "/=", "<=", ">=", "==", "!="})
      if (two == op) return make(op);
    char c = line[i];
    switch (c) {
      case '+': case '-': case '*': case '/': case '@': case '<': case '>':
      case '=': case '(': case ')': case '[': case ']': case ',': case '.': case ':':
        return make(std::string(1, c));
      case '%': case '&': case '|': case '^': case '~': case ';': case '{': case '}':
        throw Error(ErrorCode::UnsupportedSyntax, {line_no, col, 1}, std::string("operator '") + c + "'");
      case '!':
        throw Error(ErrorCode::LexError, {line_no, col, 1}, "stray '!'");
      default:
        throw Error(ErrorCode::LexError, {line_no, col, 1}, std::string("stray character '") + c + "'");
    }
  }

  std::string_view src_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  std::vector<FuncDef> parse_file() {
    std::vector<FuncDef> defs;
    skip_newlines();
    while (!at(Tok::Kind::End)) {
      defs.push_back(parse_def());
      skip_newlines();
    }
    if (defs.empty())
      throw Error(ErrorCode::ParseError, {1, 1, 0}, "at least one function definition is required");
    return defs;
  }

 private:
  const Tok& peek(int k = 0) const { return toks_[pos_ + k]; }
  const Tok& take() { return toks_[pos_++]; }
  bool at(Tok::Kind k) const { return peek().kind == k; }
  bool at_op(const char* text) const { return peek().kind == Tok::Kind::Op && peek().text == text; }
  bool at_name(const char* text) const { return peek().kind == Tok::Kind::Name && peek().text == text; }

  void skip_newlines() {
    while (at(Tok::Kind::Newline)) take();
  }

  const Tok& expect_op(const char* text) {
    if (!at_op(text))
      throw Error(ErrorCode::ParseError, peek().span,
                  std::string("expected '") + text + "', found " + describe(peek()));
    return take();
  }

  static std::string describe(const Tok& t) {
    switch (t.kind) {
      case Tok::Kind::Name: return "'" + t.text + "'";
      case Tok::Kind::Int: return "integer literal";
      case Tok::Kind::Float: return "float literal";
      case Tok::Kind::Str: return "string literal";
      case Tok::Kind::Op: return "'" + t.text + "'";
      case Tok::Kind::Newline: return "end of line";
      case Tok::Kind::Indent: return "indent";
      case Tok::Kind::Dedent: return "dedent";
      case Tok::Kind::End: return "end of file";
    }
    return "?";
  }

  void reject_unsupported_name(const Tok& t) {
    if (t.kind == Tok::Kind::Name && is_unsupported_keyword(t.text))
      throw Error(ErrorCode::UnsupportedSyntax, t.span, "'" + t.text + "'");
  }

  FuncDef parse_def() {
    reject_unsupported_name(peek());
    if (!at_name("def"))
      throw Error(ErrorCode::ParseError, peek().span,
                  "expected 'def' at top level, found " + describe(peek()));
    FuncDef fn;
    fn.span = take().span;
    if (!at(Tok::Kind::Name))
      throw Error(ErrorCode::ParseError, peek().span, "expected function name");
    fn.name = take().text;
    expect_op("(");
    if (!at_op(")")) {
      while (true) {
        if (!at(Tok::Kind::Name))
          throw Error(ErrorCode::ParseError, peek().span, "expected parameter name");
        reject_unsupported_name(peek());
        fn.params.push_back(take().text);
        if (at_op(",")) { take(); continue; }
        break;
      }
    }
    expect_op(")");
    expect_op(":");
    fn.body = parse_block();
    return fn;
  }

  std::vector<Stmt> parse_block() {
    if (!at(Tok::Kind::Newline))
      throw Error(ErrorCode::ParseError, peek().span,
                  "expected an indented block (single-line bodies are not supported)");
    take();
    skip_newlines();
    if (!at(Tok::Kind::Indent))
      throw Error(ErrorCode::IndentationError, peek().span, "expected an indented block");
    take();
    std::vector<Stmt> stmts;
    skip_newlines();
    while (!at(Tok::Kind::Dedent) && !at(Tok::Kind::End)) {
      stmts.push_back(parse_stmt());
      skip_newlines();
    }
    if (at(Tok::Kind::Dedent)) take();
    if (stmts.empty())
      throw Error(ErrorCode::ParseError, peek().span, "empty block");
    return stmts;
  }

  Stmt parse_stmt() {
    const Tok& t = peek();
    if (t.kind == Tok::Kind::Name) {
      if (is_unsupported_keyword(t.text))
        throw Error(ErrorCode::UnsupportedSyntax, t.span, "'" + t.text + "'");
      if (t.text == "while") return parse_while();
      if (t.text == "if") return parse_if();
      if (t.text == "return") return parse_return();
      if (t.text == "def")
        throw Error(ErrorCode::UnsupportedSyntax, t.span, "nested function definition");
      if (t.text == "elif" || t.text == "else")
        throw Error(ErrorCode::ParseError, t.span, "'" + t.text + "' without a matching 'if'");
      // assignment targets
      if (peek(1).kind == Tok::Kind::Op) {
        const std::string& op = peek(1).text;
        if (op == "=") return parse_assign();
        if (op == "+=" || op == "-=" || op == "*=" || op == "/=") return parse_aug_assign();
        if (op == "[") {
          // could be `x[i] = v` or an expression like `x[i] + 1`
          std::size_t save = pos_;
          Stmt s = try_parse_index_assign();
          if (s.kind == Stmt::Kind::IndexAssign) return s;
          pos_ = save;
        }
      }
    }
    return parse_expr_stmt();
  }

  Stmt try_parse_index_assign() {
    Stmt s;
    s.span = peek().span;
    s.target = take().text;  // name
    take();                  // '['
    Expr index = parse_expr();
    if (!at_op("]")) return Stmt{};  // fall back to expression statement
    take();
    if (!at_op("=") || (peek().kind == Tok::Kind::Op && peek().text == "==")) return Stmt{};
    take();  // '='
    Expr value = parse_expr();
    end_of_stmt();
    s.kind = Stmt::Kind::IndexAssign;
    s.exprs.push_back(std::move(index));
    s.exprs.push_back(std::move(value));
    return s;
  }

  void end_of_stmt() {
    if (!at(Tok::Kind::Newline) && !at(Tok::Kind::End) && !at(Tok::Kind::Dedent))
      throw Error(ErrorCode::ParseError, peek().span,
                  "unexpected " + describe(peek()) + " after statement");
    if (at(Tok::Kind::Newline)) take();
  }

  Stmt parse_assign() {
    Stmt s;
    s.kind = Stmt::Kind::Assign;
    s.span = peek().span;
    s.target = take().text;
    take();  // '='
    s.exprs.push_back(parse_expr());
    end_of_stmt();
    return s;
  }

  Stmt parse_aug_assign() {
    Stmt s;
    s.kind = Stmt::Kind::AugAssign;
    s.span = peek().span;
    s.target = take().text;
    const std::string op = take().text;
    s.aug_op = op == "+=" ? BinaryOp::Add
             : op == "-=" ? BinaryOp::Sub
             : op == "*=" ? BinaryOp::Mul
                          : BinaryOp::Div;
    s.exprs.push_back(parse_expr());
    end_of_stmt();
    return s;
  }

  Stmt parse_return() {
    Stmt s;
    s.kind = Stmt::Kind::Return;
    s.span = take().span;  // 'return'
    if (at(Tok::Kind::Newline))
      throw Error(ErrorCode::UnsupportedSyntax, s.span, "bare 'return' (a value is required)");
    s.exprs.push_back(parse_expr());
    end_of_stmt();
    return s;
  }

  Stmt parse_while() {
    Stmt s;
    s.kind = Stmt::Kind::While;
    s.span = take().span;  // 'while'
    s.exprs.push_back(parse_expr());
    expect_op(":");
    s.body = parse_block();
    return s;
  }

  Stmt parse_if() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.span = take().span;  // 'if'
    s.exprs.push_back(parse_expr());
    expect_op(":");
    s.body = parse_block();
    skip_newlines();
    while (at_name("elif")) {
      take();
      s.exprs.push_back(parse_expr());
      expect_op(":");
      s.elif_bodies.push_back(parse_block());
      skip_newlines();
    }
    if (at_name("else")) {
      take();
      expect_op(":");
      s.else_body = parse_block();
      s.has_else = true;
    }
    return s;
  }

  Stmt parse_expr_stmt() {
    Stmt s;
    s.kind = Stmt::Kind::ExprStmt;
    s.span = peek().span;
    s.exprs.push_back(parse_expr());
    end_of_stmt();
    return s;
  }

  // expr := comparison (non-chained)
  Expr parse_expr() { return parse_comparison(); }

  std::optional<CompareOp> peek_cmp() const {
    if (peek().kind != Tok::Kind::Op) return std::nullopt;
    const std::string& t = peek().text;
    if (t == "<") return CompareOp::Lt;
    if (t == "<=") return CompareOp::Le;
    if (t == ">") return CompareOp::Gt;
    if (t == ">=") return CompareOp::Ge;
    if (t == "==") return CompareOp::Eq;
    if (t == "!=") return CompareOp::Ne;
    return std::nullopt;
  }

  Expr parse_comparison() {
    Expr lhs = parse_additive();
    auto op = peek_cmp();
    if (!op) return lhs;
    SourceSpan op_span = take().span;
    Expr rhs = parse_additive();
    if (peek_cmp())
      throw Error(ErrorCode::UnsupportedSyntax, peek().span, "chained comparison");
    Expr e;
    e.kind = Expr::Kind::Compare;
    e.cmp_op = *op;
    e.span = lhs.span.line ? lhs.span : op_span;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (at_op("+") || at_op("-")) {
      BinaryOp op = peek().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      take();
      Expr rhs = parse_multiplicative();
      Expr e;
      e.kind = Expr::Kind::Binary;
      e.bin_op = op;
      e.span = lhs.span;
      e.children.push_back(std::move(lhs));
      e.children.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (at_op("*") || at_op("/") || at_op("@")) {
      BinaryOp op = peek().text == "*" ? BinaryOp::Mul
                  : peek().text == "/" ? BinaryOp::Div
                                       : BinaryOp::MatMul;
      take();
      Expr rhs = parse_unary();
      Expr e;
      e.kind = Expr::Kind::Binary;
      e.bin_op = op;
      e.span = lhs.span;
      e.children.push_back(std::move(lhs));
      e.children.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at_op("-")) {
      Expr e;
      e.kind = Expr::Kind::Neg;
      e.span = take().span;
      e.children.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    while (true) {
      if (at_op("(")) {
        if (e.kind != Expr::Kind::Name)
          throw Error(ErrorCode::UnsupportedSyntax, peek().span, "call of a computed expression");
        take();
        Expr call;
        call.kind = Expr::Kind::Call;
        call.name = e.name;
        call.span = e.span;
        call.children = parse_call_args();
        e = std::move(call);
        continue;
      }
      if (at_op(".")) {
        take();
        if (!at(Tok::Kind::Name))
          throw Error(ErrorCode::ParseError, peek().span, "expected attribute name after '.'");
        const Tok attr = take();
        if (e.kind == Expr::Kind::Name && e.name == "np") {
          e = parse_np_tail(e.span, attr);
          continue;
        }
        if (attr.text == "T") {
          Expr t;
          t.kind = Expr::Kind::Transpose;
          t.span = e.span;
          t.children.push_back(std::move(e));
          e = std::move(t);
          continue;
        }
        if (attr.text == "shape") {
          expect_op("[");
          Expr idx = parse_expr();
          expect_op("]");
          Expr t;
          t.kind = Expr::Kind::ShapeIndex;
          t.span = e.span;
          t.children.push_back(std::move(e));
          t.children.push_back(std::move(idx));
          e = std::move(t);
          continue;
        }
        throw Error(ErrorCode::UnsupportedSyntax, attr.span, "attribute '." + attr.text + "'");
      }
      if (at_op("[")) {
        take();
        Expr idx = parse_expr();
        if (at_op(":"))
          throw Error(ErrorCode::UnsupportedSyntax, peek().span, "slice subscript");
        expect_op("]");
        Expr t;
        t.kind = Expr::Kind::Index;
        t.span = e.span;
        t.children.push_back(std::move(e));
        t.children.push_back(std::move(idx));
        e = std::move(t);
        continue;
      }
      break;
    }
    return e;
  }

  // np.<name>(...) or np.linalg.solve(...)
  Expr parse_np_tail(SourceSpan np_span, const Tok& first_attr) {
    std::string path = first_attr.text;
    if (path == "linalg") {
      expect_op(".");
      if (!at(Tok::Kind::Name))
        throw Error(ErrorCode::ParseError, peek().span, "expected a name after 'np.linalg.'");
      path += "." + take().text;
    }
    expect_op("(");
    Expr e;
    e.kind = Expr::Kind::NpCall;
    e.name = path;
    e.span = np_span;
    e.children = parse_call_args();
    return e;
  }

  std::vector<Expr> parse_call_args() {
    std::vector<Expr> args;
    if (at_op(")")) {
      take();
      return args;
    }
    while (true) {
      if (peek().kind == Tok::Kind::Name && peek(1).kind == Tok::Kind::Op && peek(1).text == "=" )
        throw Error(ErrorCode::UnsupportedSyntax, peek().span, "keyword argument");
      args.push_back(parse_expr());
      if (at_op(",")) { take(); continue; }
      expect_op(")");
      break;
    }
    return args;
  }

  Expr parse_atom() {
    const Tok& t = peek();
    switch (t.kind) {
      case Tok::Kind::Int: {
        Expr e;
        e.kind = Expr::Kind::IntLit;
        e.int_val = t.int_val;
        e.span = t.span;
        take();
        return e;
      }
      case Tok::Kind::Float: {
        Expr e;
        e.kind = Expr::Kind::FloatLit;
        e.float_val = t.float_val;
        e.span = t.span;
        take();
        return e;
      }
      case Tok::Kind::Str: {
        Expr e;
        e.kind = Expr::Kind::StrLit;
        e.str_val = t.text;
        e.span = t.span;
        take();
        return e;
      }
      case Tok::Kind::Name: {
        reject_unsupported_name(t);
        Expr e;
        e.span = t.span;
        if (t.text == "True" || t.text == "False") {
          e.kind = Expr::Kind::BoolLit;
          e.bool_val = t.text == "True";
          take();
          return e;
        }
        if (t.text == "None") {
          e.kind = Expr::Kind::NoneLit;
          take();
          return e;
        }
        e.kind = Expr::Kind::Name;
        e.name = t.text;
        take();
        return e;
      }
      case Tok::Kind::Op:
        if (t.text == "(") {
          take();
          Expr inner = parse_expr();
          if (at_op(","))
            throw Error(ErrorCode::UnsupportedSyntax, peek().span, "tuple display");
          expect_op(")");
          return inner;
        }
        if (t.text == "[") {
          Expr e;
          e.kind = Expr::Kind::ListDisplay;
          e.span = take().span;
          if (at_op("]")) {
            take();
            return e;
          }
          while (true) {
            e.children.push_back(parse_expr());
            if (at_op(",")) { take(); continue; }
            expect_op("]");
            break;
          }
          return e;
        }
        break;
      default:
        break;
    }
    throw Error(ErrorCode::ParseError, t.span, "expected expression, found " + describe(t));
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<FuncDef> parse_pylite(std::string_view source) {
  return detail::Parser(source).parse_file();
}

}  // namespace futra::pylite
