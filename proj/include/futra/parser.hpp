#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "futra/ast.hpp"
#include "futra/lexer.hpp"

namespace futra {

// Recursive-descent parser for the PhySL grammar:
//   program := expr
//   expr    := apply | identifier | literal
//   apply   := identifier '(' [expr (',' expr)*] ')'
// Trailing input after the root expression is an error.
class Parser {
 public:
  explicit Parser(std::string_view source) : tokens_(lex(source)) {}

  Ast parse_program() {
    Ast root = parse_expr();
    if (peek().kind != Token::Kind::End)
      throw Error(ErrorCode::ParseError, peek().span, "expected end of input, found " + describe(peek()));
    return root;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::Ident: return "identifier '" + t.text + "'";
      case Token::Kind::Int: return "integer literal";
      case Token::Kind::Float: return "float literal";
      case Token::Kind::Str: return "string literal";
      case Token::Kind::True: return "'true'";
      case Token::Kind::False: return "'false'";
      case Token::Kind::Nil: return "'nil'";
      case Token::Kind::LParen: return "'('";
      case Token::Kind::RParen: return "')'";
      case Token::Kind::Comma: return "','";
      case Token::Kind::End: return "end of input";
    }
    return "?";
  }

  Ast parse_expr() {
    const Token& t = take();
    switch (t.kind) {
      case Token::Kind::Int: return Ast::lit_int(t.int_val, t.span);
      case Token::Kind::Float: return Ast::lit_float(t.float_val, t.span);
      case Token::Kind::Str: return Ast::lit_str(t.text, t.span);
      case Token::Kind::True: return Ast::lit_bool(true, t.span);
      case Token::Kind::False: return Ast::lit_bool(false, t.span);
      case Token::Kind::Nil: return Ast::lit_nil(t.span);
      case Token::Kind::Ident: {
        if (peek().kind != Token::Kind::LParen) return Ast::ident(t.text, t.span);
        take();  // '('
        std::vector<Ast> args;
        if (peek().kind == Token::Kind::RParen) {
          take();
          return Ast::apply(t.text, std::move(args), t.span);
        }
        while (true) {
          args.push_back(parse_expr());
          const Token& sep = take();
          if (sep.kind == Token::Kind::RParen) break;
          if (sep.kind != Token::Kind::Comma)
            throw Error(ErrorCode::ParseError, sep.span, "expected ',' or ')', found " + describe(sep));
          if (peek().kind == Token::Kind::RParen)
            throw Error(ErrorCode::ParseError, peek().span, "expected expression, found ')' (no trailing commas)");
        }
        return Ast::apply(t.text, std::move(args), t.span);
      }
      default:
        throw Error(ErrorCode::ParseError, t.span, "expected expression, found " + describe(t));
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline Ast parse(std::string_view source) { return Parser(source).parse_program(); }

}  // namespace futra
