#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "futra/error.hpp"

namespace futra {

struct Token {
  enum class Kind { Ident, Int, Float, Str, True, False, Nil, LParen, RParen, Comma, End };

  Kind kind;
  SourceSpan span;
  std::string text;        // identifier name or decoded string value
  std::int64_t int_val = 0;
  double float_val = 0.0;
};

// PhySL tokens: identifiers, number and string literals, punctuation
// `( ) ,`, keywords true/false/nil. `//` comments run to end of line.
inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;

  auto make_span = [&](int l, int c, std::size_t len) {
    return SourceSpan{l, c, static_cast<int>(len)};
  };
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(c);
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') {
        advance(src[i]);
        ++i;
      }
      continue;
    }
    int tl = line, tc = col;
    if (c == '(' || c == ')' || c == ',') {
      Token t;
      t.kind = c == '(' ? Token::Kind::LParen : c == ')' ? Token::Kind::RParen : Token::Kind::Comma;
      t.span = make_span(tl, tc, 1);
      out.push_back(t);
      advance(c);
      ++i;
      continue;
    }
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_') {
      std::size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        advance(src[i]);
        ++i;
      }
      std::string word(src.substr(start, i - start));
      Token t;
      t.span = make_span(tl, tc, i - start);
      if (word == "true") t.kind = Token::Kind::True;
      else if (word == "false") t.kind = Token::Kind::False;
      else if (word == "nil") t.kind = Token::Kind::Nil;
      else {
        t.kind = Token::Kind::Ident;
        t.text = std::move(word);
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t start = i;
      bool is_float = false;
      while (i < src.size() && src[i] >= '0' && src[i] <= '9') { advance(src[i]); ++i; }
      if (i < src.size() && src[i] == '.') {
        is_float = true;
        advance(src[i]); ++i;
        while (i < src.size() && src[i] >= '0' && src[i] <= '9') { advance(src[i]); ++i; }
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t save = i;
        int save_line = line, save_col = col;
        advance(src[i]); ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) { advance(src[i]); ++i; }
        if (i < src.size() && src[i] >= '0' && src[i] <= '9') {
          is_float = true;
          while (i < src.size() && src[i] >= '0' && src[i] <= '9') { advance(src[i]); ++i; }
        } else {  // not an exponent after all
          i = save;
          line = save_line;
          col = save_col;
        }
      }
      std::string_view num = src.substr(start, i - start);
      Token t;
      t.span = make_span(tl, tc, num.size());
      if (is_float) {
        t.kind = Token::Kind::Float;
        auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), t.float_val);
        if (ec != std::errc{} || end != num.data() + num.size())
          throw Error(ErrorCode::LexError, t.span, "malformed float literal '" + std::string(num) + "'");
      } else {
        t.kind = Token::Kind::Int;
        auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), t.int_val);
        if (ec == std::errc::result_out_of_range)
          throw Error(ErrorCode::LexError, t.span, "integer literal out of range '" + std::string(num) + "'");
        if (ec != std::errc{} || end != num.data() + num.size())
          throw Error(ErrorCode::LexError, t.span, "malformed integer literal '" + std::string(num) + "'");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      advance(c);
      ++i;
      std::string value;
      bool closed = false;
      std::size_t start = i;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance(d);
          ++i;
          closed = true;
          break;
        }
        if (d == '\n') break;  // strings may not span lines
        if (d == '\\') {
          if (i + 1 >= src.size())
            throw Error(ErrorCode::LexError, make_span(tl, tc, i - start), "unterminated escape");
          char e = src[i + 1];
          switch (e) {
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            default:
              throw Error(ErrorCode::LexError, make_span(line, col, 2),
                          std::string("unknown escape '\\") + e + "'");
          }
          advance(d);
          advance(e);
          i += 2;
          continue;
        }
        value += d;
        advance(d);
        ++i;
      }
      if (!closed)
        throw Error(ErrorCode::LexError, make_span(tl, tc, i - start + 1), "unterminated string literal");
      Token t;
      t.kind = Token::Kind::Str;
      t.span = make_span(tl, tc, i - start + 1);
      t.text = std::move(value);
      out.push_back(std::move(t));
      continue;
    }
    throw Error(ErrorCode::LexError, make_span(tl, tc, 1),
                std::string("stray character '") + c + "'");
  }
  Token end;
  end.kind = Token::Kind::End;
  end.span = make_span(line, col, 0);
  out.push_back(end);
  return out;
}

}  // namespace futra
