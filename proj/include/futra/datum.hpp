#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "futra/error.hpp"

namespace futra {

// Dense 1-D array of binary64.
struct VecData {
  std::vector<double> elems;
};

// Dense row-major 2-D array of binary64; elems.size() == rows * cols.
struct MatData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> elems;

  double at(std::size_t r, std::size_t c) const { return elems[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return elems[r * cols + c]; }
};

enum class Rank { Scalar = 0, Vector = 1, Matrix = 2 };

struct Shape {
  int rank = 0;             // 0, 1 or 2
  std::size_t dims[2] = {0, 0};

  friend bool operator==(const Shape&, const Shape&) = default;

  std::string str() const {
    if (rank == 0) return "scalar";
    if (rank == 1) return std::to_string(dims[0]);
    return std::to_string(dims[0]) + "x" + std::to_string(dims[1]);
  }
};

// Runtime value. Values are immutable after construction; heavy payloads are
// shared, so copying a Datum never copies array storage.
class Datum {
 public:
  enum class Tag { Nil, Bool, Int, Float, Str, List, Vector, Matrix };

  using ListData = std::vector<Datum>;

  Datum() : v_(std::monostate{}) {}
  static Datum nil() { return Datum(); }
  static Datum boolean(bool b) { return Datum(Repr(b)); }
  static Datum integer(std::int64_t i) { return Datum(Repr(i)); }
  static Datum real(double x) { return Datum(Repr(x)); }
  static Datum str(std::string s) { return Datum(Repr(std::move(s))); }
  static Datum list(ListData items) {
    return Datum(Repr(std::make_shared<const ListData>(std::move(items))));
  }
  static Datum vector(std::vector<double> elems) {
    return Datum(Repr(std::make_shared<const VecData>(VecData{std::move(elems)})));
  }
  static Datum matrix(std::size_t rows, std::size_t cols, std::vector<double> elems) {
    MatData m{rows, cols, std::move(elems)};
    return Datum(Repr(std::make_shared<const MatData>(std::move(m))));
  }
  static Datum matrix(MatData m) {
    return Datum(Repr(std::make_shared<const MatData>(std::move(m))));
  }

  Tag tag() const { return static_cast<Tag>(v_.index()); }

  bool is_nil() const { return tag() == Tag::Nil; }
  bool is_bool() const { return tag() == Tag::Bool; }
  bool is_int() const { return tag() == Tag::Int; }
  bool is_float() const { return tag() == Tag::Float; }
  bool is_str() const { return tag() == Tag::Str; }
  bool is_list() const { return tag() == Tag::List; }
  bool is_vector() const { return tag() == Tag::Vector; }
  bool is_matrix() const { return tag() == Tag::Matrix; }
  bool is_scalar_number() const { return is_int() || is_float(); }
  bool is_numeric() const { return is_int() || is_float() || is_vector() || is_matrix(); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  const ListData& as_list() const { return *std::get<std::shared_ptr<const ListData>>(v_); }
  const VecData& as_vector() const { return *std::get<std::shared_ptr<const VecData>>(v_); }
  const MatData& as_matrix() const { return *std::get<std::shared_ptr<const MatData>>(v_); }

  // Numeric scalar widened to double (Int promotes to Float).
  double scalar_value() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

  Shape shape() const {
    switch (tag()) {
      case Tag::Vector: return Shape{1, {as_vector().elems.size(), 0}};
      case Tag::Matrix: return Shape{2, {as_matrix().rows, as_matrix().cols}};
      default: return Shape{0, {0, 0}};
    }
  }

  const char* tag_name() const {
    switch (tag()) {
      case Tag::Nil: return "nil";
      case Tag::Bool: return "bool";
      case Tag::Int: return "int";
      case Tag::Float: return "float";
      case Tag::Str: return "str";
      case Tag::List: return "list";
      case Tag::Vector: return "vector";
      case Tag::Matrix: return "matrix";
    }
    return "?";
  }

 private:
  using Repr = std::variant<std::monostate, bool, std::int64_t, double, std::string,
                            std::shared_ptr<const ListData>, std::shared_ptr<const VecData>,
                            std::shared_ptr<const MatData>>;
  explicit Datum(Repr v) : v_(std::move(v)) {}
  Repr v_;
};

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

// Float literal form: shortest round-trip text guaranteed to re-lex as a
// float (always contains '.', 'e', or a non-finite spelling).
inline std::string format_float_literal(double x) {
  std::string s = format_double(x);
  if (s.find_first_of(".eE") == std::string::npos && std::isfinite(x)) s += ".0";
  return s;
}

// Bit-level equality, used by determinism checks. NaNs with equal payloads
// compare equal; +0.0 and -0.0 differ.
inline bool bits_equal(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, 8);
  std::memcpy(&ub, &b, 8);
  return ua == ub;
}

inline bool bitwise_equal(const Datum& a, const Datum& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Datum::Tag::Nil: return true;
    case Datum::Tag::Bool: return a.as_bool() == b.as_bool();
    case Datum::Tag::Int: return a.as_int() == b.as_int();
    case Datum::Tag::Float: return bits_equal(a.as_float(), b.as_float());
    case Datum::Tag::Str: return a.as_str() == b.as_str();
    case Datum::Tag::List: {
      const auto& x = a.as_list();
      const auto& y = b.as_list();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!bitwise_equal(x[i], y[i])) return false;
      return true;
    }
    case Datum::Tag::Vector: {
      const auto& x = a.as_vector().elems;
      const auto& y = b.as_vector().elems;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!bits_equal(x[i], y[i])) return false;
      return true;
    }
    case Datum::Tag::Matrix: {
      const auto& x = a.as_matrix();
      const auto& y = b.as_matrix();
      if (x.rows != y.rows || x.cols != y.cols) return false;
      for (std::size_t i = 0; i < x.elems.size(); ++i)
        if (!bits_equal(x.elems[i], y.elems[i])) return false;
      return true;
    }
  }
  return false;
}

inline std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

// Canonical printing: scalars plain, arrays as CSV lines, lists bracketed.
inline std::string to_display(const Datum& d) {
  switch (d.tag()) {
    case Datum::Tag::Nil: return "nil";
    case Datum::Tag::Bool: return d.as_bool() ? "true" : "false";
    case Datum::Tag::Int: return std::to_string(d.as_int());
    case Datum::Tag::Float: return format_float_literal(d.as_float());
    case Datum::Tag::Str: return d.as_str();
    case Datum::Tag::List: {
      std::string out = "[";
      const auto& items = d.as_list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += d.as_list()[i].is_str() ? escape_string(items[i].as_str()) : to_display(items[i]);
      }
      return out + "]";
    }
    case Datum::Tag::Vector: {
      std::string out;
      const auto& v = d.as_vector().elems;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
      }
      return out;
    }
    case Datum::Tag::Matrix: {
      std::string out;
      const auto& m = d.as_matrix();
      for (std::size_t r = 0; r < m.rows; ++r) {
        if (r) out += '\n';
        for (std::size_t c = 0; c < m.cols; ++c) {
          if (c) out += ',';
          out += format_double(m.at(r, c));
        }
      }
      return out;
    }
  }
  return "?";
}

}  // namespace futra
