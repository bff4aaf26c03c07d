#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "futra/datum.hpp"
#include "futra/error.hpp"
#include "futra/rng.hpp"

// Deterministic numeric kernels shared by every primitive. All kernels are
// serial and traverse storage in row-major index order; parallelism exists
// only between execution-tree nodes, never inside a kernel. This is what
// makes parallel-vs-sequential bitwise equality a testable contract.

namespace futra::kernels {

enum class BinOp { Add, Sub, Mul, Div };
enum class UnOp { Neg, Exp, Log };
enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

namespace detail {

inline double apply_bin(BinOp op, double a, double b) {
  switch (op) {
    case BinOp::Add: return a + b;
    case BinOp::Sub: return a - b;
    case BinOp::Mul: return a * b;
    case BinOp::Div: return a / b;  // IEEE inf/NaN, never an error
  }
  return 0.0;
}

inline std::int64_t wrap_int(BinOp op, std::int64_t a, std::int64_t b) {
  auto ua = static_cast<std::uint64_t>(a);
  auto ub = static_cast<std::uint64_t>(b);
  std::uint64_t r = 0;
  switch (op) {
    case BinOp::Add: r = ua + ub; break;
    case BinOp::Sub: r = ua - ub; break;
    case BinOp::Mul: r = ua * ub; break;
    case BinOp::Div: r = 0; break;  // unreachable; int division is float division
  }
  return static_cast<std::int64_t>(r);
}

[[noreturn]] inline void type_error(SourceSpan span, const std::string& what) {
  throw Error(ErrorCode::TypeError, span, what);
}

}  // namespace detail

// Elementwise arithmetic with scalar broadcast. Legal pairs: scalar-scalar,
// scalar-array either way, and equal-shape array-array. Int op Int stays Int
// except division, which is always performed in binary64.
inline Datum broadcast_elementwise(BinOp op, const Datum& a, const Datum& b, SourceSpan span = {}) {
  if (!a.is_numeric() || !b.is_numeric())
    detail::type_error(span, std::string("expected numeric operands, got ") + a.tag_name() +
                                 " and " + b.tag_name());

  if (a.is_scalar_number() && b.is_scalar_number()) {
    if (a.is_int() && b.is_int() && op != BinOp::Div)
      return Datum::integer(detail::wrap_int(op, a.as_int(), b.as_int()));
    return Datum::real(detail::apply_bin(op, a.scalar_value(), b.scalar_value()));
  }

  auto combine = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = detail::apply_bin(op, xs[i], ys[i]);
    return out;
  };
  auto map_scalar = [&](double s, const std::vector<double>& xs, bool scalar_left) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      out[i] = scalar_left ? detail::apply_bin(op, s, xs[i]) : detail::apply_bin(op, xs[i], s);
    return out;
  };

  if (a.is_scalar_number()) {
    if (b.is_vector()) return Datum::vector(map_scalar(a.scalar_value(), b.as_vector().elems, true));
    const auto& m = b.as_matrix();
    return Datum::matrix(m.rows, m.cols, map_scalar(a.scalar_value(), m.elems, true));
  }
  if (b.is_scalar_number()) {
    if (a.is_vector()) return Datum::vector(map_scalar(b.scalar_value(), a.as_vector().elems, false));
    const auto& m = a.as_matrix();
    return Datum::matrix(m.rows, m.cols, map_scalar(b.scalar_value(), m.elems, false));
  }
  if (a.is_vector() && b.is_vector()) {
    const auto& x = a.as_vector().elems;
    const auto& y = b.as_vector().elems;
    if (x.size() != y.size())
      throw Error(ErrorCode::ShapeMismatch, span,
                  "elementwise shapes differ: " + a.shape().str() + " vs " + b.shape().str());
    return Datum::vector(combine(x, y));
  }
  if (a.is_matrix() && b.is_matrix()) {
    const auto& x = a.as_matrix();
    const auto& y = b.as_matrix();
    if (x.rows != y.rows || x.cols != y.cols)
      throw Error(ErrorCode::ShapeMismatch, span,
                  "elementwise shapes differ: " + a.shape().str() + " vs " + b.shape().str());
    return Datum::matrix(x.rows, x.cols, combine(x.elems, y.elems));
  }
  throw Error(ErrorCode::ShapeMismatch, span,
              "elementwise shapes differ: " + a.shape().str() + " vs " + b.shape().str());
}

// Contractions. Every output element is a serial left-to-right sum over the
// contraction index.
inline Datum dot(const Datum& a, const Datum& b, SourceSpan span = {}) {
  if (a.is_vector() && b.is_vector()) {
    const auto& x = a.as_vector().elems;
    const auto& y = b.as_vector().elems;
    if (x.size() != y.size())
      throw Error(ErrorCode::ShapeMismatch, span,
                  "dot: vector lengths differ: " + a.shape().str() + " vs " + b.shape().str());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return Datum::real(acc);
  }
  if (a.is_matrix() && b.is_vector()) {
    const auto& m = a.as_matrix();
    const auto& v = b.as_vector().elems;
    if (m.cols != v.size())
      throw Error(ErrorCode::ShapeMismatch, span,
                  "dot: " + a.shape().str() + " by " + b.shape().str());
    std::vector<double> out(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < m.cols; ++c) acc += m.at(r, c) * v[c];
      out[r] = acc;
    }
    return Datum::vector(std::move(out));
  }
  if (a.is_vector() && b.is_matrix()) {
    const auto& v = a.as_vector().elems;
    const auto& m = b.as_matrix();
    if (v.size() != m.rows)
      throw Error(ErrorCode::ShapeMismatch, span,
                  "dot: " + a.shape().str() + " by " + b.shape().str());
    std::vector<double> out(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < m.rows; ++r) acc += v[r] * m.at(r, c);
      out[c] = acc;
    }
    return Datum::vector(std::move(out));
  }
  if (a.is_matrix() && b.is_matrix()) {
    const auto& x = a.as_matrix();
    const auto& y = b.as_matrix();
    if (x.cols != y.rows)
      throw Error(ErrorCode::ShapeMismatch, span,
                  "dot: " + a.shape().str() + " by " + b.shape().str());
    std::vector<double> out(x.rows * y.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r)
      for (std::size_t c = 0; c < y.cols; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < x.cols; ++k) acc += x.at(r, k) * y.at(k, c);
        out[r * y.cols + c] = acc;
      }
    return Datum::matrix(x.rows, y.cols, std::move(out));
  }
  detail::type_error(span, std::string("dot expects vectors or matrices, got ") + a.tag_name() +
                               " and " + b.tag_name());
}

inline Datum transpose(const Datum& a, SourceSpan span = {}) {
  if (a.is_vector()) return a;  // rank-1 transpose is the identity
  if (a.is_matrix()) {
    const auto& m = a.as_matrix();
    std::vector<double> out(m.elems.size());
    for (std::size_t r = 0; r < m.rows; ++r)
      for (std::size_t c = 0; c < m.cols; ++c) out[c * m.rows + r] = m.at(r, c);
    return Datum::matrix(m.cols, m.rows, std::move(out));
  }
  detail::type_error(span, std::string("transpose expects a vector or matrix, got ") + a.tag_name());
}

constexpr double kSingularPivot = 1e-12;

// Gaussian elimination with partial pivoting: largest absolute pivot, ties
// broken by the smallest row index; fixed elimination order.
inline Datum solve(const Datum& a, const Datum& b, SourceSpan span = {}) {
  if (!a.is_matrix()) detail::type_error(span, "solve expects a square matrix on the left");
  const auto& am = a.as_matrix();
  if (am.rows != am.cols)
    throw Error(ErrorCode::ShapeMismatch, span, "solve: matrix is " + a.shape().str() + ", not square");
  const std::size_t n = am.rows;

  std::size_t rhs_cols;
  bool vector_rhs;
  if (b.is_vector()) {
    vector_rhs = true;
    rhs_cols = 1;
    if (b.as_vector().elems.size() != n)
      throw Error(ErrorCode::ShapeMismatch, span,
                  "solve: rhs length " + b.shape().str() + " does not match " + a.shape().str());
  } else if (b.is_matrix()) {
    vector_rhs = false;
    rhs_cols = b.as_matrix().cols;
    if (b.as_matrix().rows != n)
      throw Error(ErrorCode::ShapeMismatch, span,
                  "solve: rhs is " + b.shape().str() + ", expected " + std::to_string(n) + " rows");
  } else {
    detail::type_error(span, std::string("solve expects a vector or matrix rhs, got ") + b.tag_name());
  }

  std::vector<double> lhs = am.elems;
  std::vector<double> rhs(n * rhs_cols);
  if (vector_rhs) {
    rhs = b.as_vector().elems;
  } else {
    rhs = b.as_matrix().elems;
  }
  auto L = [&](std::size_t r, std::size_t c) -> double& { return lhs[r * n + c]; };
  auto R = [&](std::size_t r, std::size_t c) -> double& { return rhs[r * rhs_cols + c]; };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::fabs(L(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      double m = std::fabs(L(r, k));
      if (m > best) {  // strict: ties keep the smallest row index
        best = m;
        pivot = r;
      }
    }
    if (best < kSingularPivot)
      throw Error(ErrorCode::Singular, span,
                  "solve: pivot " + format_double(best) + " below threshold at column " +
                      std::to_string(k));
    if (pivot != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(L(k, c), L(pivot, c));
      for (std::size_t c = 0; c < rhs_cols; ++c) std::swap(R(k, c), R(pivot, c));
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      double f = L(r, k) / L(k, k);
      if (f == 0.0) continue;
      L(r, k) = 0.0;
      for (std::size_t c = k + 1; c < n; ++c) L(r, c) -= f * L(k, c);
      for (std::size_t c = 0; c < rhs_cols; ++c) R(r, c) -= f * R(k, c);
    }
  }
  for (std::size_t rk = n; rk-- > 0;) {
    for (std::size_t c = 0; c < rhs_cols; ++c) {
      double acc = R(rk, c);
      for (std::size_t j = rk + 1; j < n; ++j) acc -= L(rk, j) * R(j, c);
      R(rk, c) = acc / L(rk, rk);
    }
  }
  if (vector_rhs) return Datum::vector(std::move(rhs));
  return Datum::matrix(n, rhs_cols, std::move(rhs));
}

inline Datum elementwise_unary(UnOp op, const Datum& a, SourceSpan span = {}) {
  auto f = [op](double x) {
    switch (op) {
      case UnOp::Neg: return -x;
      case UnOp::Exp: return std::exp(x);
      case UnOp::Log: return std::log(x);
    }
    return 0.0;
  };
  switch (a.tag()) {
    case Datum::Tag::Int:
      if (op == UnOp::Neg) return Datum::integer(-a.as_int());
      return Datum::real(f(static_cast<double>(a.as_int())));
    case Datum::Tag::Float:
      return Datum::real(f(a.as_float()));
    case Datum::Tag::Vector: {
      std::vector<double> out(a.as_vector().elems);
      for (auto& x : out) x = f(x);
      return Datum::vector(std::move(out));
    }
    case Datum::Tag::Matrix: {
      const auto& m = a.as_matrix();
      std::vector<double> out(m.elems);
      for (auto& x : out) x = f(x);
      return Datum::matrix(m.rows, m.cols, std::move(out));
    }
    default:
      detail::type_error(span, std::string("expected a numeric operand, got ") + a.tag_name());
  }
}

// Scalar comparisons. Int compares with Float as Float; arrays are not
// comparable (no mask values in this language).
inline Datum compare(CmpOp op, const Datum& a, const Datum& b, SourceSpan span = {}) {
  auto decide = [op](auto x, auto y) {
    switch (op) {
      case CmpOp::Lt: return x < y;
      case CmpOp::Le: return x <= y;
      case CmpOp::Gt: return x > y;
      case CmpOp::Ge: return x >= y;
      case CmpOp::Eq: return x == y;
      case CmpOp::Ne: return x != y;
    }
    return false;
  };
  if (a.is_scalar_number() && b.is_scalar_number()) {
    if (a.is_int() && b.is_int()) return Datum::boolean(decide(a.as_int(), b.as_int()));
    return Datum::boolean(decide(a.scalar_value(), b.scalar_value()));
  }
  if (op == CmpOp::Eq || op == CmpOp::Ne) {
    bool eq;
    if (a.is_bool() && b.is_bool()) eq = a.as_bool() == b.as_bool();
    else if (a.is_str() && b.is_str()) eq = a.as_str() == b.as_str();
    else if (a.is_nil() && b.is_nil()) eq = true;
    else
      detail::type_error(span, std::string("cannot compare ") + a.tag_name() + " with " + b.tag_name());
    return Datum::boolean(op == CmpOp::Eq ? eq : !eq);
  }
  detail::type_error(span, std::string("ordered comparison needs scalar numbers, got ") +
                               a.tag_name() + " and " + b.tag_name());
}

inline Datum identity(std::int64_t n, SourceSpan span = {}) {
  if (n < 0) throw Error(ErrorCode::NegativeExtent, span, "identity: negative size " + std::to_string(n));
  auto un = static_cast<std::size_t>(n);
  std::vector<double> out(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i) out[i * un + i] = 1.0;
  return Datum::matrix(un, un, std::move(out));
}

inline Datum zeros(const Shape& shape, SourceSpan span = {}) {
  (void)span;
  if (shape.rank == 0) return Datum::real(0.0);
  if (shape.rank == 1) return Datum::vector(std::vector<double>(shape.dims[0], 0.0));
  return Datum::matrix(shape.dims[0], shape.dims[1],
                       std::vector<double>(shape.dims[0] * shape.dims[1], 0.0));
}

inline Datum diag(const Datum& v, SourceSpan span = {}) {
  if (!v.is_vector()) detail::type_error(span, std::string("diag expects a vector, got ") + v.tag_name());
  const auto& x = v.as_vector().elems;
  std::vector<double> out(x.size() * x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) out[i * x.size() + i] = x[i];
  return Datum::matrix(x.size(), x.size(), std::move(out));
}

// Serial row-major sum of all elements, as Float.
inline Datum sum(const Datum& a, SourceSpan span = {}) {
  switch (a.tag()) {
    case Datum::Tag::Int: return Datum::real(static_cast<double>(a.as_int()));
    case Datum::Tag::Float: return Datum::real(a.as_float());
    case Datum::Tag::Vector: {
      double acc = 0.0;
      for (double x : a.as_vector().elems) acc += x;
      return Datum::real(acc);
    }
    case Datum::Tag::Matrix: {
      double acc = 0.0;
      for (double x : a.as_matrix().elems) acc += x;
      return Datum::real(acc);
    }
    default:
      detail::type_error(span, std::string("sum expects a numeric value, got ") + a.tag_name());
  }
}

inline Datum shape_of(const Datum& a, std::int64_t axis, SourceSpan span = {}) {
  if (a.is_vector()) {
    if (axis != 0)
      throw Error(ErrorCode::AxisOutOfRange, span, "axis " + std::to_string(axis) + " for a vector");
    return Datum::integer(static_cast<std::int64_t>(a.as_vector().elems.size()));
  }
  if (a.is_matrix()) {
    if (axis != 0 && axis != 1)
      throw Error(ErrorCode::AxisOutOfRange, span, "axis " + std::to_string(axis) + " for a matrix");
    const auto& m = a.as_matrix();
    return Datum::integer(static_cast<std::int64_t>(axis == 0 ? m.rows : m.cols));
  }
  detail::type_error(span, std::string("shape expects a vector or matrix, got ") + a.tag_name());
}

// Row-major fill from the splitmix64 stream seeded exactly by `seed`.
inline Datum random_fill(const Shape& shape, std::uint64_t seed, SourceSpan span = {}) {
  (void)span;
  SplitMix64 rng(seed);
  if (shape.rank == 0) return Datum::real(rng.next_unit());
  if (shape.rank == 1) {
    std::vector<double> out(shape.dims[0]);
    for (auto& x : out) x = rng.next_unit();
    return Datum::vector(std::move(out));
  }
  std::vector<double> out(shape.dims[0] * shape.dims[1]);
  for (auto& x : out) x = rng.next_unit();
  return Datum::matrix(shape.dims[0], shape.dims[1], std::move(out));
}

// Shape argument as it appears at the language level: a list of 0-2
// non-negative integer extents.
inline Shape shape_from_datum(const Datum& d, SourceSpan span = {}) {
  if (!d.is_list()) detail::type_error(span, std::string("expected a shape list, got ") + d.tag_name());
  const auto& items = d.as_list();
  if (items.size() > 2)
    throw Error(ErrorCode::AxisOutOfRange, span,
                "shape list has " + std::to_string(items.size()) + " extents, at most 2 supported");
  Shape s;
  s.rank = static_cast<int>(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].is_int())
      detail::type_error(span, std::string("shape extents must be ints, got ") + items[i].tag_name());
    std::int64_t e = items[i].as_int();
    if (e < 0) throw Error(ErrorCode::NegativeExtent, span, "negative extent " + std::to_string(e));
    s.dims[i] = static_cast<std::size_t>(e);
  }
  return s;
}

}  // namespace futra::kernels
