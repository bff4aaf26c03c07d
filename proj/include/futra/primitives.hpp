#pragma once

#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "futra/datum.hpp"
#include "futra/error.hpp"
#include "futra/exec_tree.hpp"
#include "futra/kernels.hpp"

// Executable semantics of the pure primitives plus the purity/arity tables
// the compiler and executor key off. Sequencing forms (block/if/while/define/
// store/store_row) and user calls are driven by the evaluator itself.

namespace futra {

// Side-effect partition: a pure kind may evaluate its arguments concurrently;
// a sequencing kind orders its children and may touch frame slots.
inline bool is_pure_kind(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Block:
    case PrimitiveKind::If:
    case PrimitiveKind::While:
    case PrimitiveKind::Define:
    case PrimitiveKind::Store:
    case PrimitiveKind::StoreRow:
      return false;
    default:
      return true;
  }
}

struct ArityRange {
  int min;
  int max;  // -1 = unbounded
};

// Child-count contract per kind, checked at compile time. Binding forms count
// the children remaining after the compiler consumes name arguments.
inline ArityRange kind_arity(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::ConstLit: return {0, 0};
    case PrimitiveKind::VarRef: return {0, 0};
    case PrimitiveKind::Block: return {1, -1};
    case PrimitiveKind::If: return {2, 3};
    case PrimitiveKind::While: return {2, 2};
    case PrimitiveKind::Define: return {1, 1};
    case PrimitiveKind::Store: return {1, 1};
    case PrimitiveKind::StoreRow: return {2, 2};
    case PrimitiveKind::UserCall: return {0, -1};
    case PrimitiveKind::Neg:
    case PrimitiveKind::Transpose:
    case PrimitiveKind::Exp:
    case PrimitiveKind::Log:
    case PrimitiveKind::Sum:
    case PrimitiveKind::Identity:
    case PrimitiveKind::Zeros:
    case PrimitiveKind::Diag:
    case PrimitiveKind::VectorMake:
    case PrimitiveKind::MatrixMake:
    case PrimitiveKind::SleepMs:
      return {1, 1};
    case PrimitiveKind::ListMake: return {0, -1};
    case PrimitiveKind::Add:
    case PrimitiveKind::Sub:
    case PrimitiveKind::Mul:
    case PrimitiveKind::Div:
    case PrimitiveKind::Lt:
    case PrimitiveKind::Le:
    case PrimitiveKind::Gt:
    case PrimitiveKind::Ge:
    case PrimitiveKind::Eq:
    case PrimitiveKind::Ne:
    case PrimitiveKind::Dot:
    case PrimitiveKind::Solve:
    case PrimitiveKind::ShapeOf:
    case PrimitiveKind::Random:
    case PrimitiveKind::SliceRow:
      return {2, 2};
    case PrimitiveKind::Count_: break;
  }
  return {0, -1};
}

namespace detail {

inline std::int64_t require_int(const Datum& d, SourceSpan span, const char* what) {
  if (!d.is_int())
    throw Error(ErrorCode::TypeError, span, std::string(what) + " must be an int, got " + d.tag_name());
  return d.as_int();
}

inline double item_as_double(const Datum& d, SourceSpan span) {
  if (d.is_int()) return static_cast<double>(d.as_int());
  if (d.is_float()) return d.as_float();
  throw Error(ErrorCode::TypeError, span,
              std::string("array elements must be numbers, got ") + d.tag_name());
}

}  // namespace detail

// Applies a pure primitive to already resolved argument values. Everything
// here is a reentrant function of its inputs; randomness is seed-explicit.
inline Datum apply_pure(PrimitiveKind k, const std::vector<Datum>& a, SourceSpan span) {
  using kernels::BinOp;
  using kernels::CmpOp;
  using kernels::UnOp;
  switch (k) {
    case PrimitiveKind::Add: return kernels::broadcast_elementwise(BinOp::Add, a[0], a[1], span);
    case PrimitiveKind::Sub: return kernels::broadcast_elementwise(BinOp::Sub, a[0], a[1], span);
    case PrimitiveKind::Mul: return kernels::broadcast_elementwise(BinOp::Mul, a[0], a[1], span);
    case PrimitiveKind::Div: return kernels::broadcast_elementwise(BinOp::Div, a[0], a[1], span);
    case PrimitiveKind::Neg: return kernels::elementwise_unary(UnOp::Neg, a[0], span);
    case PrimitiveKind::Exp: return kernels::elementwise_unary(UnOp::Exp, a[0], span);
    case PrimitiveKind::Log: return kernels::elementwise_unary(UnOp::Log, a[0], span);
    case PrimitiveKind::Lt: return kernels::compare(CmpOp::Lt, a[0], a[1], span);
    case PrimitiveKind::Le: return kernels::compare(CmpOp::Le, a[0], a[1], span);
    case PrimitiveKind::Gt: return kernels::compare(CmpOp::Gt, a[0], a[1], span);
    case PrimitiveKind::Ge: return kernels::compare(CmpOp::Ge, a[0], a[1], span);
    case PrimitiveKind::Eq: return kernels::compare(CmpOp::Eq, a[0], a[1], span);
    case PrimitiveKind::Ne: return kernels::compare(CmpOp::Ne, a[0], a[1], span);
    case PrimitiveKind::Dot: return kernels::dot(a[0], a[1], span);
    case PrimitiveKind::Transpose: return kernels::transpose(a[0], span);
    case PrimitiveKind::Solve: return kernels::solve(a[0], a[1], span);
    case PrimitiveKind::Sum: return kernels::sum(a[0], span);
    case PrimitiveKind::Identity:
      return kernels::identity(detail::require_int(a[0], span, "identity size"), span);
    case PrimitiveKind::Zeros: return kernels::zeros(kernels::shape_from_datum(a[0], span), span);
    case PrimitiveKind::Diag: return kernels::diag(a[0], span);
    case PrimitiveKind::ShapeOf:
      return kernels::shape_of(a[0], detail::require_int(a[1], span, "axis"), span);
    case PrimitiveKind::Random: {
      Shape shape = kernels::shape_from_datum(a[0], span);
      std::int64_t seed = detail::require_int(a[1], span, "seed");
      return kernels::random_fill(shape, static_cast<std::uint64_t>(seed), span);
    }
    case PrimitiveKind::ListMake: return Datum::list(a);
    case PrimitiveKind::VectorMake: {
      if (!a[0].is_list())
        throw Error(ErrorCode::TypeError, span,
                    std::string("vector expects a list, got ") + a[0].tag_name());
      const auto& items = a[0].as_list();
      std::vector<double> elems;
      elems.reserve(items.size());
      for (const auto& it : items) elems.push_back(detail::item_as_double(it, span));
      return Datum::vector(std::move(elems));
    }
    case PrimitiveKind::MatrixMake: {
      if (!a[0].is_list())
        throw Error(ErrorCode::TypeError, span,
                    std::string("matrix expects a list of lists, got ") + a[0].tag_name());
      const auto& rows = a[0].as_list();
      std::vector<double> elems;
      std::size_t cols = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_list())
          throw Error(ErrorCode::TypeError, span,
                      std::string("matrix row must be a list, got ") + rows[r].tag_name());
        const auto& row = rows[r].as_list();
        if (r == 0) {
          cols = row.size();
          elems.reserve(rows.size() * cols);
        } else if (row.size() != cols) {
          throw Error(ErrorCode::RaggedMatrix, span,
                      "matrix row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                          " elements, expected " + std::to_string(cols));
        }
        for (const auto& it : row) elems.push_back(detail::item_as_double(it, span));
      }
      return Datum::matrix(rows.size(), cols, std::move(elems));
    }
    case PrimitiveKind::SliceRow: {
      if (!a[0].is_matrix())
        throw Error(ErrorCode::TypeError, span,
                    std::string("slice_row expects a matrix, got ") + a[0].tag_name());
      const auto& m = a[0].as_matrix();
      std::int64_t i = detail::require_int(a[1], span, "row index");
      if (i < 0 || static_cast<std::size_t>(i) >= m.rows)
        throw Error(ErrorCode::RowOutOfRange, span,
                    "row " + std::to_string(i) + " of a " + std::to_string(m.rows) + "-row matrix");
      auto begin = m.elems.begin() + static_cast<std::ptrdiff_t>(i) * static_cast<std::ptrdiff_t>(m.cols);
      return Datum::vector(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(m.cols)));
    }
    case PrimitiveKind::SleepMs: {
      std::int64_t ms = detail::require_int(a[0], span, "sleep duration");
      std::this_thread::sleep_for(std::chrono::milliseconds(ms));
      return Datum::integer(ms);
    }
    default:
      throw Error(ErrorCode::TypeError, span,
                  std::string("'") + primitive_head(k) + "' is not a pure primitive");
  }
}

// Rebinds a matrix slot to a copy with one row replaced; the original datum
// is unchanged for any prior reader.
inline Datum store_row_value(const Datum& current, const Datum& index, const Datum& row,
                             SourceSpan span) {
  if (!current.is_matrix())
    throw Error(ErrorCode::TypeError, span,
                std::string("store_row target must hold a matrix, got ") + current.tag_name());
  const auto& m = current.as_matrix();
  std::int64_t i = detail::require_int(index, span, "row index");
  if (i < 0 || static_cast<std::size_t>(i) >= m.rows)
    throw Error(ErrorCode::RowOutOfRange, span,
                "row " + std::to_string(i) + " of a " + std::to_string(m.rows) + "-row matrix");
  if (!row.is_vector())
    throw Error(ErrorCode::TypeError, span,
                std::string("store_row value must be a vector, got ") + row.tag_name());
  const auto& v = row.as_vector().elems;
  if (v.size() != m.cols)
    throw Error(ErrorCode::ShapeMismatch, span,
                "store_row: row length " + std::to_string(v.size()) + " vs " +
                    std::to_string(m.cols) + " columns");
  std::vector<double> elems = m.elems;
  std::copy(v.begin(), v.end(), elems.begin() + static_cast<std::ptrdiff_t>(i) * static_cast<std::ptrdiff_t>(m.cols));
  return Datum::matrix(m.rows, m.cols, std::move(elems));
}

// Condition coercion for if/while: Bool, or Int 0/1.
inline bool coerce_condition(const Datum& d, SourceSpan span) {
  if (d.is_bool()) return d.as_bool();
  if (d.is_int() && (d.as_int() == 0 || d.as_int() == 1)) return d.as_int() == 1;
  throw Error(ErrorCode::TypeError, span,
              std::string("condition must be a bool (or int 0/1), got ") + d.tag_name());
}

}  // namespace futra
