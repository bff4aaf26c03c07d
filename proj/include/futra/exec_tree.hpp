#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "futra/ast.hpp"
#include "futra/datum.hpp"
#include "futra/perf.hpp"

namespace futra {

// One enumerator per primitive operation or control form, plus variable
// references, literal constants and user-kernel calls.
enum class PrimitiveKind : std::uint8_t {
  // values
  ConstLit, VarRef,
  // sequencing / binding forms
  Block, If, While, Define, Store, StoreRow,
  // user kernels
  UserCall,
  // arithmetic
  Add, Sub, Mul, Div, Neg,
  // comparisons
  Lt, Le, Gt, Ge, Eq, Ne,
  // linear algebra and builders
  Dot, Transpose, Solve, Exp, Log, Sum, Identity, Zeros, Diag, ShapeOf, Random,
  // containers
  ListMake, VectorMake, MatrixMake, SliceRow,
  // diagnostics (used by scheduling tests and demos)
  SleepMs,
  Count_,
};

constexpr int kPrimitiveKindCount = static_cast<int>(PrimitiveKind::Count_);

inline const char* primitive_head(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::ConstLit: return "const";
    case PrimitiveKind::VarRef: return "var";
    case PrimitiveKind::Block: return "block";
    case PrimitiveKind::If: return "if";
    case PrimitiveKind::While: return "while";
    case PrimitiveKind::Define: return "define";
    case PrimitiveKind::Store: return "store";
    case PrimitiveKind::StoreRow: return "store_row";
    case PrimitiveKind::UserCall: return "call";
    case PrimitiveKind::Add: return "add";
    case PrimitiveKind::Sub: return "sub";
    case PrimitiveKind::Mul: return "mul";
    case PrimitiveKind::Div: return "div";
    case PrimitiveKind::Neg: return "neg";
    case PrimitiveKind::Lt: return "lt";
    case PrimitiveKind::Le: return "le";
    case PrimitiveKind::Gt: return "gt";
    case PrimitiveKind::Ge: return "ge";
    case PrimitiveKind::Eq: return "eq";
    case PrimitiveKind::Ne: return "ne";
    case PrimitiveKind::Dot: return "dot";
    case PrimitiveKind::Transpose: return "transpose";
    case PrimitiveKind::Solve: return "solve";
    case PrimitiveKind::Exp: return "exp";
    case PrimitiveKind::Log: return "log";
    case PrimitiveKind::Sum: return "sum";
    case PrimitiveKind::Identity: return "identity";
    case PrimitiveKind::Zeros: return "zeros";
    case PrimitiveKind::Diag: return "diag";
    case PrimitiveKind::ShapeOf: return "shape";
    case PrimitiveKind::Random: return "random";
    case PrimitiveKind::ListMake: return "list";
    case PrimitiveKind::VectorMake: return "vector";
    case PrimitiveKind::MatrixMake: return "matrix";
    case PrimitiveKind::SliceRow: return "slice_row";
    case PrimitiveKind::SleepMs: return "sleep_ms";
    case PrimitiveKind::Count_: break;
  }
  return "?";
}

// Execution-tree node. The tree is acyclic; recursion goes through UserCall
// indirection to a compiled kernel, never node sharing. UserCall nodes account
// to the callee kernel's invocation counter cell, every other node owns one.
struct ExecNode {
  PrimitiveKind kind;
  std::vector<std::unique_ptr<ExecNode>> children;
  SourceSpan span;
  int node_id = -1;          // program-wide, pre-order
  CounterSet* counters = nullptr;
  CounterSet own_counters;

  // payloads
  Datum value;               // ConstLit
  int slot = -1;             // VarRef / Define / Store / StoreRow
  std::string name;          // variable or callee name, for reports
  int callee = -1;           // UserCall: kernel index

  // Display string used by dumps, counter tables and traces.
  std::string kind_label() const {
    if (kind == PrimitiveKind::VarRef) return "var:" + name;
    if (kind == PrimitiveKind::UserCall) return "call:" + name;
    return primitive_head(kind);
  }
};

// A user-defined function compiled as a unit.
struct CompiledKernel {
  std::string name;
  int param_count = 0;
  int frame_size = 0;        // number of variable slots
  std::unique_ptr<ExecNode> root;
  std::uint64_t source_hash = 0;
  int kernel_index = -1;

  // Invocation cell shared by every call site of this kernel (and by entry
  // invocations); carries its own id in the trace/node id space.
  CounterSet invocations;
  int invocation_cell_id = -1;
};

struct Program {
  std::vector<std::unique_ptr<CompiledKernel>> kernels;
  std::map<std::string, int> by_name;
  std::uint64_t source_hash = 0;
  int node_count = 0;        // ExecNodes across all kernels
  int cell_count = 0;        // node cells + kernel invocation cells

  const CompiledKernel* find(const std::string& name) const {
    auto it = by_name.find(name);
    return it == by_name.end() ? nullptr : kernels[it->second].get();
  }

  void for_each_node(const std::function<void(const CompiledKernel&, const ExecNode&)>& fn) const {
    for (const auto& k : kernels) {
      walk(*k, *k->root, fn);
    }
  }

  // Every counter cell: node-owned cells plus kernel invocation cells.
  void for_each_cell(
      const std::function<void(int id, const std::string& label, const CounterSet&)>& fn) const {
    for (const auto& k : kernels) {
      fn(k->invocation_cell_id, "call:" + k->name, k->invocations);
      walk(*k, *k->root, [&](const CompiledKernel&, const ExecNode& n) {
        if (n.counters == &n.own_counters) fn(n.node_id, n.kind_label(), n.own_counters);
      });
    }
  }

  void reset_counters() const {
    for (const auto& k : kernels) {
      const_cast<CounterSet&>(k->invocations).reset();
      walk(*k, *k->root, [&](const CompiledKernel&, const ExecNode& n) {
        const_cast<CounterSet&>(n.own_counters).reset();
      });
    }
  }

 private:
  static void walk(const CompiledKernel& k, const ExecNode& n,
                   const std::function<void(const CompiledKernel&, const ExecNode&)>& fn) {
    fn(k, n);
    for (const auto& c : n.children) walk(k, *c, fn);
  }
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace futra
