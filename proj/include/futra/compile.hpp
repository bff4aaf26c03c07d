#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "futra/ast.hpp"
#include "futra/exec_tree.hpp"
#include "futra/pretty.hpp"
#include "futra/primitives.hpp"

// Compiles PhySL into execution trees. Names resolve lexically to flat
// per-invocation frame slots numbered at compile time; references to other
// top-level defines become user calls. Side-effecting forms are restricted to
// statement position, which is what lets the executor evaluate the arguments
// of pure nodes concurrently without races.

namespace futra {

namespace detail {

inline std::optional<PrimitiveKind> head_to_kind(const std::string& head) {
  static const std::map<std::string, PrimitiveKind, std::less<>> table = {
      {"block", PrimitiveKind::Block},       {"if", PrimitiveKind::If},
      {"while", PrimitiveKind::While},       {"define", PrimitiveKind::Define},
      {"store", PrimitiveKind::Store},       {"store_row", PrimitiveKind::StoreRow},
      {"add", PrimitiveKind::Add},           {"sub", PrimitiveKind::Sub},
      {"mul", PrimitiveKind::Mul},           {"div", PrimitiveKind::Div},
      {"neg", PrimitiveKind::Neg},           {"lt", PrimitiveKind::Lt},
      {"le", PrimitiveKind::Le},             {"gt", PrimitiveKind::Gt},
      {"ge", PrimitiveKind::Ge},             {"eq", PrimitiveKind::Eq},
      {"ne", PrimitiveKind::Ne},             {"dot", PrimitiveKind::Dot},
      {"transpose", PrimitiveKind::Transpose}, {"solve", PrimitiveKind::Solve},
      {"exp", PrimitiveKind::Exp},           {"log", PrimitiveKind::Log},
      {"sum", PrimitiveKind::Sum},           {"identity", PrimitiveKind::Identity},
      {"zeros", PrimitiveKind::Zeros},       {"diag", PrimitiveKind::Diag},
      {"shape", PrimitiveKind::ShapeOf},     {"random", PrimitiveKind::Random},
      {"list", PrimitiveKind::ListMake},     {"vector", PrimitiveKind::VectorMake},
      {"matrix", PrimitiveKind::MatrixMake}, {"slice_row", PrimitiveKind::SliceRow},
      {"sleep_ms", PrimitiveKind::SleepMs},
  };
  auto it = table.find(head);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct KernelSig {
  std::string name;
  int param_count;
  int index;
};

class KernelCompiler {
 public:
  KernelCompiler(const std::map<std::string, KernelSig>& sigs) : sigs_(sigs) {}

  std::unique_ptr<CompiledKernel> run(const std::string& name, const std::vector<std::string>& params,
                                      const Ast& body, SourceSpan def_span, int index) {
    auto kernel = std::make_unique<CompiledKernel>();
    kernel->name = name;
    kernel->param_count = static_cast<int>(params.size());
    kernel->kernel_index = index;
    scopes_.clear();
    scopes_.emplace_back();
    next_slot_ = 0;
    for (const auto& p : params) {
      if (lookup_local(p))
        throw Error(ErrorCode::ParseError, def_span, "duplicate parameter '" + p + "'");
      bind(p);
    }
    kernel->root = compile_expr(body, /*stmt_pos=*/true);
    kernel->frame_size = next_slot_;
    return kernel;
  }

 private:
  std::optional<int> lookup_local(const std::string& name) const {
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope)
      for (auto it = scope->rbegin(); it != scope->rend(); ++it)
        if (it->first == name) return it->second;
    return std::nullopt;
  }

  int bind(const std::string& name) {
    int slot = next_slot_++;
    scopes_.back().emplace_back(name, slot);
    return slot;
  }

  static std::unique_ptr<ExecNode> make_node(PrimitiveKind kind, SourceSpan span) {
    auto n = std::make_unique<ExecNode>();
    n->kind = kind;
    n->span = span;
    return n;
  }

  void check_arity(PrimitiveKind kind, std::size_t got, SourceSpan span) {
    ArityRange r = kind_arity(kind);
    if (static_cast<int>(got) < r.min || (r.max >= 0 && static_cast<int>(got) > r.max)) {
      std::string expected = r.max < 0 ? "at least " + std::to_string(r.min)
                           : r.min == r.max ? std::to_string(r.min)
                                            : std::to_string(r.min) + ".." + std::to_string(r.max);
      throw Error(ErrorCode::ArityError, span,
                  std::string("'") + primitive_head(kind) + "' expects " + expected +
                      " arguments, got " + std::to_string(got));
    }
  }

  std::unique_ptr<ExecNode> compile_expr(const Ast& a, bool stmt_pos) {
    switch (a.kind) {
      case Ast::Kind::Int: {
        auto n = make_node(PrimitiveKind::ConstLit, a.span);
        n->value = Datum::integer(a.int_val);
        return n;
      }
      case Ast::Kind::Float: {
        auto n = make_node(PrimitiveKind::ConstLit, a.span);
        n->value = Datum::real(a.float_val);
        return n;
      }
      case Ast::Kind::Str: {
        auto n = make_node(PrimitiveKind::ConstLit, a.span);
        n->value = Datum::str(a.str_val);
        return n;
      }
      case Ast::Kind::Bool: {
        auto n = make_node(PrimitiveKind::ConstLit, a.span);
        n->value = Datum::boolean(a.bool_val);
        return n;
      }
      case Ast::Kind::Nil: {
        auto n = make_node(PrimitiveKind::ConstLit, a.span);
        n->value = Datum::nil();
        return n;
      }
      case Ast::Kind::Ident: {
        if (auto slot = lookup_local(a.name)) {
          auto n = make_node(PrimitiveKind::VarRef, a.span);
          n->slot = *slot;
          n->name = a.name;
          return n;
        }
        auto sig = sigs_.find(a.name);
        if (sig != sigs_.end()) return make_call(sig->second, {}, a.span);
        throw Error(ErrorCode::UnknownIdentifier, a.span, "unknown identifier '" + a.name + "'");
      }
      case Ast::Kind::Apply:
        return compile_apply(a, stmt_pos);
    }
    throw Error(ErrorCode::ParseError, a.span, "unreachable");
  }

  std::unique_ptr<ExecNode> make_call(const KernelSig& sig, const std::vector<const Ast*>& args,
                                      SourceSpan span) {
    if (static_cast<int>(args.size()) != sig.param_count)
      throw Error(ErrorCode::ArityError, span,
                  "'" + sig.name + "' expects " + std::to_string(sig.param_count) +
                      " arguments, got " + std::to_string(args.size()));
    auto n = make_node(PrimitiveKind::UserCall, span);
    n->callee = sig.index;
    n->name = sig.name;
    for (const Ast* arg : args) n->children.push_back(compile_expr(*arg, /*stmt_pos=*/false));
    return n;
  }

  std::unique_ptr<ExecNode> compile_apply(const Ast& a, bool stmt_pos) {
    auto kind = head_to_kind(a.name);
    if (!kind) {
      auto sig = sigs_.find(a.name);
      if (sig == sigs_.end())
        throw Error(ErrorCode::UnknownIdentifier, a.span, "unknown identifier '" + a.name + "'");
      std::vector<const Ast*> args;
      args.reserve(a.args.size());
      for (const auto& arg : a.args) args.push_back(&arg);
      return make_call(sig->second, args, a.span);
    }

    switch (*kind) {
      case PrimitiveKind::Define: {
        if (!stmt_pos)
          throw Error(ErrorCode::SideEffectPosition, a.span,
                      "'define' is only allowed in statement position");
        if (a.args.size() != 2)
          throw Error(ErrorCode::ArityError, a.span,
                      "local 'define' expects (name, value), got " + std::to_string(a.args.size()) +
                          " arguments (function definitions are top-level only)");
        if (a.args[0].kind != Ast::Kind::Ident)
          throw Error(ErrorCode::ParseError, a.args[0].span, "'define' target must be an identifier");
        auto n = make_node(PrimitiveKind::Define, a.span);
        n->children.push_back(compile_expr(a.args[1], /*stmt_pos=*/false));
        n->slot = bind(a.args[0].name);
        n->name = a.args[0].name;
        return n;
      }
      case PrimitiveKind::Store: {
        if (!stmt_pos)
          throw Error(ErrorCode::SideEffectPosition, a.span,
                      "'store' is only allowed in statement position");
        if (a.args.size() != 2)
          throw Error(ErrorCode::ArityError, a.span,
                      "'store' expects (name, value), got " + std::to_string(a.args.size()));
        if (a.args[0].kind != Ast::Kind::Ident)
          throw Error(ErrorCode::ParseError, a.args[0].span, "'store' target must be an identifier");
        auto slot = lookup_local(a.args[0].name);
        if (!slot)
          throw Error(ErrorCode::UnknownIdentifier, a.args[0].span,
                      "'" + a.args[0].name + "' is not a variable in scope");
        auto n = make_node(PrimitiveKind::Store, a.span);
        n->slot = *slot;
        n->name = a.args[0].name;
        n->children.push_back(compile_expr(a.args[1], /*stmt_pos=*/false));
        return n;
      }
      case PrimitiveKind::StoreRow: {
        if (!stmt_pos)
          throw Error(ErrorCode::SideEffectPosition, a.span,
                      "'store_row' is only allowed in statement position");
        if (a.args.size() != 3)
          throw Error(ErrorCode::ArityError, a.span,
                      "'store_row' expects (name, row, value), got " + std::to_string(a.args.size()));
        if (a.args[0].kind != Ast::Kind::Ident)
          throw Error(ErrorCode::ParseError, a.args[0].span, "'store_row' target must be an identifier");
        auto slot = lookup_local(a.args[0].name);
        if (!slot)
          throw Error(ErrorCode::UnknownIdentifier, a.args[0].span,
                      "'" + a.args[0].name + "' is not a variable in scope");
        auto n = make_node(PrimitiveKind::StoreRow, a.span);
        n->slot = *slot;
        n->name = a.args[0].name;
        n->children.push_back(compile_expr(a.args[1], /*stmt_pos=*/false));
        n->children.push_back(compile_expr(a.args[2], /*stmt_pos=*/false));
        return n;
      }
      case PrimitiveKind::Block: {
        check_arity(PrimitiveKind::Block, a.args.size(), a.span);
        auto n = make_node(PrimitiveKind::Block, a.span);
        scopes_.emplace_back();
        for (const auto& stmt : a.args) n->children.push_back(compile_expr(stmt, stmt_pos));
        scopes_.pop_back();
        return n;
      }
      case PrimitiveKind::If: {
        check_arity(PrimitiveKind::If, a.args.size(), a.span);
        auto n = make_node(PrimitiveKind::If, a.span);
        n->children.push_back(compile_expr(a.args[0], /*stmt_pos=*/false));
        for (std::size_t i = 1; i < a.args.size(); ++i) {
          scopes_.emplace_back();
          n->children.push_back(compile_expr(a.args[i], stmt_pos));
          scopes_.pop_back();
        }
        return n;
      }
      case PrimitiveKind::While: {
        check_arity(PrimitiveKind::While, a.args.size(), a.span);
        auto n = make_node(PrimitiveKind::While, a.span);
        n->children.push_back(compile_expr(a.args[0], /*stmt_pos=*/false));
        scopes_.emplace_back();
        n->children.push_back(compile_expr(a.args[1], stmt_pos));
        scopes_.pop_back();
        return n;
      }
      default: {
        check_arity(*kind, a.args.size(), a.span);
        auto n = make_node(*kind, a.span);
        for (const auto& arg : a.args)
          n->children.push_back(compile_expr(arg, /*stmt_pos=*/false));
        return n;
      }
    }
  }

  const std::map<std::string, KernelSig>& sigs_;
  std::vector<std::vector<std::pair<std::string, int>>> scopes_;
  int next_slot_ = 0;
};

inline void assign_ids_and_cells(Program& prog) {
  int next_id = 0;
  for (auto& k : prog.kernels) {
    std::function<void(ExecNode&)> walk = [&](ExecNode& n) {
      n.node_id = next_id++;
      n.counters = n.kind == PrimitiveKind::UserCall
                       ? &prog.kernels[static_cast<std::size_t>(n.callee)]->invocations
                       : &n.own_counters;
      for (auto& c : n.children) walk(*c);
    };
    walk(*k->root);
  }
  prog.node_count = next_id;
  for (auto& k : prog.kernels) k->invocation_cell_id = next_id++;
  prog.cell_count = next_id;
}

}  // namespace detail

// Program form: a top-level block whose children are all defines, one kernel
// per define. Anything else is expression form, compiled as kernel `__main`
// with zero parameters.
inline Program compile(const Ast& root) {
  Program prog;
  prog.source_hash = fnv1a(pretty(root));

  struct Def {
    std::string name;
    std::vector<std::string> params;
    const Ast* body;
    SourceSpan span;
  };
  std::vector<Def> defs;

  bool program_form = root.is_apply("block") && !root.args.empty();
  if (program_form)
    for (const auto& child : root.args)
      if (!child.is_apply("define") || child.args.size() < 2) {
        program_form = false;
        break;
      }

  if (program_form) {
    for (const auto& child : root.args) {
      Def d;
      d.span = child.span;
      if (child.args[0].kind != Ast::Kind::Ident)
        throw Error(ErrorCode::ParseError, child.args[0].span, "'define' name must be an identifier");
      d.name = child.args[0].name;
      for (std::size_t i = 1; i + 1 < child.args.size(); ++i) {
        if (child.args[i].kind != Ast::Kind::Ident)
          throw Error(ErrorCode::ParseError, child.args[i].span, "parameter must be an identifier");
        d.params.push_back(child.args[i].name);
      }
      d.body = &child.args.back();
      defs.push_back(std::move(d));
    }
  } else {
    defs.push_back(Def{"__main", {}, &root, root.span});
  }

  std::map<std::string, detail::KernelSig> sigs;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (sigs.count(defs[i].name))
      throw Error(ErrorCode::ParseError, defs[i].span,
                  "duplicate top-level define of '" + defs[i].name + "'");
    sigs[defs[i].name] =
        detail::KernelSig{defs[i].name, static_cast<int>(defs[i].params.size()), static_cast<int>(i)};
  }

  for (std::size_t i = 0; i < defs.size(); ++i) {
    detail::KernelCompiler compiler(sigs);
    auto kernel = compiler.run(defs[i].name, defs[i].params, *defs[i].body, defs[i].span,
                               static_cast<int>(i));
    Ast def_ast = program_form ? root.args[i] : root;
    kernel->source_hash = fnv1a(pretty(def_ast));
    prog.by_name[defs[i].name] = static_cast<int>(i);
    prog.kernels.push_back(std::move(kernel));
  }
  detail::assign_ids_and_cells(prog);
  return prog;
}

namespace detail {

inline bool foldable_kind(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Add:
    case PrimitiveKind::Sub:
    case PrimitiveKind::Mul:
    case PrimitiveKind::Div:
    case PrimitiveKind::Neg:
    case PrimitiveKind::Lt:
    case PrimitiveKind::Le:
    case PrimitiveKind::Gt:
    case PrimitiveKind::Ge:
    case PrimitiveKind::Eq:
    case PrimitiveKind::Ne:
      return true;
    default:
      return false;
  }
}

inline std::unique_ptr<ExecNode> fold_tree(const ExecNode& n) {
  auto out = std::make_unique<ExecNode>();
  out->kind = n.kind;
  out->span = n.span;
  out->value = n.value;
  out->slot = n.slot;
  out->name = n.name;
  out->callee = n.callee;
  bool all_const = true;
  for (const auto& c : n.children) {
    out->children.push_back(fold_tree(*c));
    if (out->children.back()->kind != PrimitiveKind::ConstLit) all_const = false;
  }
  if (foldable_kind(n.kind) && all_const && !out->children.empty()) {
    std::vector<Datum> args;
    args.reserve(out->children.size());
    for (const auto& c : out->children) args.push_back(c->value);
    // folding that would trap folds to the IEEE result instead
    Datum v = apply_pure(n.kind, args, n.span);
    auto folded = std::make_unique<ExecNode>();
    folded->kind = PrimitiveKind::ConstLit;
    folded->span = n.span;
    folded->value = std::move(v);
    return folded;
  }
  return out;
}

}  // namespace detail

// Optional optimizer stage: any pure-arithmetic subtree whose leaves are all
// constants collapses to a single constant; no folding across control forms
// or side effects. Disabled unless requested.
inline Program fold_constants(const Program& prog) {
  Program out;
  out.source_hash = prog.source_hash;
  for (const auto& k : prog.kernels) {
    auto kernel = std::make_unique<CompiledKernel>();
    kernel->name = k->name;
    kernel->param_count = k->param_count;
    kernel->frame_size = k->frame_size;
    kernel->kernel_index = k->kernel_index;
    kernel->source_hash = k->source_hash;
    kernel->root = detail::fold_tree(*k->root);
    out.by_name[kernel->name] = kernel->kernel_index;
    out.kernels.push_back(std::move(kernel));
  }
  detail::assign_ids_and_cells(out);
  return out;
}

// Structural tree equality (spans and counters ignored).
inline bool exec_tree_equal(const ExecNode& a, const ExecNode& b) {
  if (a.kind != b.kind || a.slot != b.slot || a.callee != b.callee || a.name != b.name)
    return false;
  if (a.kind == PrimitiveKind::ConstLit && !bitwise_equal(a.value, b.value)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!exec_tree_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

// Compiling identical source twice returns the same program instance.
class KernelCache {
 public:
  std::shared_ptr<const Program> get_or_compile(const Ast& root, bool fold = false) {
    Key key{fnv1a(pretty(root)), fold};
    {
      std::shared_lock lock(mx_);
      auto it = map_.find(key);
      if (it != map_.end()) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second;
      }
    }
    std::unique_lock lock(mx_);
    auto it = map_.find(key);
    if (it != map_.end()) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
    misses_.fetch_add(1, std::memory_order_relaxed);
    Program prog = compile(root);
    if (fold) prog = fold_constants(prog);
    auto shared = std::make_shared<const Program>(std::move(prog));
    map_.emplace(key, shared);
    return shared;
  }

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  std::size_t size() const {
    std::shared_lock lock(mx_);
    return map_.size();
  }

 private:
  using Key = std::pair<std::uint64_t, bool>;
  mutable std::shared_mutex mx_;
  std::map<Key, std::shared_ptr<const Program>> map_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

}  // namespace futra
