#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "futra/ast.hpp"
#include "futra/pretty.hpp"
#include "futra/pylite.hpp"

// Lowers validated PyLite functions to PhySL:
//   def f(p...):       ->  define(f, p..., body)
//   first assignment   ->  define(name, e), later writes -> store(name, e')
//   while c: body      ->  while(c, block(body...))
//   if/elif/else       ->  nested if(c, arm, arm)
//   return e           ->  e as the final block expression
// A statement list lowers to a bare expression when it has exactly one
// statement; while bodies always keep their block.

namespace futra::pylite {

namespace detail {

inline const char* binary_head(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "add";
    case BinaryOp::Sub: return "sub";
    case BinaryOp::Mul: return "mul";
    case BinaryOp::Div: return "div";
    case BinaryOp::MatMul: return "dot";
  }
  return "?";
}

inline const char* compare_head(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "lt";
    case CompareOp::Le: return "le";
    case CompareOp::Gt: return "gt";
    case CompareOp::Ge: return "ge";
    case CompareOp::Eq: return "eq";
    case CompareOp::Ne: return "ne";
  }
  return "?";
}

// np.<path> -> (head, arity, shape_list_first_arg)
struct NpRule {
  const char* head;
  int arity;
  bool shape_arg;
};

inline const std::map<std::string, NpRule, std::less<>>& np_rules() {
  static const std::map<std::string, NpRule, std::less<>> rules = {
      {"dot", {"dot", 2, false}},
      {"transpose", {"transpose", 1, false}},
      {"exp", {"exp", 1, false}},
      {"log", {"log", 1, false}},
      {"linalg.solve", {"solve", 2, false}},
      {"identity", {"identity", 1, false}},
      {"zeros", {"zeros", 1, true}},
      {"diag", {"diag", 1, false}},
      {"sum", {"sum", 1, false}},
  };
  return rules;
}

class Scope {
 public:
  void push() { frames_.emplace_back(); }
  void pop() { frames_.pop_back(); }
  void bind(const std::string& name) { frames_.back().insert(name); }
  bool bound(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }

 private:
  std::vector<std::set<std::string>> frames_;
};

class Validator {
 public:
  void run(FuncDef& fn) {
    scope_ = Scope();
    scope_.push();
    for (const auto& p : fn.params) scope_.bind(p);
    check_stmts(fn.body, /*tail=*/true);
  }

 private:
  void check_stmts(std::vector<Stmt>& stmts, bool tail) {
    for (std::size_t i = 0; i < stmts.size(); ++i)
      check_stmt(stmts[i], tail && i + 1 == stmts.size());
  }

  void check_stmt(Stmt& s, bool tail) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        check_expr(s.exprs[0]);
        if (scope_.bound(s.target)) {
          s.first_binding = false;
        } else {
          s.first_binding = true;
          scope_.bind(s.target);
        }
        return;
      case Stmt::Kind::AugAssign:
        check_expr(s.exprs[0]);
        require_bound(s.target, s.span);
        return;
      case Stmt::Kind::IndexAssign:
        check_expr(s.exprs[0]);
        check_expr(s.exprs[1]);
        require_bound(s.target, s.span);
        return;
      case Stmt::Kind::While:
        check_expr(s.exprs[0]);
        scope_.push();
        check_stmts(s.body, /*tail=*/false);
        scope_.pop();
        return;
      case Stmt::Kind::If: {
        for (auto& c : s.exprs) check_expr(c);
        bool arms_may_return = tail && s.has_else;
        scope_.push();
        check_stmts(s.body, arms_may_return);
        scope_.pop();
        for (auto& arm : s.elif_bodies) {
          scope_.push();
          check_stmts(arm, arms_may_return);
          scope_.pop();
        }
        if (s.has_else) {
          scope_.push();
          check_stmts(s.else_body, arms_may_return);
          scope_.pop();
        }
        return;
      }
      case Stmt::Kind::Return:
        if (!tail)
          throw Error(ErrorCode::ReturnNotTerminal, s.span,
                      "'return' is only allowed as the final statement of a function "
                      "body or of a terminal if/else arm");
        check_expr(s.exprs[0]);
        return;
      case Stmt::Kind::ExprStmt:
        check_expr(s.exprs[0]);
        return;
    }
  }

  void require_bound(const std::string& name, SourceSpan span) {
    if (!scope_.bound(name))
      throw Error(ErrorCode::UseBeforeAssign, span, "name '" + name + "' is not bound here");
  }

  void check_expr(const Expr& e) {
    if (e.kind == Expr::Kind::Name) {
      require_bound(e.name, e.span);
      return;
    }
    for (const auto& c : e.children) check_expr(c);
  }

  Scope scope_;
};

class Lowerer {
 public:
  explicit Lowerer(std::set<std::string> user_funcs, std::map<std::string, int> user_arity)
      : user_funcs_(std::move(user_funcs)), user_arity_(std::move(user_arity)) {}

  Ast lower_function(const FuncDef& fn) {
    std::vector<Ast> args;
    args.push_back(Ast::ident(fn.name, fn.span));
    for (const auto& p : fn.params) args.push_back(Ast::ident(p, fn.span));
    args.push_back(lower_stmts(fn.body, fn.span));
    return Ast::apply("define", std::move(args), fn.span);
  }

 private:
  Ast lower_stmts(const std::vector<Stmt>& stmts, SourceSpan span) {
    std::vector<Ast> lowered;
    lowered.reserve(stmts.size());
    for (const auto& s : stmts) lowered.push_back(lower_stmt(s));
    if (lowered.size() == 1) return std::move(lowered.front());
    return Ast::apply("block", std::move(lowered), span);
  }

  Ast lower_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        return Ast::apply(s.first_binding ? "define" : "store",
                          {Ast::ident(s.target, s.span), lower_expr(s.exprs[0])}, s.span);
      case Stmt::Kind::AugAssign: {
        Ast value = Ast::apply(binary_head(s.aug_op),
                               {Ast::ident(s.target, s.span), lower_expr(s.exprs[0])}, s.span);
        return Ast::apply("store", {Ast::ident(s.target, s.span), std::move(value)}, s.span);
      }
      case Stmt::Kind::IndexAssign:
        return Ast::apply("store_row",
                          {Ast::ident(s.target, s.span), lower_expr(s.exprs[0]),
                           lower_expr(s.exprs[1])},
                          s.span);
      case Stmt::Kind::While: {
        std::vector<Ast> body;
        body.reserve(s.body.size());
        for (const auto& st : s.body) body.push_back(lower_stmt(st));
        return Ast::apply("while",
                          {lower_expr(s.exprs[0]), Ast::apply("block", std::move(body), s.span)},
                          s.span);
      }
      case Stmt::Kind::If: {
        // nest elif arms right-to-left
        Ast else_part;
        bool have_else = s.has_else;
        if (have_else) else_part = lower_stmts(s.else_body, s.span);
        for (std::size_t i = s.exprs.size(); i-- > 1;) {
          std::vector<Ast> args{lower_expr(s.exprs[i]), lower_stmts(s.elif_bodies[i - 1], s.span)};
          if (have_else) args.push_back(std::move(else_part));
          else_part = Ast::apply("if", std::move(args), s.span);
          have_else = true;
        }
        std::vector<Ast> args{lower_expr(s.exprs[0]), lower_stmts(s.body, s.span)};
        if (have_else) args.push_back(std::move(else_part));
        return Ast::apply("if", std::move(args), s.span);
      }
      case Stmt::Kind::Return:
      case Stmt::Kind::ExprStmt:
        return lower_expr(s.exprs[0]);
    }
    throw Error(ErrorCode::ParseError, s.span, "unreachable statement kind");
  }

  Ast lower_shape_arg(const Expr& e) {
    // shape arguments become list(...): rand(5, s) -> random(list(5), s)
    if (e.kind == Expr::Kind::ListDisplay) return lower_expr(e);
    return Ast::apply("list", {lower_expr(e)}, e.span);
  }

  Ast lower_expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Name: return Ast::ident(e.name, e.span);
      case Expr::Kind::IntLit: return Ast::lit_int(e.int_val, e.span);
      case Expr::Kind::FloatLit: return Ast::lit_float(e.float_val, e.span);
      case Expr::Kind::StrLit: return Ast::lit_str(e.str_val, e.span);
      case Expr::Kind::BoolLit: return Ast::lit_bool(e.bool_val, e.span);
      case Expr::Kind::NoneLit: return Ast::lit_nil(e.span);
      case Expr::Kind::Neg:
        return Ast::apply("neg", {lower_expr(e.children[0])}, e.span);
      case Expr::Kind::Binary:
        return Ast::apply(binary_head(e.bin_op),
                          {lower_expr(e.children[0]), lower_expr(e.children[1])}, e.span);
      case Expr::Kind::Compare:
        return Ast::apply(compare_head(e.cmp_op),
                          {lower_expr(e.children[0]), lower_expr(e.children[1])}, e.span);
      case Expr::Kind::Transpose:
        return Ast::apply("transpose", {lower_expr(e.children[0])}, e.span);
      case Expr::Kind::ShapeIndex:
        return Ast::apply("shape", {lower_expr(e.children[0]), lower_expr(e.children[1])}, e.span);
      case Expr::Kind::Index:
        return Ast::apply("slice_row", {lower_expr(e.children[0]), lower_expr(e.children[1])}, e.span);
      case Expr::Kind::ListDisplay: {
        std::vector<Ast> items;
        items.reserve(e.children.size());
        for (const auto& c : e.children) items.push_back(lower_expr(c));
        return Ast::apply("list", std::move(items), e.span);
      }
      case Expr::Kind::Call: {
        if (e.name == "rand") {
          if (e.children.size() != 2)
            throw Error(ErrorCode::ArityError, e.span,
                        "rand expects (shape, seed), got " + std::to_string(e.children.size()) +
                            " arguments");
          return Ast::apply("random", {lower_shape_arg(e.children[0]), lower_expr(e.children[1])},
                            e.span);
        }
        auto it = user_arity_.find(e.name);
        if (it == user_arity_.end())
          throw Error(ErrorCode::UnknownCall, e.span, "unknown function '" + e.name + "'");
        if (static_cast<int>(e.children.size()) != it->second)
          throw Error(ErrorCode::ArityError, e.span,
                      "'" + e.name + "' expects " + std::to_string(it->second) + " arguments, got " +
                          std::to_string(e.children.size()));
        std::vector<Ast> args;
        args.reserve(e.children.size());
        for (const auto& c : e.children) args.push_back(lower_expr(c));
        return Ast::apply(e.name, std::move(args), e.span);
      }
      case Expr::Kind::NpCall: {
        auto it = np_rules().find(e.name);
        if (it == np_rules().end())
          throw Error(ErrorCode::UnknownCall, e.span, "unknown function 'np." + e.name + "'");
        const NpRule& rule = it->second;
        if (static_cast<int>(e.children.size()) != rule.arity)
          throw Error(ErrorCode::ArityError, e.span,
                      "'np." + e.name + "' expects " + std::to_string(rule.arity) +
                          " arguments, got " + std::to_string(e.children.size()));
        std::vector<Ast> args;
        if (rule.shape_arg) {
          args.push_back(lower_shape_arg(e.children[0]));
        } else {
          for (const auto& c : e.children) args.push_back(lower_expr(c));
        }
        return Ast::apply(rule.head, std::move(args), e.span);
      }
    }
    throw Error(ErrorCode::ParseError, e.span, "unreachable expression kind");
  }

  std::set<std::string> user_funcs_;
  std::map<std::string, int> user_arity_;
};

}  // namespace detail

inline void validate(FuncDef& fn) { detail::Validator().run(fn); }

// Lowers one validated function against the set of functions visible to it.
inline Ast lower(const FuncDef& fn, const std::vector<FuncDef>& all) {
  std::set<std::string> names;
  std::map<std::string, int> arity;
  for (const auto& f : all) {
    names.insert(f.name);
    arity[f.name] = static_cast<int>(f.params.size());
  }
  return detail::Lowerer(std::move(names), std::move(arity)).lower_function(fn);
}

// PyLite file -> canonical PhySL program text (one top-level block of defines).
inline Ast lower_file(std::string_view source) {
  std::vector<FuncDef> defs = parse_pylite(source);
  for (auto& fn : defs) validate(fn);
  std::vector<Ast> lowered;
  lowered.reserve(defs.size());
  for (const auto& fn : defs) lowered.push_back(lower(fn, defs));
  return Ast::apply("block", std::move(lowered), defs.front().span);
}

inline std::string transpile(std::string_view source) { return pretty(lower_file(source)) + "\n"; }

}  // namespace futra::pylite
