#pragma once

#include <map>
#include <string>

#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/term.hpp"
#include "adlam/type.hpp"

namespace adlam {

using TypeCtx = std::map<std::string, TypePtr>;

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& msg, Loc loc) {
  if (!ok) throw Error(code, msg, loc);
}

inline void require_equal(const TypePtr& expected, const TypePtr& found, Loc loc,
                          const std::string& where) {
  if (!type_equal(expected, found))
    throw Error(ErrorCode::TypeMismatch,
                where + ": expected " + type_to_string(expected) + ", found " + type_to_string(found),
                loc);
}

template <bool TargetLang>
TypePtr check(const TypeCtx& ctx, const TermPtr& t, const Registry& reg) {
  const Loc loc = t->loc;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = ctx.find(t->name);
      if (it == ctx.end()) throw Error(ErrorCode::UnboundVariable, "variable '" + t->name + "'", loc);
      return it->second;
    }
    case TermKind::Op: {
      TypePtr arg = check<TargetLang>(ctx, t->a, reg);
      OpSpec spec;
      try {
        spec = reg.resolve(t->name, arg);
      } catch (const Error& e) {
        throw Error(e.code(), e.what(), loc.line > 0 ? loc : t->a->loc);
      }
      return spec.cod;
    }
    case TermKind::UnitVal: return unit_type();
    case TermKind::Pair:
      return prod_type(check<TargetLang>(ctx, t->a, reg), check<TargetLang>(ctx, t->b, reg));
    case TermKind::Fst: {
      TypePtr p = check<TargetLang>(ctx, t->a, reg);
      require(p->kind == TypeKind::Prod, ErrorCode::TypeMismatch,
              "fst applied to non-product " + type_to_string(p), loc);
      return p->left;
    }
    case TermKind::Snd: {
      TypePtr p = check<TargetLang>(ctx, t->a, reg);
      require(p->kind == TypeKind::Prod, ErrorCode::TypeMismatch,
              "snd applied to non-product " + type_to_string(p), loc);
      return p->right;
    }
    case TermKind::Lam: {
      require(t->ann != nullptr, ErrorCode::TypeMismatch, "lambda binder lacks a type annotation", loc);
      if (!TargetLang)
        require(is_source_type(t->ann), ErrorCode::TypeMismatch,
                "binder type " + type_to_string(t->ann) + " is not a source type", loc);
      TypeCtx inner = ctx;
      inner[t->name] = t->ann;
      return fun_type(t->ann, check<TargetLang>(inner, t->a, reg));
    }
    case TermKind::App: {
      TypePtr f = check<TargetLang>(ctx, t->a, reg);
      require(f->kind == TypeKind::Fun, ErrorCode::TypeMismatch,
              "application of non-function " + type_to_string(f), loc);
      TypePtr a = check<TargetLang>(ctx, t->b, reg);
      require_equal(f->left, a, loc, "application argument");
      return f->right;
    }
    case TermKind::Let: {
      TypePtr bound = check<TargetLang>(ctx, t->a, reg);
      TypeCtx inner = ctx;
      inner[t->name] = bound;
      return check<TargetLang>(inner, t->b, reg);
    }
    default: break;
  }

  if (!TargetLang)
    throw Error(ErrorCode::TypeMismatch, "construct is not part of the source language", loc);

  switch (t->kind) {
    case TermKind::Zero: return t->ann;
    case TermKind::Plus: {
      TypePtr l = check<true>(ctx, t->a, reg);
      TypePtr r = check<true>(ctx, t->b, reg);
      require_equal(l, r, loc, "plus operands");
      return l;
    }
    case TermKind::LOp: {
      TypePtr p = check<true>(ctx, t->a, reg);
      const LinOpSpec* spec = nullptr;
      try {
        spec = &reg.lop(t->name);
      } catch (const Error& e) {
        throw Error(e.code(), e.what(), loc);
      }
      auto [ldom, lcod] = spec->resolve(p);
      return linfun_type(ldom, lcod);
    }
    case TermKind::LId: return linfun_type(t->ann, t->ann);
    case TermKind::LComp: {
      TypePtr f = check<true>(ctx, t->a, reg);
      TypePtr g = check<true>(ctx, t->b, reg);
      require(f->kind == TypeKind::LinFun && g->kind == TypeKind::LinFun,
              ErrorCode::LinearityShape, "linear composition of non-linear operands", loc);
      require_equal(f->right, g->left, loc, "linear composition seam");
      return linfun_type(f->left, g->right);
    }
    case TermKind::LApp: {
      TypePtr f = check<true>(ctx, t->a, reg);
      require(f->kind == TypeKind::LinFun, ErrorCode::LinearityShape,
              "linear application of " + type_to_string(f), loc);
      TypePtr a = check<true>(ctx, t->b, reg);
      require_equal(f->left, a, loc, "linear application argument");
      return f->right;
    }
    case TermKind::LSwap: {
      TypePtr f = check<true>(ctx, t->a, reg);
      require(f->kind == TypeKind::Fun && f->right->kind == TypeKind::LinFun,
              ErrorCode::LinearityShape, "lswap expects a function into a linear function", loc);
      return linfun_type(f->right->left, fun_type(f->left, f->right->right));
    }
    case TermKind::LEval: {
      TypePtr p = check<true>(ctx, t->a, reg);
      return linfun_type(fun_type(p, t->ann), t->ann);
    }
    case TermKind::LSing: {
      TypePtr k = check<true>(ctx, t->a, reg);
      return linfun_type(t->ann, map_type(k, t->ann));
    }
    case TermKind::LCurryInv: {
      TypePtr f = check<true>(ctx, t->a, reg);
      require(f->kind == TypeKind::Fun && f->right->kind == TypeKind::LinFun,
              ErrorCode::LinearityShape, "lcurryinv expects a function into a linear function", loc);
      require_equal(t->ann, f->right->right, loc, "lcurryinv codomain annotation");
      return linfun_type(map_type(f->left, f->right->left), f->right->right);
    }
    case TermKind::LFst: return linfun_type(prod_type(t->ann, t->ann2), t->ann);
    case TermKind::LSnd: return linfun_type(prod_type(t->ann, t->ann2), t->ann2);
    case TermKind::LPair: {
      TypePtr f = check<true>(ctx, t->a, reg);
      TypePtr g = check<true>(ctx, t->b, reg);
      require(f->kind == TypeKind::LinFun && g->kind == TypeKind::LinFun,
              ErrorCode::LinearityShape, "linear pairing of non-linear operands", loc);
      require_equal(f->left, g->left, loc, "linear pairing domain");
      return linfun_type(f->left, prod_type(f->right, g->right));
    }
    default: break;
  }
  throw Error(ErrorCode::Internal, "typecheck: unhandled construct", loc);
}

}  // namespace detail

inline TypePtr typecheck_source(const TypeCtx& ctx, const TermPtr& t,
                                const Registry& reg = builtin_registry()) {
  return detail::check<false>(ctx, t, reg);
}

inline TypePtr typecheck_target(const TypeCtx& ctx, const TermPtr& t,
                                const Registry& reg = builtin_registry()) {
  return detail::check<true>(ctx, t, reg);
}

}  // namespace adlam
