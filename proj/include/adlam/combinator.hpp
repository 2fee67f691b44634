#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/term.hpp"
#include "adlam/type.hpp"

namespace adlam {

// Point-free program representation: the morphisms of the free
// cartesian closed category over the primitive operations. The AD
// macros are defined by structural recursion over this form.
enum class CombKind { Id, Comp, Terminal, Pair, Fst, Snd, Ev, Curry, Op };

struct Comb;
using CombPtr = std::shared_ptr<const Comb>;

struct Comb {
  CombKind kind;
  TypePtr t1, t2, t3;  // Id/Terminal: t1; Fst/Snd/Ev: (t1, t2); Curry: ctx t1, binder t2, result t3
  CombPtr f, g;
  OpSpec op;  // Op only
};

namespace detail {
inline CombPtr cnode(CombKind k, TypePtr t1, TypePtr t2, TypePtr t3, CombPtr f, CombPtr g) {
  auto c = std::make_shared<Comb>();
  c->kind = k;
  c->t1 = std::move(t1);
  c->t2 = std::move(t2);
  c->t3 = std::move(t3);
  c->f = std::move(f);
  c->g = std::move(g);
  return c;
}
}  // namespace detail

inline CombPtr c_id(TypePtr t) { return detail::cnode(CombKind::Id, std::move(t), nullptr, nullptr, nullptr, nullptr); }
inline CombPtr c_comp(CombPtr f, CombPtr g) { return detail::cnode(CombKind::Comp, nullptr, nullptr, nullptr, std::move(f), std::move(g)); }
inline CombPtr c_terminal(TypePtr t) { return detail::cnode(CombKind::Terminal, std::move(t), nullptr, nullptr, nullptr, nullptr); }
inline CombPtr c_pair(CombPtr f, CombPtr g) { return detail::cnode(CombKind::Pair, nullptr, nullptr, nullptr, std::move(f), std::move(g)); }
inline CombPtr c_fst(TypePtr l, TypePtr r) { return detail::cnode(CombKind::Fst, std::move(l), std::move(r), nullptr, nullptr, nullptr); }
inline CombPtr c_snd(TypePtr l, TypePtr r) { return detail::cnode(CombKind::Snd, std::move(l), std::move(r), nullptr, nullptr, nullptr); }
inline CombPtr c_ev(TypePtr dom, TypePtr cod) { return detail::cnode(CombKind::Ev, std::move(dom), std::move(cod), nullptr, nullptr, nullptr); }
inline CombPtr c_curry(CombPtr f, TypePtr ctx, TypePtr binder, TypePtr result) {
  return detail::cnode(CombKind::Curry, std::move(ctx), std::move(binder), std::move(result), std::move(f), nullptr);
}
inline CombPtr c_op(OpSpec spec) {
  auto c = std::make_shared<Comb>();
  c->kind = CombKind::Op;
  c->op = std::move(spec);
  return c;
}

inline TypePtr comb_dom(const CombPtr& c);
inline TypePtr comb_cod(const CombPtr& c);

inline TypePtr comb_dom(const CombPtr& c) {
  switch (c->kind) {
    case CombKind::Id:
    case CombKind::Terminal: return c->t1;
    case CombKind::Comp: return comb_dom(c->f);
    case CombKind::Pair: return comb_dom(c->f);
    case CombKind::Fst:
    case CombKind::Snd: return prod_type(c->t1, c->t2);
    case CombKind::Ev: return prod_type(fun_type(c->t1, c->t2), c->t1);
    case CombKind::Curry: return c->t1;
    case CombKind::Op: return c->op.dom;
  }
  throw Error(ErrorCode::Internal, "comb_dom");
}

inline TypePtr comb_cod(const CombPtr& c) {
  switch (c->kind) {
    case CombKind::Id: return c->t1;
    case CombKind::Terminal: return unit_type();
    case CombKind::Comp: return comb_cod(c->g);
    case CombKind::Pair: return prod_type(comb_cod(c->f), comb_cod(c->g));
    case CombKind::Fst: return c->t1;
    case CombKind::Snd: return c->t2;
    case CombKind::Ev: return c->t2;
    case CombKind::Curry: return fun_type(c->t2, c->t3);
    case CombKind::Op: return c->op.cod;
  }
  throw Error(ErrorCode::Internal, "comb_cod");
}

// Well-formedness: composition seams agree, currying bodies have the
// announced product domain.
inline void comb_validate(const CombPtr& c) {
  switch (c->kind) {
    case CombKind::Comp:
      comb_validate(c->f);
      comb_validate(c->g);
      if (!type_equal(comb_cod(c->f), comb_dom(c->g)))
        throw Error(ErrorCode::TypeMismatch, "combinator composition seam mismatch");
      return;
    case CombKind::Pair:
      comb_validate(c->f);
      comb_validate(c->g);
      if (!type_equal(comb_dom(c->f), comb_dom(c->g)))
        throw Error(ErrorCode::TypeMismatch, "combinator pairing domain mismatch");
      return;
    case CombKind::Curry:
      comb_validate(c->f);
      if (!type_equal(comb_dom(c->f), prod_type(c->t1, c->t2)) ||
          !type_equal(comb_cod(c->f), c->t3))
        throw Error(ErrorCode::TypeMismatch, "curry body type mismatch");
      return;
    default: return;
  }
}

// ---------------------------------------------------------------------------
// Elaboration: lambda terms to combinators. The typing context packs as a
// left-nested product with the newest binding rightmost; a one-variable
// context packs as the bare type and the empty context as unit.
// ---------------------------------------------------------------------------

using CtxList = std::vector<std::pair<std::string, TypePtr>>;

namespace detail {

inline TypePtr pack_ctx(const CtxList& ctx) {
  if (ctx.empty()) return unit_type();
  TypePtr acc = ctx[0].second;
  for (size_t i = 1; i < ctx.size(); ++i) acc = prod_type(acc, ctx[i].second);
  return acc;
}

// Newest binding shadows; pack([t0..tk]) = pack([t0..tk-1]) x tk for k >= 1.
inline std::pair<CombPtr, TypePtr> lookup_var(const CtxList& ctx, const std::string& name, Loc loc) {
  if (ctx.empty()) throw Error(ErrorCode::UnboundVariable, "variable '" + name + "'", loc);
  if (ctx.size() == 1) {
    if (ctx[0].first == name) return {c_id(ctx[0].second), ctx[0].second};
    throw Error(ErrorCode::UnboundVariable, "variable '" + name + "'", loc);
  }
  const auto& last = ctx.back();
  CtxList rest(ctx.begin(), ctx.end() - 1);
  TypePtr rest_ty = pack_ctx(rest);
  if (last.first == name) return {c_snd(rest_ty, last.second), last.second};
  auto [inner, ty] = lookup_var(rest, name, loc);
  return {c_comp(c_fst(rest_ty, last.second), inner), ty};
}

inline std::pair<CombPtr, TypePtr> elab(const CtxList& ctx, const TermPtr& t, const Registry& reg);

// Elaborate `body` under ctx extended with (name : ty); the result always
// has domain pack(ctx) x ty, wrapping with snd when ctx is empty.
inline std::pair<CombPtr, TypePtr> elab_extended(const CtxList& ctx, const std::string& name,
                                                 const TypePtr& ty, const TermPtr& body,
                                                 const Registry& reg) {
  CtxList inner = ctx;
  inner.emplace_back(name, ty);
  auto [c, cod] = elab(inner, body, reg);
  if (ctx.empty()) {
    c = c_comp(c_snd(unit_type(), ty), c);
  }
  return {c, cod};
}

inline std::pair<CombPtr, TypePtr> elab(const CtxList& ctx, const TermPtr& t, const Registry& reg) {
  const Loc loc = t->loc;
  switch (t->kind) {
    case TermKind::Var: return lookup_var(ctx, t->name, loc);
    case TermKind::UnitVal: return {c_terminal(pack_ctx(ctx)), unit_type()};
    case TermKind::Pair: {
      auto [cf, tf] = elab(ctx, t->a, reg);
      auto [cg, tg] = elab(ctx, t->b, reg);
      return {c_pair(cf, cg), prod_type(tf, tg)};
    }
    case TermKind::Fst: {
      auto [c, ty] = elab(ctx, t->a, reg);
      if (ty->kind != TypeKind::Prod)
        throw Error(ErrorCode::TypeMismatch, "fst applied to non-product " + type_to_string(ty), loc);
      return {c_comp(c, c_fst(ty->left, ty->right)), ty->left};
    }
    case TermKind::Snd: {
      auto [c, ty] = elab(ctx, t->a, reg);
      if (ty->kind != TypeKind::Prod)
        throw Error(ErrorCode::TypeMismatch, "snd applied to non-product " + type_to_string(ty), loc);
      return {c_comp(c, c_snd(ty->left, ty->right)), ty->right};
    }
    case TermKind::Op: {
      auto [c, ty] = elab(ctx, t->a, reg);
      OpSpec spec;
      try {
        spec = reg.resolve(t->name, ty);
      } catch (const Error& e) {
        throw Error(e.code(), e.what(), loc);
      }
      TypePtr cod = spec.cod;
      return {c_comp(c, c_op(std::move(spec))), cod};
    }
    case TermKind::Lam: {
      if (!t->ann) throw Error(ErrorCode::TypeMismatch, "lambda binder lacks a type annotation", loc);
      auto [cb, cod] = elab_extended(ctx, t->name, t->ann, t->a, reg);
      return {c_curry(cb, pack_ctx(ctx), t->ann, cod), fun_type(t->ann, cod)};
    }
    case TermKind::App: {
      auto [cf, tf] = elab(ctx, t->a, reg);
      if (tf->kind != TypeKind::Fun)
        throw Error(ErrorCode::TypeMismatch, "application of non-function " + type_to_string(tf), loc);
      auto [ca, ta] = elab(ctx, t->b, reg);
      if (!type_equal(tf->left, ta))
        throw Error(ErrorCode::TypeMismatch,
                    "application argument: expected " + type_to_string(tf->left) + ", found " + type_to_string(ta),
                    loc);
      return {c_comp(c_pair(cf, ca), c_ev(tf->left, tf->right)), tf->right};
    }
    case TermKind::Let: {
      auto [cb, tb] = elab(ctx, t->a, reg);
      auto [cbody, cod] = elab_extended(ctx, t->name, tb, t->b, reg);
      return {c_comp(c_pair(c_id(pack_ctx(ctx)), cb), cbody), cod};
    }
    default:
      throw Error(ErrorCode::TypeMismatch, "construct is not part of the source language", loc);
  }
}

}  // namespace detail

// Translate a source term in an ordered context into a combinator whose
// domain is the packed context product and whose codomain is the term's
// type.
inline CombPtr elaborate(const CtxList& ctx, const TermPtr& t, const Registry& reg = builtin_registry()) {
  return detail::elab(ctx, t, reg).first;
}

// ---------------------------------------------------------------------------
// Reification: combinators back to lambda syntax.
// ---------------------------------------------------------------------------

namespace detail {

inline TermPtr reify_open(const CombPtr& c, const TermPtr& arg, NameGen& ng) {
  switch (c->kind) {
    case CombKind::Id: return arg;
    case CombKind::Comp: return reify_open(c->g, reify_open(c->f, arg, ng), ng);
    case CombKind::Terminal: return mk_unit();
    case CombKind::Pair:
      return share(arg, ng, "p", [&](const TermPtr& v) {
        return mk_pair(reify_open(c->f, v, ng), reify_open(c->g, v, ng));
      });
    case CombKind::Fst: return mk_fst(arg);
    case CombKind::Snd: return mk_snd(arg);
    case CombKind::Ev:
      return share(arg, ng, "p", [&](const TermPtr& v) { return mk_app(mk_fst(v), mk_snd(v)); });
    case CombKind::Curry: {
      std::string y = ng.fresh("y");
      return mk_lam(y, c->t2, reify_open(c->f, mk_pair(arg, mk_var(y)), ng));
    }
    case CombKind::Op: return mk_op(c->op.name, arg);
  }
  throw Error(ErrorCode::Internal, "reify_open");
}

}  // namespace detail

// reify(c) is a closed lambda term of type dom(c) -> cod(c) that agrees
// with c under evaluation.
inline TermPtr reify(const CombPtr& c) {
  NameGen ng;
  std::string x = ng.fresh("x");
  return mk_lam(x, comb_dom(c), detail::reify_open(c, mk_var(x), ng));
}

inline std::string comb_to_string(const CombPtr& c) {
  switch (c->kind) {
    case CombKind::Id: return "(id " + type_to_string(c->t1) + ")";
    case CombKind::Comp: return "(comp " + comb_to_string(c->f) + " " + comb_to_string(c->g) + ")";
    case CombKind::Terminal: return "(terminal " + type_to_string(c->t1) + ")";
    case CombKind::Pair: return "(pairc " + comb_to_string(c->f) + " " + comb_to_string(c->g) + ")";
    case CombKind::Fst: return "(fstc " + type_to_string(c->t1) + " " + type_to_string(c->t2) + ")";
    case CombKind::Snd: return "(sndc " + type_to_string(c->t1) + " " + type_to_string(c->t2) + ")";
    case CombKind::Ev: return "(ev " + type_to_string(c->t1) + " " + type_to_string(c->t2) + ")";
    case CombKind::Curry: return "(curry " + comb_to_string(c->f) + ")";
    case CombKind::Op: return "(opc " + c->op.name + ")";
  }
  return "?";
}

}  // namespace adlam
