#pragma once

#include <string>
#include <utility>

#include "adlam/combinator.hpp"
#include "adlam/error.hpp"
#include "adlam/term.hpp"
#include "adlam/translate.hpp"
#include "adlam/type.hpp"

namespace adlam {

enum class Mode { Forward, Reverse };

// Result of differentiating a combinator c : src -> dst. Both terms are
// open over `var`:
//   var : D[src]1 |- primal : D[dst]1
//   var : D[src]1 |- deriv  : linfun(D[src]2, D[dst]2)   (forward)
//   var : D[src]1 |- deriv  : linfun(D[dst]2, D[src]2)   (reverse)
struct AdOutput {
  Mode mode;
  TypePtr src, dst;
  std::string var;
  TermPtr primal;
  TermPtr deriv;
};

namespace detail {

struct PrimalDeriv {
  TermPtr primal;
  TermPtr deriv;
};

inline TypePtr fwd1(const TypePtr& t) { return type_translate_fwd(t).first; }
inline TypePtr fwd2(const TypePtr& t) { return type_translate_fwd(t).second; }
inline TypePtr rev1(const TypePtr& t) { return type_translate_rev(t).first; }
inline TypePtr rev2(const TypePtr& t) { return type_translate_rev(t).second; }

inline const OpSpec& op_of(const CombPtr& c) {
  if (!c->op.fwd_deriv || !c->op.rev_deriv)
    throw Error(ErrorCode::UnknownOp, "operation '" + c->op.name + "' has no registered derivatives");
  return c->op;
}

inline PrimalDeriv fwd_split(const CombPtr& c, const std::string& x, NameGen& ng) {
  switch (c->kind) {
    case CombKind::Id:
      return {mk_var(x), mk_lid(fwd2(c->t1))};

    case CombKind::Comp: {
      // D[t;s]1 = D[s]1[y := D[t]1]        D[t;s]2 = D[t]2 ; D[s]2[y := D[t]1]
      PrimalDeriv f = fwd_split(c->f, x, ng);
      std::string y = ng.fresh("y");
      PrimalDeriv g = fwd_split(c->g, y, ng);
      return {mk_let(y, f.primal, g.primal),
              mk_lcomp(f.deriv, mk_let(y, f.primal, g.deriv))};
    }

    case CombKind::Terminal:
      return {mk_unit(), mk_zero(linfun_type(fwd2(c->t1), unit_type()))};

    case CombKind::Pair: {
      PrimalDeriv f = fwd_split(c->f, x, ng);
      PrimalDeriv g = fwd_split(c->g, x, ng);
      return {mk_pair(f.primal, g.primal), mk_lpair(f.deriv, g.deriv)};
    }

    case CombKind::Fst:
      return {mk_fst(mk_var(x)), mk_lfst(fwd2(c->t1), fwd2(c->t2))};
    case CombKind::Snd:
      return {mk_snd(mk_var(x)), mk_lsnd(fwd2(c->t1), fwd2(c->t2))};

    case CombKind::Ev: {
      // D[ev]2 = let y = snd x in lfst ; leval y  +  lsnd ; snd ((fst x) y)
      TypePtr s2 = fwd2(c->t1), t2 = fwd2(c->t2);
      TypePtr fun_tan = fun_type(fwd1(c->t1), t2);  // D[s -> t]2
      std::string y = ng.fresh("y");
      TermPtr primal = mk_fst(mk_app(mk_fst(mk_var(x)), mk_snd(mk_var(x))));
      TermPtr deriv = mk_let(
          y, mk_snd(mk_var(x)),
          mk_plus(mk_lcomp(mk_lfst(fun_tan, s2), mk_leval(mk_var(y), t2)),
                  mk_lcomp(mk_lsnd(fun_tan, s2), mk_snd(mk_app(mk_fst(mk_var(x)), mk_var(y))))));
      return {primal, deriv};
    }

    case CombKind::Curry: {
      // body f : ctx x binder -> result
      std::string z = ng.fresh("z");
      PrimalDeriv f = fwd_split(c->f, z, ng);
      TypePtr ctx2 = fwd2(c->t1), bind2 = fwd2(c->t2);
      std::string y = ng.fresh("y");
      TermPtr paired = mk_pair(mk_var(x), mk_var(y));
      TermPtr primal = mk_lam(
          y, fwd1(c->t2),
          mk_let(z, paired,
                 mk_pair(f.primal,
                         mk_lcomp(mk_lpair(mk_zero(linfun_type(bind2, ctx2)), mk_lid(bind2)),
                                  f.deriv))));
      TermPtr deriv = mk_lswap(mk_lam(
          y, fwd1(c->t2),
          mk_let(z, paired,
                 mk_lcomp(mk_lpair(mk_lid(ctx2), mk_zero(linfun_type(ctx2, bind2))), f.deriv))));
      return {primal, deriv};
    }

    case CombKind::Op: {
      const OpSpec& op = op_of(c);
      return {op.fwd_primal(mk_var(x), ng), op.fwd_deriv(mk_var(x), ng)};
    }
  }
  throw Error(ErrorCode::Internal, "fwd_split");
}

inline PrimalDeriv rev_split(const CombPtr& c, const std::string& x, NameGen& ng) {
  switch (c->kind) {
    case CombKind::Id:
      return {mk_var(x), mk_lid(rev2(c->t1))};

    case CombKind::Comp: {
      // Dt[t;s]2 = Dt[s]2[y := Dt[t]1] ; Dt[t]2   (reversed order)
      PrimalDeriv f = rev_split(c->f, x, ng);
      std::string y = ng.fresh("y");
      PrimalDeriv g = rev_split(c->g, y, ng);
      return {mk_let(y, f.primal, g.primal),
              mk_lcomp(mk_let(y, f.primal, g.deriv), f.deriv)};
    }

    case CombKind::Terminal:
      return {mk_unit(), mk_zero(linfun_type(unit_type(), rev2(c->t1)))};

    case CombKind::Pair: {
      // fanout becomes addition of the pulled-back adjoints
      PrimalDeriv f = rev_split(c->f, x, ng);
      PrimalDeriv g = rev_split(c->g, x, ng);
      TypePtr l2 = rev2(comb_cod(c->f)), r2 = rev2(comb_cod(c->g));
      return {mk_pair(f.primal, g.primal),
              mk_plus(mk_lcomp(mk_lfst(l2, r2), f.deriv), mk_lcomp(mk_lsnd(l2, r2), g.deriv))};
    }

    case CombKind::Fst: {
      TypePtr l2 = rev2(c->t1), r2 = rev2(c->t2);
      return {mk_fst(mk_var(x)), mk_lpair(mk_lid(l2), mk_zero(linfun_type(l2, r2)))};
    }
    case CombKind::Snd: {
      TypePtr l2 = rev2(c->t1), r2 = rev2(c->t2);
      return {mk_snd(mk_var(x)), mk_lpair(mk_zero(linfun_type(r2, l2)), mk_lid(r2))};
    }

    case CombKind::Ev: {
      // Dt[ev]2 = let y = snd x in lpair(lsing y, snd ((fst x) y))
      TypePtr t2 = rev2(c->t2);
      std::string y = ng.fresh("y");
      TermPtr primal = mk_fst(mk_app(mk_fst(mk_var(x)), mk_snd(mk_var(x))));
      TermPtr deriv = mk_let(
          y, mk_snd(mk_var(x)),
          mk_lpair(mk_lsing(mk_var(y), t2), mk_snd(mk_app(mk_fst(mk_var(x)), mk_var(y)))));
      return {primal, deriv};
    }

    case CombKind::Curry: {
      std::string z = ng.fresh("z");
      PrimalDeriv f = rev_split(c->f, z, ng);
      TypePtr ctx2 = rev2(c->t1), bind2 = rev2(c->t2);
      std::string y = ng.fresh("y");
      TermPtr paired = mk_pair(mk_var(x), mk_var(y));
      TermPtr primal = mk_lam(
          y, rev1(c->t2),
          mk_let(z, paired, mk_pair(f.primal, mk_lcomp(f.deriv, mk_lsnd(ctx2, bind2)))));
      TermPtr deriv = mk_lcomp(
          mk_lcurryinv(mk_lam(y, rev1(c->t2), mk_let(z, paired, f.deriv)),
                       prod_type(ctx2, bind2)),
          mk_lfst(ctx2, bind2));
      return {primal, deriv};
    }

    case CombKind::Op: {
      const OpSpec& op = op_of(c);
      return {op.rev_primal(mk_var(x), ng), op.rev_deriv(mk_var(x), ng)};
    }
  }
  throw Error(ErrorCode::Internal, "rev_split");
}

}  // namespace detail

inline AdOutput forward_ad(const CombPtr& c, const std::string& var = "arg") {
  NameGen ng;
  ng.avoid(var);
  auto pd = detail::fwd_split(c, var, ng);
  return AdOutput{Mode::Forward, comb_dom(c), comb_cod(c), var, pd.primal, pd.deriv};
}

inline AdOutput reverse_ad(const CombPtr& c, const std::string& var = "arg") {
  NameGen ng;
  ng.avoid(var);
  auto pd = detail::rev_split(c, var, ng);
  return AdOutput{Mode::Reverse, comb_dom(c), comb_cod(c), var, pd.primal, pd.deriv};
}

// Types the transformed terms must inhabit; exposed so tests can verify
// the typing-preservation property against typecheck_target.
inline TypePtr predicted_primal_ctx(const AdOutput& o) {
  return o.mode == Mode::Forward ? detail::fwd1(o.src) : detail::rev1(o.src);
}
inline TypePtr predicted_primal_type(const AdOutput& o) {
  return o.mode == Mode::Forward ? detail::fwd1(o.dst) : detail::rev1(o.dst);
}
inline TypePtr predicted_deriv_type(const AdOutput& o) {
  if (o.mode == Mode::Forward)
    return linfun_type(detail::fwd2(o.src), detail::fwd2(o.dst));
  return linfun_type(detail::rev2(o.dst), detail::rev2(o.src));
}

}  // namespace adlam
