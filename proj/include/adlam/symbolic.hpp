#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/term.hpp"
#include "adlam/value.hpp"

namespace adlam {

// Capture-avoiding substitution of a closed term for a free variable.
// Inner binders of the same name shadow; since the replacement is
// closed, no renaming is ever required.
inline TermPtr subst(const TermPtr& t, const std::string& name, const TermPtr& rep) {
  switch (t->kind) {
    case TermKind::Var: return t->name == name ? rep : t;
    case TermKind::Lam:
      if (t->name == name) return t;
      return mk_lam(t->name, t->ann, subst(t->a, name, rep));
    case TermKind::Let: {
      TermPtr bound = subst(t->a, name, rep);
      TermPtr body = t->name == name ? t->b : subst(t->b, name, rep);
      return mk_let(t->name, bound, body);
    }
    default: {
      if (!t->a && !t->b) return t;
      auto copy = std::make_shared<Term>(*t);
      if (t->a) copy->a = subst(t->a, name, rep);
      if (t->b) copy->b = subst(t->b, name, rep);
      return copy;
    }
  }
}

// Big-step call-by-name evaluator for closed terms of the applied
// target language. Ground results normalize to constant ops; map-typed
// results normalize to sums of singleton applications, which only
// lcurryinv can consume. Serves as a cross-check of the definitional
// evaluator: at ground types the two must agree.
class SymbolicEvaluator {
 public:
  explicit SymbolicEvaluator(const Registry& reg = builtin_registry()) : reg_(reg) {}

  TermPtr eval(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var:
        throw Error(ErrorCode::NoRuleApplies, "free variable '" + t->name + "'");

      case TermKind::Op: return eval_op(t);

      case TermKind::UnitVal:
      case TermKind::Pair:  // pairs are lazy; components evaluate on projection
      case TermKind::Lam:
      case TermKind::LOp:
      case TermKind::LId:
      case TermKind::LComp:
      case TermKind::LSwap:
      case TermKind::LEval:
      case TermKind::LSing:
      case TermKind::LCurryInv:
      case TermKind::LFst:
      case TermKind::LSnd:
      case TermKind::LPair:
        return t;

      case TermKind::Fst: {
        TermPtr p = eval(t->a);
        if (p->kind != TermKind::Pair) throw stuck("fst", p);
        return eval(p->a);
      }
      case TermKind::Snd: {
        TermPtr p = eval(t->a);
        if (p->kind != TermKind::Pair) throw stuck("snd", p);
        return eval(p->b);
      }

      case TermKind::App: {
        TermPtr f = eval(t->a);
        if (f->kind == TermKind::Lam) {
          TermPtr arg = eval(t->b);
          return eval(subst(f->a, f->name, arg));
        }
        if (f->kind == TermKind::Zero && f->ann->kind == TypeKind::Fun)
          return eval(mk_zero(f->ann->right));
        if (f->kind == TermKind::Plus)
          return plus_nf(eval(mk_app(f->a, t->b)), eval(mk_app(f->b, t->b)));
        throw stuck("application", f);
      }

      case TermKind::Let: {
        TermPtr bound = eval(t->a);
        return eval(subst(t->b, t->name, bound));
      }

      case TermKind::Zero: {
        switch (t->ann->kind) {
          case TypeKind::Real: return mk_const(std::vector<double>(t->ann->width, 0.0));
          case TypeKind::Unit: return mk_unit();
          case TypeKind::Prod:
            return mk_pair(eval(mk_zero(t->ann->left)), eval(mk_zero(t->ann->right)));
          default: return t;  // zero at function/linear/map types is normal
        }
      }

      case TermKind::Plus: return plus_nf(eval(t->a), eval(t->b));

      case TermKind::LApp: return eval_lapp(t);
    }
    throw Error(ErrorCode::Internal, "symbolic eval: unhandled construct");
  }

  // Extract the payload of a ground normal form.
  std::vector<double> ground(const TermPtr& nf) {
    auto c = const_payload(nf);
    if (!c) throw stuck("ground result", nf);
    return *c;
  }

 private:
  static Error stuck(const std::string& where, const TermPtr& t) {
    return Error(ErrorCode::NoRuleApplies,
                 where + ": no applicable rule for a '" + std::string(t ? term_kind_name(t->kind) : "?") +
                     "' normal form (ill-typed input?)");
  }

  static std::optional<std::vector<double>> const_payload(const TermPtr& t) {
    if (t->kind != TermKind::Op || !t->a || t->a->kind != TermKind::UnitVal) return std::nullopt;
    return parse_const_op_name(t->name);
  }

  TermPtr plus_nf(const TermPtr& a, const TermPtr& b) {
    auto ca = const_payload(a), cb = const_payload(b);
    if (ca && cb) {
      if (ca->size() != cb->size())
        throw Error(ErrorCode::WidthMismatch, "plus of constants of different widths");
      std::vector<double> out(ca->size());
      for (size_t i = 0; i < out.size(); ++i) out[i] = (*ca)[i] + (*cb)[i];
      return mk_const(out);
    }
    if (a->kind == TermKind::UnitVal && b->kind == TermKind::UnitVal) return mk_unit();
    if (a->kind == TermKind::Pair && b->kind == TermKind::Pair)
      return mk_pair(eval(mk_plus(a->a, b->a)), eval(mk_plus(a->b, b->b)));
    return mk_plus(a, b);  // sums at function/linear/map types are normal
  }

  ValuePtr ground_value(const TermPtr& t) {
    TermPtr n = eval(t);
    if (auto c = const_payload(n)) return v_real(*c);
    switch (n->kind) {
      case TermKind::UnitVal: return v_unit();
      case TermKind::Pair: return v_pair(ground_value(n->a), ground_value(n->b));
      default: throw stuck("first-order data", n);
    }
  }

  TermPtr nf_of_value(const ValuePtr& v) {
    switch (v->kind) {
      case ValueKind::RealVec: return mk_const(v->vec);
      case ValueKind::Unit: return mk_unit();
      case ValueKind::Pair: return mk_pair(nf_of_value(v->l), nf_of_value(v->r));
      case ValueKind::Map: {
        // left-nested sum of singleton applications
        TermPtr acc;
        for (const auto& [k, val] : v->entries) {
          TermPtr key_nf = nf_of_value(k);
          TermPtr entry = mk_lapp(mk_lsing(key_nf, real_type(1)), nf_of_value(val));
          acc = acc ? mk_plus(acc, entry) : entry;
        }
        return acc ? acc : mk_zero(map_type(real_type(1), real_type(1)));
      }
      default: throw Error(ErrorCode::Internal, "cannot reflect a closure back into syntax");
    }
  }

  TermPtr eval_op(const TermPtr& t) {
    if (t->name == "map") {
      TermPtr p = eval(t->a);
      if (p->kind != TermKind::Pair) throw stuck("map", p);
      TermPtr fn = p->a;  // unevaluated, by name
      std::vector<double> xs = ground(eval(p->b));
      std::vector<double> out(xs.size());
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] = ground(eval(mk_app(fn, mk_const(xs[i]))))[0];
      return mk_const(out);
    }
    ValuePtr arg = ground_value(t->a);
    TypePtr arg_ty = ground_type(arg);
    OpSpec spec = reg_.resolve(t->name, arg_ty);
    std::vector<std::vector<double>> args;
    flatten(arg, args);
    return mk_const(spec.sem(args));
  }

  static TypePtr ground_type(const ValuePtr& v) {
    switch (v->kind) {
      case ValueKind::RealVec: return real_type(static_cast<int>(v->vec.size()));
      case ValueKind::Unit: return unit_type();
      case ValueKind::Pair: return prod_type(ground_type(v->l), ground_type(v->r));
      default: throw Error(ErrorCode::Internal, "not ground");
    }
  }

  static void flatten(const ValuePtr& v, std::vector<std::vector<double>>& out) {
    switch (v->kind) {
      case ValueKind::RealVec: out.push_back(v->vec); return;
      case ValueKind::Unit: return;
      case ValueKind::Pair:
        flatten(v->l, out);
        flatten(v->r, out);
        return;
      default: throw Error(ErrorCode::Internal, "not ground");
    }
  }

  TermPtr apply_lop(const TermPtr& lop_nf, const TermPtr& arg) {
    const std::string& name = lop_nf->name;
    if (name == "lmapapp") {
      std::vector<double> xs = ground(eval(lop_nf->a));
      std::vector<double> out(xs.size());
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] = ground(eval(mk_app(arg, mk_const(xs[i]))))[0];
      return mk_const(out);
    }
    if (name == "lpointwise") {
      TermPtr p = eval(lop_nf->a);
      if (p->kind != TermKind::Pair) throw stuck("lpointwise", p);
      TermPtr fn = p->a;
      std::vector<double> xs = ground(eval(p->b));
      std::vector<double> ws = ground(eval(arg));
      if (xs.size() != ws.size()) throw Error(ErrorCode::WidthMismatch, "lpointwise widths");
      std::vector<double> out(xs.size());
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] = ground(eval(mk_lapp(mk_snd(mk_app(fn, mk_const(xs[i]))), mk_const(ws[i]))))[0];
      return mk_const(out);
    }
    // first-order linear op: evaluate both sides to data and run the
    // same kernel the definitional evaluator uses
    ValuePtr primal = ground_value(lop_nf->a);
    ValuePtr lin = ground_value(arg);
    return nf_of_value(reg_.lop(name).apply(primal, lin));
  }

  TermPtr eval_lapp(const TermPtr& t) {
    TermPtr f = eval(t->a);
    switch (f->kind) {
      case TermKind::Zero:
        if (f->ann->kind == TypeKind::LinFun) return eval(mk_zero(f->ann->right));
        throw stuck("linear application of zero", f);
      case TermKind::Plus:
        return plus_nf(eval(mk_lapp(f->a, t->b)), eval(mk_lapp(f->b, t->b)));
      case TermKind::LOp: return apply_lop(f, t->b);
      case TermKind::LId: return eval(t->b);
      case TermKind::LComp: {
        TermPtr mid = eval(mk_lapp(f->a, t->b));
        return eval(mk_lapp(f->b, mid));
      }
      case TermKind::LFst: {
        TermPtr p = eval(t->b);
        if (p->kind != TermKind::Pair) throw stuck("lfst", p);
        return eval(p->a);
      }
      case TermKind::LSnd: {
        TermPtr p = eval(t->b);
        if (p->kind != TermKind::Pair) throw stuck("lsnd", p);
        return eval(p->b);
      }
      case TermKind::LPair:
        return mk_pair(eval(mk_lapp(f->a, t->b)), eval(mk_lapp(f->b, t->b)));
      case TermKind::LSing:
        return mk_lapp(f, t->b);  // map singletons are normal forms
      case TermKind::LEval: return eval(mk_app(t->b, f->a));
      case TermKind::LSwap: {
        std::string x = ng_.fresh("sw");
        return mk_lam(x, nullptr, mk_lapp(mk_app(f->a, mk_var(x)), t->b));
      }
      case TermKind::LCurryInv: {
        TermPtr m = eval(t->b);
        if (m->kind == TermKind::Zero) return eval(mk_zero(f->ann));
        if (m->kind == TermKind::Plus)
          return plus_nf(eval(mk_lapp(f, m->a)), eval(mk_lapp(f, m->b)));
        if (m->kind == TermKind::LApp) {
          TermPtr sing = eval(m->a);
          if (sing->kind == TermKind::LSing)
            return eval(mk_lapp(mk_app(f->a, sing->a), m->b));
        }
        throw stuck("lcurryinv", m);
      }
      default: throw stuck("linear application", f);
    }
  }

  const Registry& reg_;
  NameGen ng_;
};

inline TermPtr eval_symbolic(const TermPtr& t, const Registry& reg = builtin_registry()) {
  SymbolicEvaluator ev(reg);
  return ev.eval(t);
}

}  // namespace adlam
