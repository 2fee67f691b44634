#pragma once

#include <memory>
#include <string>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/term.hpp"
#include "adlam/value.hpp"

namespace adlam {

// Persistent environment; closures share tails.
struct EnvNode {
  std::string name;
  ValuePtr value;
  std::shared_ptr<const EnvNode> next;
};
using Env = std::shared_ptr<const EnvNode>;

inline Env env_bind(Env env, std::string name, ValuePtr v) {
  return std::make_shared<EnvNode>(EnvNode{std::move(name), std::move(v), std::move(env)});
}

inline const ValuePtr& env_lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return n->value;
  throw Error(ErrorCode::UnboundVariable, "variable '" + name + "' at evaluation time");
}

namespace detail {

// First-order type reconstruction, used to resolve op instances from the
// shape of the evaluated argument.
inline TypePtr type_of_ground(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::RealVec: return real_type(static_cast<int>(v->vec.size()));
    case ValueKind::Unit: return unit_type();
    case ValueKind::Pair: return prod_type(type_of_ground(v->l), type_of_ground(v->r));
    default:
      throw Error(ErrorCode::Internal, "operation argument is not first-order data");
  }
}

inline void flatten_args(const ValuePtr& v, std::vector<std::vector<double>>& out) {
  switch (v->kind) {
    case ValueKind::RealVec: out.push_back(v->vec); return;
    case ValueKind::Unit: return;
    case ValueKind::Pair:
      flatten_args(v->l, out);
      flatten_args(v->r, out);
      return;
    default: throw Error(ErrorCode::Internal, "operation argument is not first-order data");
  }
}

}  // namespace detail

// Environment-based call-by-value evaluator for the applied target
// language; total on typechecked terms.
inline ValuePtr eval_definitional(const Env& env, const TermPtr& t,
                                  const Registry& reg = builtin_registry()) {
  switch (t->kind) {
    case TermKind::Var: return env_lookup(env, t->name);

    case TermKind::Op: {
      ValuePtr arg = eval_definitional(env, t->a, reg);
      if (t->name == "map") {
        const ValuePtr& f = arg->l;
        const auto& xs = arg->r->vec;
        std::vector<double> out(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) out[i] = f->call(v_scalar(xs[i]))->vec[0];
        return v_real(std::move(out));
      }
      OpSpec spec = reg.resolve(t->name, detail::type_of_ground(arg));
      std::vector<std::vector<double>> args;
      detail::flatten_args(arg, args);
      return v_real(spec.sem(args));
    }

    case TermKind::UnitVal: return v_unit();
    case TermKind::Pair:
      return v_pair(eval_definitional(env, t->a, reg), eval_definitional(env, t->b, reg));
    case TermKind::Fst: return eval_definitional(env, t->a, reg)->l;
    case TermKind::Snd: return eval_definitional(env, t->a, reg)->r;

    case TermKind::Lam: {
      TermPtr body = t->a;
      std::string binder = t->name;
      const Registry* r = &reg;
      return v_fun([env, binder, body, r](const ValuePtr& v) {
        return eval_definitional(env_bind(env, binder, v), body, *r);
      });
    }
    case TermKind::App: {
      ValuePtr f = eval_definitional(env, t->a, reg);
      return f->call(eval_definitional(env, t->b, reg));
    }
    case TermKind::Let: {
      ValuePtr bound = eval_definitional(env, t->a, reg);
      return eval_definitional(env_bind(env, t->name, std::move(bound)), t->b, reg);
    }

    case TermKind::Zero: return zero_of(t->ann);
    case TermKind::Plus:
      return plus_values(eval_definitional(env, t->a, reg), eval_definitional(env, t->b, reg));

    case TermKind::LOp: {
      ValuePtr primal = eval_definitional(env, t->a, reg);
      const LinOpSpec* lop = &reg.lop(t->name);
      return v_fun([primal, lop](const ValuePtr& v) { return lop->apply(primal, v); }, true);
    }
    case TermKind::LId:
      return v_fun([](const ValuePtr& v) { return v; }, true);
    case TermKind::LComp: {
      ValuePtr f = eval_definitional(env, t->a, reg);
      ValuePtr g = eval_definitional(env, t->b, reg);
      return v_fun([f, g](const ValuePtr& v) { return g->call(f->call(v)); }, true);
    }
    case TermKind::LApp: {
      ValuePtr f = eval_definitional(env, t->a, reg);
      return f->call(eval_definitional(env, t->b, reg));
    }
    case TermKind::LSwap: {
      ValuePtr fam = eval_definitional(env, t->a, reg);
      return v_fun(
          [fam](const ValuePtr& x) {
            return v_fun([fam, x](const ValuePtr& y) { return fam->call(y)->call(x); });
          },
          true);
    }
    case TermKind::LEval: {
      ValuePtr point = eval_definitional(env, t->a, reg);
      return v_fun([point](const ValuePtr& f) { return f->call(point); }, true);
    }
    case TermKind::LSing: {
      ValuePtr key = eval_definitional(env, t->a, reg);
      return v_fun([key](const ValuePtr& v) { return v_map({{key, v}}); }, true);
    }
    case TermKind::LCurryInv: {
      ValuePtr fam = eval_definitional(env, t->a, reg);
      TypePtr cod = t->ann;
      // left-to-right accumulation; the map quotient makes the order
      // unobservable up to rounding
      return v_fun(
          [fam, cod](const ValuePtr& m) {
            ValuePtr acc = zero_of(cod);
            for (const auto& [k, v] : m->entries) acc = plus_values(acc, fam->call(k)->call(v));
            return acc;
          },
          true);
    }
    case TermKind::LFst:
      return v_fun([](const ValuePtr& p) { return p->l; }, true);
    case TermKind::LSnd:
      return v_fun([](const ValuePtr& p) { return p->r; }, true);
    case TermKind::LPair: {
      ValuePtr f = eval_definitional(env, t->a, reg);
      ValuePtr g = eval_definitional(env, t->b, reg);
      return v_fun([f, g](const ValuePtr& v) { return v_pair(f->call(v), g->call(v)); }, true);
    }
  }
  throw Error(ErrorCode::Internal, "eval: unhandled construct");
}

inline ValuePtr eval_closed(const TermPtr& t, const Registry& reg = builtin_registry()) {
  return eval_definitional(nullptr, t, reg);
}

}  // namespace adlam
