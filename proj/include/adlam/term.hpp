#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "adlam/type.hpp"

namespace adlam {

// One AST covers both languages: the source constructors plus the
// zero/plus monoid and the linear combinator constants of the target.
// Source-language passes reject the target-only constructors.
enum class TermKind {
  Var, Op, UnitVal, Pair, Fst, Snd, Lam, App, Let,
  Zero, Plus, LOp, LId, LComp, LApp, LSwap, LEval, LSing, LCurryInv,
  LFst, LSnd, LPair
};

struct Loc {
  int line = 0;
  int col = 0;
};

inline const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::Var: return "var";
    case TermKind::Op: return "op";
    case TermKind::UnitVal: return "unit";
    case TermKind::Pair: return "pair";
    case TermKind::Fst: return "fst";
    case TermKind::Snd: return "snd";
    case TermKind::Lam: return "lam";
    case TermKind::App: return "app";
    case TermKind::Let: return "let";
    case TermKind::Zero: return "zero";
    case TermKind::Plus: return "plus";
    case TermKind::LOp: return "lop";
    case TermKind::LId: return "lid";
    case TermKind::LComp: return "lcomp";
    case TermKind::LApp: return "lapp";
    case TermKind::LSwap: return "lswap";
    case TermKind::LEval: return "leval";
    case TermKind::LSing: return "lsing";
    case TermKind::LCurryInv: return "lcurryinv";
    case TermKind::LFst: return "lfst";
    case TermKind::LSnd: return "lsnd";
    case TermKind::LPair: return "lpair";
  }
  return "?";
}

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  Loc loc;
  std::string name;   // Var/Op/LOp name, Lam/Let binder
  TypePtr ann;        // Lam binder type; Zero/LId type; LEval cod; LSing value slot; LCurryInv cod; LFst/LSnd left
  TypePtr ann2;       // LFst/LSnd right
  TermPtr a, b;
};

namespace detail {
inline TermPtr node(TermKind k, std::string name, TypePtr ann, TypePtr ann2,
                    TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term{k, Loc{}, std::move(name), std::move(ann),
                                     std::move(ann2), std::move(a), std::move(b)});
}
}  // namespace detail

inline TermPtr mk_var(std::string n) { return detail::node(TermKind::Var, std::move(n), nullptr, nullptr, nullptr, nullptr); }
inline TermPtr mk_op(std::string n, TermPtr arg) { return detail::node(TermKind::Op, std::move(n), nullptr, nullptr, std::move(arg), nullptr); }
inline TermPtr mk_unit() { return detail::node(TermKind::UnitVal, "", nullptr, nullptr, nullptr, nullptr); }
inline TermPtr mk_pair(TermPtr l, TermPtr r) { return detail::node(TermKind::Pair, "", nullptr, nullptr, std::move(l), std::move(r)); }
inline TermPtr mk_fst(TermPtr t) { return detail::node(TermKind::Fst, "", nullptr, nullptr, std::move(t), nullptr); }
inline TermPtr mk_snd(TermPtr t) { return detail::node(TermKind::Snd, "", nullptr, nullptr, std::move(t), nullptr); }
inline TermPtr mk_lam(std::string binder, TypePtr ty, TermPtr body) { return detail::node(TermKind::Lam, std::move(binder), std::move(ty), nullptr, std::move(body), nullptr); }
inline TermPtr mk_app(TermPtr f, TermPtr arg) { return detail::node(TermKind::App, "", nullptr, nullptr, std::move(f), std::move(arg)); }
inline TermPtr mk_let(std::string binder, TermPtr bound, TermPtr body) { return detail::node(TermKind::Let, std::move(binder), nullptr, nullptr, std::move(bound), std::move(body)); }

inline TermPtr mk_zero(TypePtr ty) { return detail::node(TermKind::Zero, "", std::move(ty), nullptr, nullptr, nullptr); }
inline TermPtr mk_plus(TermPtr l, TermPtr r) { return detail::node(TermKind::Plus, "", nullptr, nullptr, std::move(l), std::move(r)); }
inline TermPtr mk_lop(std::string n, TermPtr primal) { return detail::node(TermKind::LOp, std::move(n), nullptr, nullptr, std::move(primal), nullptr); }
inline TermPtr mk_lid(TypePtr ty) { return detail::node(TermKind::LId, "", std::move(ty), nullptr, nullptr, nullptr); }
inline TermPtr mk_lcomp(TermPtr f, TermPtr g) { return detail::node(TermKind::LComp, "", nullptr, nullptr, std::move(f), std::move(g)); }
inline TermPtr mk_lapp(TermPtr f, TermPtr arg) { return detail::node(TermKind::LApp, "", nullptr, nullptr, std::move(f), std::move(arg)); }
inline TermPtr mk_lswap(TermPtr t) { return detail::node(TermKind::LSwap, "", nullptr, nullptr, std::move(t), nullptr); }
inline TermPtr mk_leval(TermPtr point, TypePtr cod) { return detail::node(TermKind::LEval, "", std::move(cod), nullptr, std::move(point), nullptr); }
inline TermPtr mk_lsing(TermPtr key, TypePtr slot) { return detail::node(TermKind::LSing, "", std::move(slot), nullptr, std::move(key), nullptr); }
inline TermPtr mk_lcurryinv(TermPtr family, TypePtr cod) { return detail::node(TermKind::LCurryInv, "", std::move(cod), nullptr, std::move(family), nullptr); }
inline TermPtr mk_lfst(TypePtr l, TypePtr r) { return detail::node(TermKind::LFst, "", std::move(l), std::move(r), nullptr, nullptr); }
inline TermPtr mk_lsnd(TypePtr l, TypePtr r) { return detail::node(TermKind::LSnd, "", std::move(l), std::move(r), nullptr, nullptr); }
inline TermPtr mk_lpair(TermPtr f, TermPtr g) { return detail::node(TermKind::LPair, "", nullptr, nullptr, std::move(f), std::move(g)); }

inline TermPtr with_loc(TermPtr t, Loc loc) {
  auto copy = std::make_shared<Term>(*t);
  copy->loc = loc;
  return copy;
}

inline bool binds(TermKind k) { return k == TermKind::Lam || k == TermKind::Let; }

inline void free_vars_into(const TermPtr& t, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermKind::Lam: {
      bool fresh = bound.insert(t->name).second;
      free_vars_into(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    case TermKind::Let: {
      free_vars_into(t->a, bound, out);
      bool fresh = bound.insert(t->name).second;
      free_vars_into(t->b, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    default:
      if (t->a) free_vars_into(t->a, bound, out);
      if (t->b) free_vars_into(t->b, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

inline void all_names_into(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == TermKind::Var) out.insert(t->name);
  if (binds(t->kind)) out.insert(t->name);
  if (t->a) all_names_into(t->a, out);
  if (t->b) all_names_into(t->b, out);
}

// Deterministic fresh-name supply. Seeding it with every name occurring
// in the input keeps generated binders from ever colliding.
class NameGen {
 public:
  NameGen() = default;
  explicit NameGen(const TermPtr& avoid) { all_names_into(avoid, used_); }

  void avoid(const TermPtr& t) { all_names_into(t, used_); }
  void avoid(const std::string& n) { used_.insert(n); }

  std::string fresh(const std::string& stem) {
    while (true) {
      std::string cand = stem + std::to_string(++counter_);
      if (used_.insert(cand).second) return cand;
    }
  }

 private:
  std::set<std::string> used_;
  unsigned long counter_ = 0;
};

namespace detail {
inline bool alpha_eq(const TermPtr& x, const TermPtr& y,
                     std::map<std::string, std::string>& xy,
                     std::map<std::string, std::string>& yx);
}

// Equality up to consistent renaming of bound variables.
inline bool alpha_equal(const TermPtr& x, const TermPtr& y) {
  std::map<std::string, std::string> xy, yx;
  return detail::alpha_eq(x, y, xy, yx);
}

namespace detail {
inline bool alpha_eq(const TermPtr& x, const TermPtr& y,
                     std::map<std::string, std::string>& xy,
                     std::map<std::string, std::string>& yx) {
  if (x->kind != y->kind) return false;
  auto ann_eq = [](const TypePtr& a, const TypePtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return type_equal(a, b);
  };
  if (!ann_eq(x->ann, y->ann) || !ann_eq(x->ann2, y->ann2)) return false;
  switch (x->kind) {
    case TermKind::Var: {
      auto it = xy.find(x->name);
      if (it != xy.end()) return it->second == y->name && yx.at(y->name) == x->name;
      // free on the left: must be identical and free on the right
      return x->name == y->name && !yx.count(y->name);
    }
    case TermKind::Op:
    case TermKind::LOp:
      return x->name == y->name && alpha_eq(x->a, y->a, xy, yx);
    case TermKind::Lam:
    case TermKind::Let: {
      if (x->kind == TermKind::Let && !alpha_eq(x->a, y->a, xy, yx)) return false;
      auto saved_x = xy, saved_y = yx;
      xy[x->name] = y->name;
      yx[y->name] = x->name;
      const TermPtr& xbody = x->kind == TermKind::Lam ? x->a : x->b;
      const TermPtr& ybody = y->kind == TermKind::Lam ? y->a : y->b;
      bool ok = alpha_eq(xbody, ybody, xy, yx);
      xy = std::move(saved_x);
      yx = std::move(saved_y);
      return ok;
    }
    default:
      if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
      if (x->a && !alpha_eq(x->a, y->a, xy, yx)) return false;
      if (x->b && !alpha_eq(x->b, y->b, xy, yx)) return false;
      return true;
  }
}
}  // namespace detail

// Structural equality (names compared literally, annotations included).
inline bool term_equal(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->name != y->name) return false;
  auto ann_eq = [](const TypePtr& a, const TypePtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return type_equal(a, b);
  };
  if (!ann_eq(x->ann, y->ann) || !ann_eq(x->ann2, y->ann2)) return false;
  if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
  if (x->a && !term_equal(x->a, y->a)) return false;
  if (x->b && !term_equal(x->b, y->b)) return false;
  return true;
}

}  // namespace adlam
