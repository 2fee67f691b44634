#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/term.hpp"
#include "adlam/type.hpp"
#include "adlam/value.hpp"

namespace adlam {

// Shortest round-trip formatting for doubles; locale-independent.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double out = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Primitive operations.
//
// An op family (e.g. elementwise `add` at every width) resolves against a
// concrete argument type to an OpSpec instance. Builders produce target
// terms: given the primal argument (normally a variable of type Dom(op)),
// fwd_deriv yields a term of type LinFun(Dom(op), realᵐ) and rev_deriv one
// of type LinFun(realᵐ, Dom(op)).
// ---------------------------------------------------------------------------

using DerivBuilder = std::function<TermPtr(const TermPtr& primal, NameGen& ng)>;

struct OpSpec {
  std::string name;
  std::vector<int> domain_widths;  // n1..nk; empty for constants
  TypePtr dom;
  int codomain_width = 1;
  TypePtr cod;
  bool higher_order = false;  // map only
  std::vector<double> payload;  // const only
  std::function<std::vector<double>(const std::vector<std::vector<double>>&)> sem;
  DerivBuilder fwd_deriv, rev_deriv;
  // Primal builders; identical to plain re-application except for map,
  // whose transformed function argument must be composed with fst.
  DerivBuilder fwd_primal, rev_primal;
};

struct LinOpSpec {
  std::string name;
  // primal type -> (linear domain, linear codomain)
  std::function<std::pair<TypePtr, TypePtr>(const TypePtr&)> resolve;
  // Native semantics over runtime values. Derivatives of higher-order
  // primitives work on the internal representations of LinFun and Map
  // values here, behind the term-level abstraction.
  std::function<ValuePtr(const ValuePtr& primal, const ValuePtr& arg)> apply;
};

// const[c1,c2,...] op names carry their payload.
inline std::string const_op_name(const std::vector<double>& c) {
  std::string s = "const[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += format_double(c[i]);
  }
  return s + "]";
}

inline std::optional<std::vector<double>> parse_const_op_name(const std::string& name) {
  if (name.size() < 8 || name.rfind("const[", 0) != 0 || name.back() != ']') return std::nullopt;
  std::vector<double> out;
  std::string_view body(name.data() + 6, name.size() - 7);
  size_t start = 0;
  while (start <= body.size()) {
    size_t comma = body.find(',', start);
    std::string_view piece = body.substr(start, comma == std::string_view::npos ? body.size() - start : comma - start);
    auto d = parse_double(piece);
    if (!d) return std::nullopt;
    out.push_back(*d);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

inline TermPtr mk_const(const std::vector<double>& c) {
  return mk_op(const_op_name(c), mk_unit());
}

inline TermPtr mk_const(double c) { return mk_const(std::vector<double>{c}); }

class Registry {
 public:
  struct OpFamily {
    std::string name;
    std::function<std::optional<OpSpec>(const TypePtr& arg)> instantiate;
    // representative argument types, so invariant suites cover new ops
    // without being told about them
    std::vector<TypePtr> sample_args;
  };

  void register_op(OpFamily fam) { op_families_[fam.name] = std::move(fam); }
  void register_lop(LinOpSpec spec) { lops_[spec.name] = std::move(spec); }

  bool has_op(const std::string& name) const {
    return op_families_.count(name) > 0 || parse_const_op_name(name).has_value();
  }

  OpSpec resolve(const std::string& name, const TypePtr& arg) const {
    if (auto payload = parse_const_op_name(name)) {
      if (arg->kind != TypeKind::Unit)
        throw Error(ErrorCode::TypeMismatch, "constant op expects unit argument, found " + type_to_string(arg));
      return make_const_spec(*payload);
    }
    auto it = op_families_.find(name);
    if (it == op_families_.end()) throw Error(ErrorCode::UnknownOp, "unknown op '" + name + "'");
    auto spec = it->second.instantiate(arg);
    if (!spec)
      throw Error(ErrorCode::TypeMismatch,
                  "op '" + name + "' does not accept argument type " + type_to_string(arg));
    return *spec;
  }

  const LinOpSpec& lop(const std::string& name) const {
    auto it = lops_.find(name);
    if (it == lops_.end()) throw Error(ErrorCode::UnknownOp, "unknown linear op '" + name + "'");
    return it->second;
  }

  bool has_lop(const std::string& name) const { return lops_.count(name) > 0; }

  const std::map<std::string, OpFamily>& op_families() const { return op_families_; }

  static OpSpec make_const_spec(std::vector<double> payload);

 private:
  std::map<std::string, OpFamily> op_families_;
  std::map<std::string, LinOpSpec> lops_;
};

inline OpSpec Registry::make_const_spec(std::vector<double> payload) {
  OpSpec s;
  s.name = const_op_name(payload);
  s.dom = unit_type();
  s.codomain_width = static_cast<int>(payload.size());
  s.cod = real_type(s.codomain_width);
  s.payload = payload;
  s.sem = [payload](const std::vector<std::vector<double>>&) { return payload; };
  TypePtr dom = s.dom, cod = s.cod;
  s.fwd_deriv = [dom, cod](const TermPtr&, NameGen&) { return mk_zero(linfun_type(dom, cod)); };
  s.rev_deriv = [dom, cod](const TermPtr&, NameGen&) { return mk_zero(linfun_type(cod, dom)); };
  std::string self = s.name;
  s.fwd_primal = [self](const TermPtr& x, NameGen&) { return mk_op(self, x); };
  s.rev_primal = s.fwd_primal;
  return s;
}

namespace detail {

inline std::optional<int> real_width(const TypePtr& t) {
  if (t->kind == TypeKind::Real) return t->width;
  return std::nullopt;
}

inline std::optional<std::pair<int, int>> real_pair_widths(const TypePtr& t) {
  if (t->kind != TypeKind::Prod) return std::nullopt;
  auto l = real_width(t->left), r = real_width(t->right);
  if (!l || !r) return std::nullopt;
  return std::make_pair(*l, *r);
}

// (snd x) componentwise-scaled copies of (fst x), etc., shared between
// the two evaluators so results agree bitwise.
inline std::vector<double> ew_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline ValuePtr expect_real(const ValuePtr& v, size_t width, const char* who) {
  if (v->kind != ValueKind::RealVec || v->vec.size() != width)
    throw Error(ErrorCode::WidthMismatch, std::string(who) + ": bad linear argument");
  return v;
}

// Let-binds `t` unless it is already a variable; builders use this when
// the primal argument occurs more than once in the emitted term.
inline TermPtr share(const TermPtr& t, NameGen& ng, std::string stem,
                     const std::function<TermPtr(const TermPtr&)>& body) {
  if (t->kind == TermKind::Var) return body(t);
  std::string v = ng.fresh(std::move(stem));
  return mk_let(v, t, body(mk_var(v)));
}

}  // namespace detail

// The builtin registry: constants, elementwise add/mul/square,
// matrix-vector product, sum, sigmoid, the swap/inner/scale helpers the
// multiplication derivatives need, the two-component product, and the
// higher-order map.
inline Registry make_builtin_registry() {
  using detail::dot;
  using detail::ew_mul;
  using detail::expect_real;
  using detail::real_pair_widths;
  using detail::real_width;
  using detail::share;

  Registry reg;

  // --- linear operations -------------------------------------------------
  reg.register_lop(LinOpSpec{
      "lscale",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lscale expects a real primal");
        return std::make_pair(real_type(p->width), real_type(p->width));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        expect_real(v, p->vec.size(), "lscale");
        return v_real(ew_mul(p->vec, v->vec));
      }});

  reg.register_lop(LinOpSpec{
      "lrescale",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lrescale expects a real primal");
        return std::make_pair(real_type(1), real_type(p->width));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        expect_real(v, 1, "lrescale");
        std::vector<double> out(p->vec.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = v->vec[0] * p->vec[i];
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "lscalev",
      [](const TypePtr& p) {
        auto w = real_pair_widths(p);
        if (!w || w->first != 1) throw Error(ErrorCode::LinearityShape, "lscalev expects a (real 1) x (real n) primal");
        return std::make_pair(real_type(w->second), real_type(w->second));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        double c = p->l->vec[0];
        expect_real(v, p->r->vec.size(), "lscalev");
        std::vector<double> out(v->vec.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = c * v->vec[i];
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "lsum",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lsum expects a real primal");
        return std::make_pair(real_type(p->width), real_type(1));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        expect_real(v, p->vec.size(), "lsum");
        double acc = 0.0;
        for (double x : v->vec) acc += x;
        return v_scalar(acc);
      }});

  reg.register_lop(LinOpSpec{
      "lbroadcast",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lbroadcast expects a real primal");
        return std::make_pair(real_type(1), real_type(p->width));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        expect_real(v, 1, "lbroadcast");
        return v_real(std::vector<double>(p->vec.size(), v->vec[0]));
      }});

  reg.register_lop(LinOpSpec{
      "lswap2",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real || p->width != 2) throw Error(ErrorCode::LinearityShape, "lswap2 expects a (real 2) primal");
        return std::make_pair(real_type(2), real_type(2));
      },
      [](const ValuePtr&, const ValuePtr& v) {
        expect_real(v, 2, "lswap2");
        return v_real({v->vec[1], v->vec[0]});
      }});

  // Matrix lops take the whole (matrix, vector) primal pair so every
  // width is recoverable from the primal type. Matrices are row-major.
  auto matvec_dims = [](const TypePtr& p) {
    auto w = real_pair_widths(p);
    if (!w || w->second == 0 || w->first % w->second != 0)
      throw Error(ErrorCode::LinearityShape, "matrix lop expects a (real n*m) x (real m) primal");
    return std::make_pair(w->first / w->second, w->second);  // (n, m)
  };

  reg.register_lop(LinOpSpec{
      "lmatvec",
      [matvec_dims](const TypePtr& p) {
        auto [n, m] = matvec_dims(p);
        return std::make_pair(real_type(m), real_type(n));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        const auto& A = p->l->vec;
        size_t m = p->r->vec.size(), n = A.size() / m;
        expect_real(v, m, "lmatvec");
        std::vector<double> out(n);
        for (size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (size_t j = 0; j < m; ++j) acc += A[i * m + j] * v->vec[j];
          out[i] = acc;
        }
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "lmatvecmat",
      [matvec_dims](const TypePtr& p) {
        auto [n, m] = matvec_dims(p);
        return std::make_pair(real_type(n * m), real_type(n));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        const auto& x = p->r->vec;
        size_t m = x.size(), n = p->l->vec.size() / m;
        expect_real(v, n * m, "lmatvecmat");
        std::vector<double> out(n);
        for (size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (size_t j = 0; j < m; ++j) acc += v->vec[i * m + j] * x[j];
          out[i] = acc;
        }
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "lmatvect",
      [matvec_dims](const TypePtr& p) {
        auto [n, m] = matvec_dims(p);
        return std::make_pair(real_type(n), real_type(m));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        const auto& A = p->l->vec;
        size_t m = p->r->vec.size(), n = A.size() / m;
        expect_real(v, n, "lmatvect");
        std::vector<double> out(m, 0.0);
        for (size_t j = 0; j < m; ++j) {
          double acc = 0.0;
          for (size_t i = 0; i < n; ++i) acc += A[i * m + j] * v->vec[i];
          out[j] = acc;
        }
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "louter",
      [matvec_dims](const TypePtr& p) {
        auto [n, m] = matvec_dims(p);
        return std::make_pair(real_type(n), real_type(n * m));
      },
      [](const ValuePtr& p, const ValuePtr& v) {
        const auto& x = p->r->vec;
        size_t m = x.size(), n = p->l->vec.size() / m;
        expect_real(v, n, "louter");
        std::vector<double> out(n * m);
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < m; ++j) out[i * m + j] = v->vec[i] * x[j];
        return v_real(std::move(out));
      }});

  // Lops backing the map derivatives. These see the internal
  // representations: plain closures and lists of pairs.
  reg.register_lop(LinOpSpec{
      "lmapapp",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lmapapp expects a real primal");
        return std::make_pair(fun_type(real_type(1), real_type(1)), real_type(p->width));
      },
      [](const ValuePtr& p, const ValuePtr& g) {
        if (g->kind != ValueKind::Fun) throw Error(ErrorCode::Internal, "lmapapp: function argument expected");
        std::vector<double> out(p->vec.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = g->call(v_scalar(p->vec[i]))->vec[0];
        return v_real(std::move(out));
      }});

  auto pointwise_primal = [](const TypePtr& p) -> int {
    // (real 1 -> real 1 * (real 1 -o real 1)) * real n
    if (p->kind == TypeKind::Prod && p->left->kind == TypeKind::Fun &&
        p->right->kind == TypeKind::Real) {
      const TypePtr& c = p->left->right;
      if (type_equal(p->left->left, real_type(1)) && c->kind == TypeKind::Prod &&
          type_equal(c->left, real_type(1)) && c->right->kind == TypeKind::LinFun)
        return p->right->width;
    }
    throw Error(ErrorCode::LinearityShape, "lpointwise expects a (transformed function, array) primal");
  };

  reg.register_lop(LinOpSpec{
      "lpointwise",
      [pointwise_primal](const TypePtr& p) {
        int n = pointwise_primal(p);
        return std::make_pair(real_type(n), real_type(n));
      },
      [](const ValuePtr& p, const ValuePtr& w) {
        const ValuePtr& f = p->l;
        const auto& v = p->r->vec;
        expect_real(w, v.size(), "lpointwise");
        std::vector<double> out(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
          ValuePtr lin = f->call(v_scalar(v[i]))->r;
          out[i] = lin->call(v_scalar(w->vec[i]))->vec[0];
        }
        return v_real(std::move(out));
      }});

  reg.register_lop(LinOpSpec{
      "lzip",
      [](const TypePtr& p) {
        if (p->kind != TypeKind::Real) throw Error(ErrorCode::LinearityShape, "lzip expects a real primal");
        return std::make_pair(real_type(p->width), map_type(real_type(1), real_type(1)));
      },
      [](const ValuePtr& p, const ValuePtr& w) {
        expect_real(w, p->vec.size(), "lzip");
        std::vector<std::pair<ValuePtr, ValuePtr>> entries;
        entries.reserve(p->vec.size());
        for (size_t i = 0; i < p->vec.size(); ++i)
          entries.emplace_back(v_scalar(p->vec[i]), v_scalar(w->vec[i]));
        return v_map(std::move(entries));
      }});

  // --- first-order operations --------------------------------------------
  auto simple = [](OpSpec s) {
    auto self = s.name;
    if (!s.fwd_primal) s.fwd_primal = [self](const TermPtr& x, NameGen&) { return mk_op(self, x); };
    if (!s.rev_primal) s.rev_primal = s.fwd_primal;
    return s;
  };

  reg.register_op(Registry::OpFamily{
      "add",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto w = real_pair_widths(arg);
        if (!w || w->first != w->second) return std::nullopt;
        int n = w->first;
        OpSpec s;
        s.name = "add";
        s.domain_widths = {n, n};
        s.dom = prod_type(real_type(n), real_type(n));
        s.codomain_width = n;
        s.cod = real_type(n);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          std::vector<double> out(as[0].size());
          for (size_t i = 0; i < out.size(); ++i) out[i] = as[0][i] + as[1][i];
          return out;
        };
        TypePtr rn = real_type(n);
        s.fwd_deriv = [rn](const TermPtr&, NameGen&) {
          return mk_plus(mk_lfst(rn, rn), mk_lsnd(rn, rn));
        };
        s.rev_deriv = [rn](const TermPtr&, NameGen&) {
          return mk_lpair(mk_lid(rn), mk_lid(rn));
        };
        return simple(std::move(s));
      },
      {prod_type(real_type(1), real_type(1)), prod_type(real_type(3), real_type(3))}});

  reg.register_op(Registry::OpFamily{
      "mul",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto w = real_pair_widths(arg);
        if (!w || w->first != w->second) return std::nullopt;
        int n = w->first;
        OpSpec s;
        s.name = "mul";
        s.domain_widths = {n, n};
        s.dom = prod_type(real_type(n), real_type(n));
        s.codomain_width = n;
        s.cod = real_type(n);
        s.sem = [](const std::vector<std::vector<double>>& as) { return ew_mul(as[0], as[1]); };
        TypePtr rn = real_type(n);
        // D(*)(x): y -> (fst x)*(snd y) + (snd x)*(fst y)
        s.fwd_deriv = [rn](const TermPtr& x, NameGen&) {
          return mk_plus(mk_lcomp(mk_lsnd(rn, rn), mk_lop("lscale", mk_fst(x))),
                         mk_lcomp(mk_lfst(rn, rn), mk_lop("lscale", mk_snd(x))));
        };
        // Dt(*)(x): y -> ((snd x)*y, (fst x)*y)
        s.rev_deriv = [](const TermPtr& x, NameGen&) {
          return mk_lpair(mk_lop("lscale", mk_snd(x)), mk_lop("lscale", mk_fst(x)));
        };
        return simple(std::move(s));
      },
      {prod_type(real_type(1), real_type(1)), prod_type(real_type(4), real_type(4))}});

  reg.register_op(Registry::OpFamily{
      "square",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto n = real_width(arg);
        if (!n) return std::nullopt;
        OpSpec s;
        s.name = "square";
        s.domain_widths = {*n};
        s.dom = real_type(*n);
        s.codomain_width = *n;
        s.cod = real_type(*n);
        s.sem = [](const std::vector<std::vector<double>>& as) { return ew_mul(as[0], as[0]); };
        auto diag = [](const TermPtr& x, NameGen&) {
          return mk_lop("lscale", mk_op("scale", mk_pair(mk_const(2.0), x)));
        };
        s.fwd_deriv = diag;
        s.rev_deriv = diag;
        return simple(std::move(s));
      },
      {real_type(1), real_type(3)}});

  reg.register_op(Registry::OpFamily{
      "matvec",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto w = real_pair_widths(arg);
        if (!w || w->second == 0 || w->first % w->second != 0) return std::nullopt;
        int m = w->second, n = w->first / m;
        OpSpec s;
        s.name = "matvec";
        s.domain_widths = {n * m, m};
        s.dom = prod_type(real_type(n * m), real_type(m));
        s.codomain_width = n;
        s.cod = real_type(n);
        s.sem = [n, m](const std::vector<std::vector<double>>& as) {
          std::vector<double> out(n);
          for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += as[0][i * m + j] * as[1][j];
            out[i] = acc;
          }
          return out;
        };
        TypePtr dm = s.dom;
        s.fwd_deriv = [dm](const TermPtr& x, NameGen&) {
          return mk_plus(mk_lcomp(mk_lfst(dm->left, dm->right), mk_lop("lmatvecmat", x)),
                         mk_lcomp(mk_lsnd(dm->left, dm->right), mk_lop("lmatvec", x)));
        };
        s.rev_deriv = [](const TermPtr& x, NameGen&) {
          return mk_lpair(mk_lop("louter", x), mk_lop("lmatvect", x));
        };
        return simple(std::move(s));
      },
      {prod_type(real_type(6), real_type(2)), prod_type(real_type(4), real_type(4))}});

  reg.register_op(Registry::OpFamily{
      "sum",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto n = real_width(arg);
        if (!n) return std::nullopt;
        OpSpec s;
        s.name = "sum";
        s.domain_widths = {*n};
        s.dom = real_type(*n);
        s.codomain_width = 1;
        s.cod = real_type(1);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          double acc = 0.0;
          for (double x : as[0]) acc += x;
          return std::vector<double>{acc};
        };
        s.fwd_deriv = [](const TermPtr& x, NameGen&) { return mk_lop("lsum", x); };
        s.rev_deriv = [](const TermPtr& x, NameGen&) { return mk_lop("lbroadcast", x); };
        return simple(std::move(s));
      },
      {real_type(1), real_type(4)}});

  reg.register_op(Registry::OpFamily{
      "sigmoid",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        if (!type_equal(arg, real_type(1))) return std::nullopt;
        OpSpec s;
        s.name = "sigmoid";
        s.domain_widths = {1};
        s.dom = real_type(1);
        s.codomain_width = 1;
        s.cod = real_type(1);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          return std::vector<double>{1.0 / (1.0 + std::exp(-as[0][0]))};
        };
        // s(x)*(1 - s(x)), written with registered ops
        auto diag = [](const TermPtr& x, NameGen& ng) {
          std::string v = ng.fresh("s");
          TermPtr sv = mk_var(v);
          TermPtr one_minus = mk_op("add", mk_pair(mk_const(1.0), mk_op("scale", mk_pair(mk_const(-1.0), sv))));
          return mk_let(v, mk_op("sigmoid", x), mk_lop("lscale", mk_op("mul", mk_pair(sv, one_minus))));
        };
        s.fwd_deriv = diag;
        s.rev_deriv = diag;
        return simple(std::move(s));
      },
      {real_type(1)}});

  reg.register_op(Registry::OpFamily{
      "swap",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        if (!type_equal(arg, real_type(2))) return std::nullopt;
        OpSpec s;
        s.name = "swap";
        s.domain_widths = {2};
        s.dom = real_type(2);
        s.codomain_width = 2;
        s.cod = real_type(2);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          return std::vector<double>{as[0][1], as[0][0]};
        };
        s.fwd_deriv = [](const TermPtr& x, NameGen&) { return mk_lop("lswap2", x); };
        s.rev_deriv = s.fwd_deriv;
        return simple(std::move(s));
      },
      {real_type(2)}});

  reg.register_op(Registry::OpFamily{
      "inner",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto w = real_pair_widths(arg);
        if (!w || w->first != w->second) return std::nullopt;
        int n = w->first;
        OpSpec s;
        s.name = "inner";
        s.domain_widths = {n, n};
        s.dom = prod_type(real_type(n), real_type(n));
        s.codomain_width = 1;
        s.cod = real_type(1);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          return std::vector<double>{dot(as[0], as[1])};
        };
        TypePtr rn = real_type(n);
        auto inner_with = [](const TermPtr& a, NameGen& ng) {
          return share(a, ng, "i", [](const TermPtr& av) {
            return mk_lcomp(mk_lop("lscale", av), mk_lop("lsum", av));
          });
        };
        s.fwd_deriv = [rn, inner_with](const TermPtr& x, NameGen& ng) {
          return mk_plus(mk_lcomp(mk_lfst(rn, rn), inner_with(mk_snd(x), ng)),
                         mk_lcomp(mk_lsnd(rn, rn), inner_with(mk_fst(x), ng)));
        };
        s.rev_deriv = [](const TermPtr& x, NameGen&) {
          return mk_lpair(mk_lop("lrescale", mk_snd(x)), mk_lop("lrescale", mk_fst(x)));
        };
        return simple(std::move(s));
      },
      {prod_type(real_type(2), real_type(2)), prod_type(real_type(4), real_type(4))}});

  reg.register_op(Registry::OpFamily{
      "scale",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        auto w = real_pair_widths(arg);
        if (!w || w->first != 1) return std::nullopt;
        int n = w->second;
        OpSpec s;
        s.name = "scale";
        s.domain_widths = {1, n};
        s.dom = prod_type(real_type(1), real_type(n));
        s.codomain_width = n;
        s.cod = real_type(n);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          std::vector<double> out(as[1].size());
          for (size_t i = 0; i < out.size(); ++i) out[i] = as[0][0] * as[1][i];
          return out;
        };
        TypePtr r1 = real_type(1), rn = real_type(n);
        s.fwd_deriv = [r1, rn](const TermPtr& x, NameGen&) {
          return mk_plus(mk_lcomp(mk_lfst(r1, rn), mk_lop("lrescale", mk_snd(x))),
                         mk_lcomp(mk_lsnd(r1, rn), mk_lop("lscalev", x)));
        };
        s.rev_deriv = [](const TermPtr& x, NameGen& ng) {
          return share(mk_snd(x), ng, "a", [x](const TermPtr& av) {
            return mk_lpair(mk_lcomp(mk_lop("lscale", av), mk_lop("lsum", av)),
                            mk_lop("lscalev", x));
          });
        };
        return simple(std::move(s));
      },
      {prod_type(real_type(1), real_type(3)), prod_type(real_type(1), real_type(1))}});

  // The one-argument product of the two components of a (real 2);
  // its derivatives go through swap, inner product and rescaling.
  reg.register_op(Registry::OpFamily{
      "mul2",
      [simple](const TypePtr& arg) -> std::optional<OpSpec> {
        if (!type_equal(arg, real_type(2))) return std::nullopt;
        OpSpec s;
        s.name = "mul2";
        s.domain_widths = {2};
        s.dom = real_type(2);
        s.codomain_width = 1;
        s.cod = real_type(1);
        s.sem = [](const std::vector<std::vector<double>>& as) {
          return std::vector<double>{as[0][0] * as[0][1]};
        };
        // D(x): y -> <swap x, y>      Dt(x): y -> y . swap x
        s.fwd_deriv = [](const TermPtr& x, NameGen& ng) {
          return share(mk_op("swap", x), ng, "w", [](const TermPtr& sw) {
            return mk_lcomp(mk_lop("lscale", sw), mk_lop("lsum", sw));
          });
        };
        s.rev_deriv = [](const TermPtr& x, NameGen&) {
          return mk_lop("lrescale", mk_op("swap", x));
        };
        return simple(std::move(s));
      },
      {real_type(2)}});

  reg.register_op(Registry::OpFamily{
      "map",
      [](const TypePtr& arg) -> std::optional<OpSpec> {
        // untransformed shape: (real 1 -> real 1) * real n
        // transformed shape:   (real 1 -> real 1 * (real 1 -o real 1)) * real n
        if (arg->kind != TypeKind::Prod || arg->left->kind != TypeKind::Fun ||
            arg->right->kind != TypeKind::Real)
          return std::nullopt;
        const TypePtr& fcod = arg->left->right;
        bool plain = type_equal(arg->left->left, real_type(1)) && type_equal(fcod, real_type(1));
        bool transformed = type_equal(arg->left->left, real_type(1)) && fcod->kind == TypeKind::Prod &&
                           type_equal(fcod->left, real_type(1)) && fcod->right->kind == TypeKind::LinFun;
        if (!plain && !transformed) return std::nullopt;
        int n = arg->right->width;
        OpSpec s;
        s.name = "map";
        s.higher_order = true;
        s.dom = prod_type(fun_type(real_type(1), real_type(1)), real_type(n));
        s.codomain_width = n;
        s.cod = real_type(n);
        s.sem = [](const std::vector<std::vector<double>>&) -> std::vector<double> {
          throw Error(ErrorCode::Internal, "map takes a function argument; evaluators handle it directly");
        };
        // D[map]1(f, v) = map(f;fst, v): the transformed function pairs
        // primal with derivative, so the primal pass projects it away.
        auto primal = [](const TermPtr& x, NameGen& ng) {
          return share(x, ng, "m", [&ng](const TermPtr& xv) {
            std::string a = ng.fresh("e");
            TermPtr f1 = mk_lam(a, real_type(1), mk_fst(mk_app(mk_fst(xv), mk_var(a))));
            return mk_op("map", mk_pair(f1, mk_snd(xv)));
          });
        };
        s.fwd_primal = primal;
        s.rev_primal = primal;
        // D[map]2(f,v): (g,w) -> map g v + zipWith (f;snd) v w
        s.fwd_deriv = [n](const TermPtr& x, NameGen& ng) {
          return share(x, ng, "m", [n](const TermPtr& xv) {
            TypePtr gty = fun_type(real_type(1), real_type(1));
            return mk_plus(mk_lcomp(mk_lfst(gty, real_type(n)), mk_lop("lmapapp", mk_snd(xv))),
                           mk_lcomp(mk_lsnd(gty, real_type(n)), mk_lop("lpointwise", xv)));
          });
        };
        // Dt[map]2(f,v): w -> (zip v w, zipWith (f;snd) v w)
        s.rev_deriv = [](const TermPtr& x, NameGen& ng) {
          return share(x, ng, "m", [](const TermPtr& xv) {
            return mk_lpair(mk_lop("lzip", mk_snd(xv)), mk_lop("lpointwise", xv));
          });
        };
        return s;
      },
      {prod_type(fun_type(real_type(1), real_type(1)), real_type(3))}});

  return reg;
}

inline const Registry& builtin_registry() {
  static const Registry reg = make_builtin_registry();
  return reg;
}

}  // namespace adlam
