#pragma once

#include <random>
#include <string>
#include <vector>

#include "adlam/check.hpp"
#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/term.hpp"
#include "adlam/transform.hpp"
#include "adlam/typecheck.hpp"

namespace adlam {

// Goal-directed generator of closed, well-typed source programs. Higher
// order subterms (beta redexes, shared function bindings, map) appear
// freely as long as the overall type stays first-order.
class ProgramGen {
 public:
  ProgramGen(uint64_t seed, int max_depth, TypePtr src, TypePtr dst, int max_width = 4,
             const Registry& reg = builtin_registry())
      : rng_(seed), max_depth_(max_depth), max_width_(max_width), src_(std::move(src)),
        dst_(std::move(dst)), reg_(reg) {
    if (!is_first_order(src_) || !is_first_order(dst_))
      throw Error(ErrorCode::NonFirstOrderType, "fuzzed program boundary types must be first-order");
    ng_.avoid("arg");
  }

  TermPtr generate() {
    Ctx ctx{{"arg", src_}};
    TermPtr body = gen(ctx, dst_, max_depth_);
    return mk_lam("arg", src_, body);
  }

 private:
  using Ctx = std::vector<std::pair<std::string, TypePtr>>;

  int rand_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double rand_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  TypePtr small_fo_type() {
    int r = rand_int(0, 9);
    if (r < 7) return real_type(rand_int(1, max_width_));
    return prod_type(real_type(rand_int(1, max_width_)), real_type(rand_int(1, max_width_)));
  }

  TypePtr scalar_fun_type() { return fun_type(real_type(1), real_type(1)); }

  std::vector<size_t> vars_of_type(const Ctx& ctx, const TypePtr& ty) {
    std::vector<size_t> out;
    for (size_t i = 0; i < ctx.size(); ++i)
      if (type_equal(ctx[i].second, ty)) out.push_back(i);
    return out;
  }

  std::vector<size_t> fun_vars_into(const Ctx& ctx, const TypePtr& cod) {
    std::vector<size_t> out;
    for (size_t i = 0; i < ctx.size(); ++i)
      if (ctx[i].second->kind == TypeKind::Fun && type_equal(ctx[i].second->right, cod))
        out.push_back(i);
    return out;
  }

  TermPtr rand_const(int n) {
    std::vector<double> c(n);
    for (double& x : c) x = rand_real(-1.5, 1.5);
    return mk_const(c);
  }

  // Smallest well-typed term of the goal type: a variable when one is in
  // scope, otherwise a canonical constant.
  TermPtr base(const Ctx& ctx, const TypePtr& ty) {
    auto vars = vars_of_type(ctx, ty);
    if (!vars.empty() && coin(0.7)) return mk_var(ctx[vars[static_cast<size_t>(rand_int(0, static_cast<int>(vars.size()) - 1))]].first);
    switch (ty->kind) {
      case TypeKind::Real: return rand_const(ty->width);
      case TypeKind::Unit: return mk_unit();
      case TypeKind::Prod: return mk_pair(base(ctx, ty->left), base(ctx, ty->right));
      case TypeKind::Fun: {
        std::string x = ng_.fresh("v");
        Ctx inner = ctx;
        inner.emplace_back(x, ty->left);
        return mk_lam(x, ty->left, base(inner, ty->right));
      }
      default: throw Error(ErrorCode::GenerationExhausted, "cannot generate at " + type_to_string(ty));
    }
  }

  struct OpChoice {
    std::string name;
    TypePtr arg;
  };

  std::vector<OpChoice> ops_into(const TypePtr& ty) {
    std::vector<OpChoice> out;
    if (ty->kind != TypeKind::Real) return out;
    int n = ty->width;
    TypePtr rn = real_type(n);
    out.push_back({"add", prod_type(rn, rn)});
    out.push_back({"mul", prod_type(rn, rn)});
    out.push_back({"square", rn});
    out.push_back({"scale", prod_type(real_type(1), rn)});
    for (int m = 1; m <= max_width_; ++m)
      if (n * m <= 2 * max_width_) out.push_back({"matvec", prod_type(real_type(n * m), real_type(m))});
    if (n == 1) {
      int k = rand_int(1, max_width_);
      out.push_back({"sum", real_type(k)});
      out.push_back({"sigmoid", real_type(1)});
      out.push_back({"inner", prod_type(real_type(k), real_type(k))});
      out.push_back({"mul2", real_type(2)});
    }
    if (n == 2) out.push_back({"swap", real_type(2)});
    return out;
  }

  TermPtr gen(const Ctx& ctx, const TypePtr& ty, int depth) {
    if (depth <= 0) return base(ctx, ty);
    // weights: structural 35, op 25, lambda/application 20, map 10, let 10
    for (int attempt = 0; attempt < 12; ++attempt) {
      int w = rand_int(0, 99);
      if (w < 35) {
        if (ty->kind == TypeKind::Prod)
          return mk_pair(gen(ctx, ty->left, depth - 1), gen(ctx, ty->right, depth - 1));
        if (coin(0.5)) return mk_fst(gen(ctx, prod_type(ty, small_fo_type()), depth - 1));
        return mk_snd(gen(ctx, prod_type(small_fo_type(), ty), depth - 1));
      }
      if (w < 60) {
        auto choices = ops_into(ty);
        if (choices.empty()) continue;
        const OpChoice& c = choices[static_cast<size_t>(rand_int(0, static_cast<int>(choices.size()) - 1))];
        return mk_op(c.name, gen(ctx, c.arg, depth - 1));
      }
      if (w < 80) {
        auto fvars = fun_vars_into(ctx, ty);
        if (!fvars.empty() && coin(0.5)) {
          const auto& [name, fty] = ctx[fvars[static_cast<size_t>(rand_int(0, static_cast<int>(fvars.size()) - 1))]];
          return mk_app(mk_var(name), gen(ctx, fty->left, depth - 1));
        }
        TypePtr bind = coin(0.3) ? scalar_fun_type() : small_fo_type();
        std::string x = ng_.fresh("v");
        Ctx inner = ctx;
        inner.emplace_back(x, bind);
        TermPtr body = gen(inner, ty, depth - 1);
        return mk_app(mk_lam(x, bind, body), gen(ctx, bind, depth - 1));
      }
      if (w < 90) {
        if (ty->kind != TypeKind::Real) continue;
        TermPtr fn;
        auto fvars = vars_of_type(ctx, scalar_fun_type());
        if (!fvars.empty() && coin(0.5)) {
          fn = mk_var(ctx[fvars[static_cast<size_t>(rand_int(0, static_cast<int>(fvars.size()) - 1))]].first);
        } else {
          std::string a = ng_.fresh("v");
          Ctx inner = ctx;
          inner.emplace_back(a, real_type(1));
          fn = mk_lam(a, real_type(1), gen(inner, real_type(1), std::min(depth - 1, 2)));
        }
        return mk_op("map", mk_pair(fn, gen(ctx, ty, depth - 1)));
      }
      {
        // let-sharing: fanout of the bound value exercises adjoint
        // accumulation in reverse mode
        TypePtr bind = coin(0.35) ? scalar_fun_type() : small_fo_type();
        std::string x = ng_.fresh("v");
        Ctx inner = ctx;
        inner.emplace_back(x, bind);
        TermPtr body = gen(inner, ty, depth - 1);
        return mk_let(x, gen(ctx, bind, depth - 1), body);
      }
    }
    return base(ctx, ty);
  }

  std::mt19937_64 rng_;
  NameGen ng_;
  int max_depth_;
  int max_width_;
  TypePtr src_, dst_;
  const Registry& reg_;
};

inline TermPtr gen_random_program(uint64_t seed, int max_depth, const TypePtr& src,
                                  const TypePtr& dst, int max_width = 4,
                                  const Registry& reg = builtin_registry()) {
  ProgramGen g(seed, max_depth, src, dst, max_width, reg);
  return g.generate();
}

// ---------------------------------------------------------------------------
// Corpus runner
// ---------------------------------------------------------------------------

struct FuzzOptions {
  uint64_t seed = 1;
  int count = 500;
  int max_depth = 6;
  int max_width = 4;
  int points = 5;
  double h = 1e-4;
  double tol_fwd_rev = 1e-10;
  double tol_fwd_fd = 1e-4;
};

struct FuzzRecord {
  uint64_t seed = 0;
  std::string src_type, dst_type;
  double max_rel_err_fwd_rev = 0.0;
  double max_rel_err_fwd_fd = 0.0;
  bool typing_ok = false;
  bool primal_ok = false;
  bool pass = false;
  std::string status;
};

namespace detail {

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline TypePtr random_boundary_type(std::mt19937_64& rng, int max_width) {
  std::uniform_int_distribution<int> w(1, max_width), kind(0, 3);
  if (kind(rng) == 0) return prod_type(real_type(w(rng)), real_type(w(rng)));
  return real_type(w(rng));
}

}  // namespace detail

// Check one generated program: the transformed terms must typecheck at
// the translated types, primal passes must agree bitwise with the
// original, and the three Jacobian routes must agree within tolerance.
inline FuzzRecord check_program(const TypePtr& src, const TermPtr& closed_lam, uint64_t seed,
                                const FuzzOptions& opt, const Registry& reg = builtin_registry()) {
  FuzzRecord rec;
  rec.seed = seed;
  rec.src_type = type_to_string(src);
  try {
    CheckedProgram prog(src, closed_lam->a, reg);
    rec.dst_type = type_to_string(prog.dst());

    const AdOutput& f = prog.fwd();
    const AdOutput& r = prog.rev();
    TypePtr pf = typecheck_target({{f.var, predicted_primal_ctx(f)}}, f.primal, reg);
    TypePtr df = typecheck_target({{f.var, predicted_primal_ctx(f)}}, f.deriv, reg);
    TypePtr pr = typecheck_target({{r.var, predicted_primal_ctx(r)}}, r.primal, reg);
    TypePtr dr = typecheck_target({{r.var, predicted_primal_ctx(r)}}, r.deriv, reg);
    rec.typing_ok = type_equal(pf, predicted_primal_type(f)) && type_equal(df, predicted_deriv_type(f)) &&
                    type_equal(pr, predicted_primal_type(r)) && type_equal(dr, predicted_deriv_type(r));
    if (!rec.typing_ok) {
      rec.status = "transformed terms do not typecheck at the translated types";
      return rec;
    }

    std::mt19937_64 rng(detail::mix_seed(seed, 0x9e37));
    std::uniform_real_distribution<double> point(-2.0, 2.0);
    rec.primal_ok = true;
    for (int p = 0; p < opt.points; ++p) {
      std::vector<double> x(static_cast<size_t>(prog.in_width()));
      for (double& xi : x) xi = point(rng);
      JacobianReport rep = jacobian_report(prog, x, opt.h);
      rec.max_rel_err_fwd_rev = std::max(rec.max_rel_err_fwd_rev, rep.max_rel_err_fwd_rev);
      rec.max_rel_err_fwd_fd = std::max(rec.max_rel_err_fwd_fd, rep.max_rel_err_fwd_fd);
      std::vector<double> v0 = prog.value_at(x);
      if (prog.fwd_primal_at(x) != v0 || prog.rev_primal_at(x) != v0) rec.primal_ok = false;
    }
    rec.pass = rec.typing_ok && rec.primal_ok && rec.max_rel_err_fwd_rev <= opt.tol_fwd_rev &&
               rec.max_rel_err_fwd_fd <= opt.tol_fwd_fd;
    rec.status = rec.pass ? "ok"
                 : !rec.primal_ok ? "primal values diverge from the original program"
                                  : "derivative tolerance exceeded";
  } catch (const Error& e) {
    rec.pass = false;
    rec.status = e.what();
  }
  return rec;
}

inline std::vector<FuzzRecord> run_fuzz_corpus(const FuzzOptions& opt,
                                               const Registry& reg = builtin_registry()) {
  std::vector<FuzzRecord> out;
  out.reserve(static_cast<size_t>(opt.count));
  for (int i = 0; i < opt.count; ++i) {
    uint64_t pseed = detail::mix_seed(opt.seed, static_cast<uint64_t>(i));
    std::mt19937_64 trng(pseed);
    TypePtr src = detail::random_boundary_type(trng, opt.max_width);
    TypePtr dst = detail::random_boundary_type(trng, opt.max_width);
    TermPtr lam = gen_random_program(pseed, opt.max_depth, src, dst, opt.max_width, reg);
    out.push_back(check_program(src, lam, pseed, opt, reg));
  }
  return out;
}

}  // namespace adlam
