#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adlam/check.hpp"
#include "adlam/fuzz.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/symbolic.hpp"

using namespace adlam;

namespace {

// Encode a flat point as a nested constant term of the given type.
TermPtr const_of_type(const TypePtr& ty, const double*& cursor) {
  switch (ty->kind) {
    case TypeKind::Real: {
      std::vector<double> v(cursor, cursor + ty->width);
      cursor += ty->width;
      return mk_const(v);
    }
    case TypeKind::Unit: return mk_unit();
    case TypeKind::Prod: {
      TermPtr l = const_of_type(ty->left, cursor);
      TermPtr r = const_of_type(ty->right, cursor);
      return mk_pair(l, r);
    }
    default: throw Error(ErrorCode::NonFirstOrderType, "const_of_type");
  }
}

TermPtr const_of(const TypePtr& ty, const std::vector<double>& xs) {
  const double* c = xs.data();
  return const_of_type(ty, c);
}

std::vector<double> flatten_nf(SymbolicEvaluator& ev, const TermPtr& nf) {
  if (nf->kind == TermKind::Pair) {
    auto l = flatten_nf(ev, ev.eval(nf->a));
    auto r = flatten_nf(ev, ev.eval(nf->b));
    l.insert(l.end(), r.begin(), r.end());
    return l;
  }
  if (nf->kind == TermKind::UnitVal) return {};
  return ev.ground(nf);
}

}  // namespace

TEST_CASE("beta reduction with sharing", "[symbolic]") {
  TermPtr t = mk_app(parse_term("(lam (x (real 1)) (plus x x))"), mk_const(2.0));
  SymbolicEvaluator ev;
  CHECK(ev.ground(ev.eval(t)) == std::vector<double>{4.0});
}

TEST_CASE("lcurryinv applied to the empty map is zero", "[symbolic]") {
  TermPtr fam = parse_term("(lam (k (real 1)) (lop lscale k))");
  TermPtr t = mk_lapp(mk_lcurryinv(fam, real_type(1)), mk_zero(map_type(real_type(1), real_type(1))));
  SymbolicEvaluator ev;
  CHECK(ev.ground(ev.eval(t)) == std::vector<double>{0.0});
}

TEST_CASE("lcurryinv distributes over map sums", "[symbolic]") {
  TermPtr fam = parse_term("(lam (k (real 1)) (lop lscale k))");
  TermPtr sing1 = mk_lapp(mk_lsing(mk_const(2.0), real_type(1)), mk_const(5.0));
  TermPtr sing2 = mk_lapp(mk_lsing(mk_const(3.0), real_type(1)), mk_const(7.0));
  TermPtr t = mk_lapp(mk_lcurryinv(fam, real_type(1)), mk_plus(sing1, sing2));
  SymbolicEvaluator ev;
  CHECK(ev.ground(ev.eval(t)) == std::vector<double>{31.0});
}

TEST_CASE("linear application distributes over zero and plus", "[symbolic]") {
  SymbolicEvaluator ev;
  TermPtr z = mk_lapp(mk_zero(linfun_type(real_type(2), real_type(2))), mk_const(std::vector<double>{1, 2}));
  CHECK(ev.ground(ev.eval(z)) == std::vector<double>{0, 0});

  TermPtr f = mk_plus(mk_lid(real_type(1)), mk_lid(real_type(1)));
  CHECK(ev.ground(ev.eval(mk_lapp(f, mk_const(3.0)))) == std::vector<double>{6.0});
}

TEST_CASE("reverse gradient of x*y agrees with the definitional evaluator exactly",
          "[symbolic]") {
  auto prog = parse_program(
      "(program (arg-type (prod (real 1) (real 1))) (body (op mul (pair (fst arg) (snd arg)))))");
  CombPtr c = elaborate({{"arg", prog.arg_type}}, prog.body);
  AdOutput r = reverse_ad(c);

  TermPtr closed = mk_lapp(
      mk_app(mk_lam(r.var, predicted_primal_ctx(r), r.deriv), const_of(prog.arg_type, {2.0, 3.0})),
      mk_const(1.0));

  SymbolicEvaluator ev;
  std::vector<double> sym = flatten_nf(ev, ev.eval(closed));
  std::vector<double> def = decode_value(eval_closed(closed));
  CHECK(sym == std::vector<double>{3.0, 2.0});
  CHECK(sym == def);  // bit-exact
}

TEST_CASE("evaluator agreement through nested currying", "[symbolic]") {
  auto prog = parse_program(
      "(program (arg-type (real 1)) (body (app (app (lam (a (real 1)) (lam (b (real 1))"
      " (op mul (pair a b)))) arg) (op square arg))))");
  CombPtr c = elaborate({{"arg", prog.arg_type}}, prog.body);
  AdOutput r = reverse_ad(c);
  TermPtr closed = mk_lapp(
      mk_app(mk_lam(r.var, predicted_primal_ctx(r), r.deriv), mk_const(1.5)), mk_const(1.0));
  SymbolicEvaluator ev;
  std::vector<double> sym = flatten_nf(ev, ev.eval(closed));
  std::vector<double> def = decode_value(eval_closed(closed));
  REQUIRE(sym.size() == 1);
  CHECK(rel_err(sym[0], 3 * 1.5 * 1.5) <= 1e-12);
  CHECK(rel_err(sym[0], def[0]) <= 1e-14);
}

TEST_CASE("evaluator agreement on fuzzed derivative programs", "[symbolic][fuzz]") {
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    uint64_t seed = adlam::detail::mix_seed(31337, static_cast<uint64_t>(i));
    std::mt19937_64 rng(seed);
    TypePtr src = adlam::detail::random_boundary_type(rng, 3);
    TypePtr dst = adlam::detail::random_boundary_type(rng, 3);
    TermPtr lam = gen_random_program(seed, 5, src, dst, 3);
    CombPtr c = elaborate({{"arg", src}}, lam->a);

    std::uniform_real_distribution<double> d(-2, 2);
    std::vector<double> x(static_cast<size_t>(flat_width(src)));
    for (auto& xi : x) xi = d(rng);

    // plain program application
    std::vector<TermPtr> closed_terms{mk_app(lam, const_of(src, x))};

    // reverse derivative applied to a cotangent
    AdOutput r = reverse_ad(c);
    std::vector<double> w(static_cast<size_t>(flat_width(dst)));
    for (auto& wi : w) wi = d(rng);
    closed_terms.push_back(mk_lapp(
        mk_app(mk_lam(r.var, predicted_primal_ctx(r), r.deriv), const_of(src, x)), const_of(dst, w)));

    // forward derivative applied to a tangent
    AdOutput f = forward_ad(c);
    std::vector<double> v(static_cast<size_t>(flat_width(src)));
    for (auto& vi : v) vi = d(rng);
    closed_terms.push_back(mk_lapp(
        mk_app(mk_lam(f.var, predicted_primal_ctx(f), f.deriv), const_of(src, x)), const_of(src, v)));

    for (const TermPtr& t : closed_terms) {
      SymbolicEvaluator ev;
      std::vector<double> sym = flatten_nf(ev, ev.eval(t));
      std::vector<double> def = decode_value(eval_closed(t));
      REQUIRE(sym.size() == def.size());
      for (size_t k = 0; k < sym.size(); ++k) {
        INFO("seed " << seed);
        CHECK(rel_err(sym[k], def[k]) <= 1e-14);
      }
      ++checked;
    }
  }
  CHECK(checked == 150);
}
