#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adlam/combinator.hpp"
#include "adlam/eval.hpp"
#include "adlam/fuzz.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/typecheck.hpp"
#include "support/catalog.hpp"

using namespace adlam;

namespace {

std::vector<double> run_closed_fun(const TermPtr& lam, const TypePtr& src,
                                   const std::vector<double>& x) {
  ValuePtr f = eval_closed(lam);
  return decode_value(f->call(encode_value(src, x)));
}

std::vector<double> rand_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> x(static_cast<size_t>(n));
  for (auto& xi : x) xi = d(rng);
  return x;
}

}  // namespace

TEST_CASE("variables elaborate to identity", "[combinator]") {
  TypePtr t = prod_type(real_type(1), real_type(2));
  CombPtr c = elaborate({{"x", t}}, mk_var("x"));
  CHECK(c->kind == CombKind::Id);
  CHECK(type_equal(comb_dom(c), t));
  CHECK(type_equal(comb_cod(c), t));
}

TEST_CASE("sequenced operations elaborate to a composition chain", "[combinator]") {
  CombPtr c = elaborate({{"x", real_type(3)}}, parse_term("(op sum (op square x))"));
  comb_validate(c);
  CHECK(type_equal(comb_dom(c), real_type(3)));
  CHECK(type_equal(comb_cod(c), real_type(1)));
  // outermost node composes onto the sum op
  REQUIRE(c->kind == CombKind::Comp);
  CHECK(c->g->kind == CombKind::Op);
  CHECK(c->g->op.name == "sum");

  // agrees with direct evaluation
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    auto x = rand_point(rng, 3);
    auto via_comb = run_closed_fun(reify(c), real_type(3), x);
    double expect = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    REQUIRE(via_comb.size() == 1);
    CHECK(via_comb[0] == Catch::Approx(expect).margin(1e-12));
  }
}

TEST_CASE("an immediate redex is extensionally the identity", "[combinator]") {
  CombPtr c = elaborate({{"x", real_type(1)}}, parse_term("(app (lam (y (real 1)) y) x)"));
  comb_validate(c);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    auto x = rand_point(rng, 1);
    CHECK(run_closed_fun(reify(c), real_type(1), x) == x);
  }
}

TEST_CASE("reify of primitive combinators", "[combinator]") {
  TermPtr id = reify(c_id(real_type(1)));
  CHECK(id->kind == TermKind::Lam);
  CHECK(id->a->kind == TermKind::Var);

  TermPtr fst = reify(c_fst(real_type(1), real_type(2)));
  CHECK(fst->kind == TermKind::Lam);
  CHECK(fst->a->kind == TermKind::Fst);
  CHECK(type_equal(typecheck_source({}, fst),
                   fun_type(prod_type(real_type(1), real_type(2)), real_type(1))));
}

TEST_CASE("reify of a curried op round-trips through evaluation", "[combinator]") {
  // curry(opc mul) : R1 -> (R1 => R1) against a one-variable context
  OpSpec mul = builtin_registry().resolve("mul", prod_type(real_type(1), real_type(1)));
  CombPtr curried = c_curry(c_op(mul), real_type(1), real_type(1), real_type(1));
  comb_validate(curried);
  TermPtr lam = reify(curried);
  CHECK(type_equal(typecheck_source({}, lam),
                   fun_type(real_type(1), fun_type(real_type(1), real_type(1)))));

  std::mt19937_64 rng(5);
  ValuePtr f = eval_closed(lam);
  for (int i = 0; i < 10; ++i) {
    auto xy = rand_point(rng, 2);
    ValuePtr r = f->call(v_scalar(xy[0]))->call(v_scalar(xy[1]));
    CHECK(r->vec[0] == xy[0] * xy[1]);
  }
}

TEST_CASE("round trip through elaborate and reify is exact", "[combinator][fuzz]") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    uint64_t seed = 1000 + static_cast<uint64_t>(i);
    std::mt19937_64 trng(seed);
    TypePtr src = adlam::detail::random_boundary_type(trng, 3);
    TypePtr dst = adlam::detail::random_boundary_type(trng, 3);
    TermPtr lam = gen_random_program(seed, 4, src, dst, 3);

    CombPtr c = elaborate({{"arg", src}}, lam->a);
    comb_validate(c);
    TermPtr back = reify(c);
    CHECK(type_equal(typecheck_source({}, back), fun_type(comb_dom(c), comb_cod(c))));

    for (int p = 0; p < 20; ++p) {
      auto x = rand_point(rng, flat_width(src));
      auto direct = run_closed_fun(lam, src, x);
      auto via = run_closed_fun(back, src, x);
      REQUIRE(direct == via);  // bit-exact
    }
  }
}

TEST_CASE("beta-eta equal terms elaborate to extensionally equal combinators", "[combinator]") {
  std::mt19937_64 rng(23);
  for (const auto& pair : adlam::testing::beta_eta_catalog()) {
    INFO(pair.law);
    CombPtr cl = elaborate({{"arg", pair.left.arg_type}}, pair.left.body);
    CombPtr cr = elaborate({{"arg", pair.right.arg_type}}, pair.right.body);
    REQUIRE(type_equal(comb_dom(cl), comb_dom(cr)));
    REQUIRE(type_equal(comb_cod(cl), comb_cod(cr)));
    for (int p = 0; p < 10; ++p) {
      auto x = rand_point(rng, flat_width(comb_dom(cl)));
      auto l = run_closed_fun(reify(cl), comb_dom(cl), x);
      auto r = run_closed_fun(reify(cr), comb_dom(cr), x);
      REQUIRE(l.size() == r.size());
      for (size_t k = 0; k < l.size(); ++k) CHECK(rel_err(l[k], r[k]) <= 1e-12);
    }
  }
}
