#include <catch2/catch_amalgamated.hpp>

#include "adlam/sexpr.hpp"
#include "adlam/typecheck.hpp"

using namespace adlam;

TEST_CASE("source typing basics", "[typecheck]") {
  TypePtr r2 = real_type(2);

  // unary product of the two components of a (real 2)
  CHECK(type_equal(typecheck_source({{"x", r2}}, parse_term("(op mul2 x)")), real_type(1)));

  // variable rule
  TypePtr t = prod_type(r2, unit_type());
  CHECK(type_equal(typecheck_source({{"x", t}}, mk_var("x")), t));

  // projection needs a product
  try {
    typecheck_source({{"x", real_type(1)}}, parse_term("(fst x)"));
    FAIL("expected a type error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TypeMismatch);
  }
}

TEST_CASE("source typing errors", "[typecheck]") {
  try {
    typecheck_source({}, parse_term("y"));
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundVariable);
  }
  try {
    typecheck_source({{"x", real_type(1)}}, parse_term("(op nosuch x)"));
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOp);
  }
  // target-only constructs are not source terms
  CHECK_THROWS(typecheck_source({}, parse_term("(zero (real 1))")));
  CHECK_THROWS(typecheck_source({}, parse_term("(lid (real 1))")));
}

TEST_CASE("typing is deterministic", "[typecheck]") {
  TermPtr t = parse_term("(lam (x (real 2)) (op sum (op square x)))");
  TypePtr a = typecheck_source({}, t);
  TypePtr b = typecheck_source({}, t);
  CHECK(type_equal(a, b));
  CHECK(type_equal(a, fun_type(real_type(2), real_type(1))));
}

TEST_CASE("target typing of linear combinators", "[typecheck]") {
  TypePtr s = real_type(2), t = real_type(3);

  // lid at any annotation
  CHECK(type_equal(typecheck_target({}, mk_lid(s)), linfun_type(s, s)));

  // lpair(lid, zero) : s -o s x t, the reverse rule for fst
  TermPtr pr = mk_lpair(mk_lid(s), mk_zero(linfun_type(s, t)));
  CHECK(type_equal(typecheck_target({}, pr), linfun_type(s, prod_type(s, t))));

  // lcurryinv (lam x. lid) : map(t, s) -o s
  TermPtr ci = mk_lcurryinv(mk_lam("x", t, mk_lid(s)), s);
  CHECK(type_equal(typecheck_target({}, ci), linfun_type(map_type(t, s), s)));

  // lsing assigns the value slot from the annotation
  TermPtr sg = mk_lsing(mk_var("k"), s);
  CHECK(type_equal(typecheck_target({{"k", t}}, sg), linfun_type(s, map_type(t, s))));
}

TEST_CASE("linear shape errors", "[typecheck]") {
  TypePtr r = real_type(1);
  // composition seam mismatch
  TermPtr bad = mk_lcomp(mk_lid(r), mk_lid(real_type(2)));
  try {
    typecheck_target({}, bad);
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TypeMismatch);
  }
  // lswap needs a function into a linear function
  try {
    typecheck_target({}, mk_lswap(mk_lam("x", r, mk_var("x"))));
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LinearityShape);
  }
}

TEST_CASE("type errors carry source locations", "[typecheck]") {
  auto prog = parse_program("(program (arg-type (real 1))\n  (body (fst arg)))");
  try {
    typecheck_source({{"arg", prog.arg_type}}, prog.body);
    FAIL();
  } catch (const Error& e) {
    CHECK(e.loc().line == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("map accepts plain and transformed function arguments", "[typecheck]") {
  TypePtr r1 = real_type(1);
  TypePtr plain = prod_type(fun_type(r1, r1), real_type(4));
  CHECK(type_equal(typecheck_source({{"x", plain}}, parse_term("(op map x)")), real_type(4)));

  TypePtr transformed =
      prod_type(fun_type(r1, prod_type(r1, linfun_type(r1, r1))), real_type(4));
  CHECK(type_equal(typecheck_target({{"x", transformed}}, parse_term("(op map x)")), real_type(4)));

  CHECK_THROWS(typecheck_source({{"x", real_type(4)}}, parse_term("(op map x)")));
}
