#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adlam/eval.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/typecheck.hpp"

using namespace adlam;

TEST_CASE("parse then print then parse is the identity", "[sexpr]") {
  std::vector<const char*> cases = {
      "x",
      "unit",
      "(op sum (op square x))",
      "(lam (x (real 2)) (op mul2 x))",
      "(let (y (op const[1,2] unit)) (pair (fst (pair y unit)) y))",
      "(app (lam (f (fun (real 1) (real 1))) (app f (op const[0.5] unit))) (lam (a (real 1)) a))",
      "(plus (zero (real 3)) (lapp (lid (real 3)) x))",
      "(lcomp (lop lscale x) (lop lsum x))",
      "(lswap (lam (y (real 1)) (lid (real 1))))",
      "(lcurryinv (lam (k (real 1)) (lop lscale k)) (real 1))",
      "(lpair (lfst (real 1) (real 2)) (lsnd (real 1) (real 2)))",
      "(leval (op const[1] unit) (real 1))",
      "(lsing x (real 2))",
  };
  for (const char* s : cases) {
    TermPtr t1 = parse_term(s);
    TermPtr t2 = parse_term(print_term(t1));
    INFO(s);
    CHECK(term_equal(t1, t2));
  }
}

TEST_CASE("program files round trip", "[sexpr]") {
  const char* text =
      "(program (arg-type (prod (real 1) (real 1))) (body (op mul (pair (fst arg) (snd arg)))))";
  ProgramFile f1 = parse_program(text);
  ProgramFile f2 = parse_program(print_program(f1));
  CHECK(type_equal(f1.arg_type, f2.arg_type));
  CHECK(term_equal(f1.body, f2.body));
}

TEST_CASE("several programs per file", "[sexpr]") {
  std::string two = print_program(parse_program("(program (arg-type (real 1)) (body arg))")) +
                    print_program(parse_program("(program (arg-type (real 2)) (body (op sum arg)))"));
  auto progs = parse_programs(two);
  REQUIRE(progs.size() == 2);
  CHECK(type_equal(progs[1].arg_type, real_type(2)));
}

TEST_CASE("parse errors carry line and column", "[sexpr]") {
  try {
    parse_program("(program\n  (arg-type (real 1))\n  (body (fst)))");
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.loc().line == 3);
  }
  CHECK_THROWS_AS(parse_type("(real 0)"), Error);
  CHECK_THROWS_AS(parse_term("(foo x)"), Error);
}

TEST_CASE("comments are skipped", "[sexpr]") {
  TermPtr t = parse_term("; leading note\n(op sum x) ; trailing");
  CHECK(t->kind == TermKind::Op);
}

TEST_CASE("shadowed binders are renamed apart", "[sexpr]") {
  // (lam (x _) (lam (x _) x)) must keep the inner x bound to the inner lam
  TermPtr t = parse_term("(lam (x (real 1)) (lam (x (real 1)) x))");
  REQUIRE(t->kind == TermKind::Lam);
  REQUIRE(t->a->kind == TermKind::Lam);
  CHECK(t->name != t->a->name);
  CHECK(t->a->a->name == t->a->name);

  // stable under reparse
  TermPtr t2 = parse_term(print_term(t));
  CHECK(term_equal(t, t2));

  // and it evaluates as the constant-second function
  ValuePtr f = eval_closed(t);
  CHECK(f->call(v_scalar(1.0))->call(v_scalar(9.0))->vec == std::vector<double>{9.0});
}

TEST_CASE("alpha-equivalent terms are indistinguishable", "[sexpr][types]") {
  CHECK(alpha_equal(parse_term("(lam (x (real 1)) x)"), parse_term("(lam (y (real 1)) y)")));
  CHECK(alpha_equal(parse_term("(let (a (op const[1] unit)) (op mul (pair a a)))"),
                    parse_term("(let (b (op const[1] unit)) (op mul (pair b b)))")));
  // binders must be renamed consistently
  CHECK_FALSE(alpha_equal(parse_term("(lam (x (real 1)) (lam (y (real 1)) x))"),
                          parse_term("(lam (x (real 1)) (lam (y (real 1)) y))")));
  // free variables compare by name
  CHECK(alpha_equal(parse_term("(op square z)"), parse_term("(op square z)")));
  CHECK_FALSE(alpha_equal(parse_term("(op square z)"), parse_term("(op square w)")));
  // annotations matter
  CHECK_FALSE(alpha_equal(parse_term("(lam (x (real 1)) x)"), parse_term("(lam (x (real 2)) x)")));

  // the parse-time renamer only changes names, never meaning
  TermPtr shadowed = parse_term("(lam (x (real 1)) (lam (x (real 1)) x))");
  CHECK(alpha_equal(shadowed, parse_term("(lam (u (real 1)) (lam (v (real 1)) v))")));
}

TEST_CASE("doubles survive printing at full precision", "[sexpr]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    double x = d(rng) * std::pow(10.0, (i % 13) - 6);
    auto back = parse_double(format_double(x));
    REQUIRE(back.has_value());
    CHECK(*back == x);
  }
  CHECK(parse_csv("1,2.5,-3e-7") == std::vector<double>{1.0, 2.5, -3e-7});
  CHECK(format_csv({3.0, 2.0}) == "3.0,2.0");
  CHECK(format_csv({0.5}) == "0.5");
}

TEST_CASE("const payloads round trip through op names", "[sexpr]") {
  std::vector<double> c{1.5, -2.25, 3e-9};
  auto parsed = parse_const_op_name(const_op_name(c));
  REQUIRE(parsed.has_value());
  CHECK(*parsed == c);
  CHECK_FALSE(parse_const_op_name("const[]").has_value());
  CHECK_FALSE(parse_const_op_name("const[1,]").has_value());
  CHECK_FALSE(parse_const_op_name("notconst").has_value());
}
