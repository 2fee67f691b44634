#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adlam/check.hpp"
#include "adlam/eval.hpp"
#include "adlam/fuzz.hpp"
#include "adlam/sexpr.hpp"

using namespace adlam;

TEST_CASE("zero values", "[runtime]") {
  CHECK(decode_value(zero_of(real_type(3))) == std::vector<double>{0, 0, 0});
  CHECK(zero_of(map_type(real_type(1), real_type(1)))->entries.empty());
  ValuePtr pz = zero_of(prod_type(real_type(2), unit_type()));
  CHECK(pz->kind == ValueKind::Pair);
  CHECK(pz->l->vec == std::vector<double>{0, 0});
  CHECK(pz->r->kind == ValueKind::Unit);
}

TEST_CASE("plus on values", "[runtime]") {
  CHECK(decode_value(plus_values(v_real({1, 2}), v_real({3, 4}))) == std::vector<double>{4, 6});

  // maps concatenate in order
  ValuePtr m = plus_values(v_map({{v_scalar(1), v_scalar(10)}}), v_map({{v_scalar(2), v_scalar(20)}}));
  REQUIRE(m->entries.size() == 2);
  CHECK(m->entries[0].first->vec[0] == 1);
  CHECK(m->entries[1].first->vec[0] == 2);

  CHECK_THROWS_AS(plus_values(v_real({1}), v_real({1, 2})), Error);
}

TEST_CASE("adding zero to a function is observationally the function", "[runtime]") {
  // f + zero at R -> R: sampled applications agree bitwise
  TermPtr f = parse_term("(lam (x (real 1)) (op sigmoid x))");
  ValuePtr fv = eval_closed(f);
  ValuePtr sum = plus_values(fv, zero_of(fun_type(real_type(1), real_type(1))));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int i = 0; i < 20; ++i) {
    double x = d(rng);
    CHECK(sum->call(v_scalar(x))->vec == fv->call(v_scalar(x))->vec);
  }
}

TEST_CASE("lcurryinv folds map entries with plus", "[runtime]") {
  // family k |-> (v |-> k * v); applied to [(2,5), (3,7)] gives 2*5 + 3*7
  TermPtr fam = parse_term("(lam (k (real 1)) (lop lscale k))");
  TermPtr ci = mk_lcurryinv(fam, real_type(1));
  ValuePtr lin = eval_closed(ci);
  ValuePtr m = v_map({{v_scalar(2), v_scalar(5)}, {v_scalar(3), v_scalar(7)}});
  CHECK(lin->call(m)->vec == std::vector<double>{31.0});
  CHECK(lin->call(v_map({}))->vec == std::vector<double>{0.0});
}

TEST_CASE("lsing builds a singleton map", "[runtime]") {
  ValuePtr lin = eval_closed(mk_lsing(mk_op("const[4]", mk_unit()), real_type(1)));
  ValuePtr m = lin->call(v_scalar(9));
  REQUIRE(m->entries.size() == 1);
  CHECK(m->entries[0].first->vec[0] == 4);
  CHECK(m->entries[0].second->vec[0] == 9);
}

TEST_CASE("sigmoid of zero", "[runtime]") {
  CHECK(eval_closed(parse_term("(op sigmoid (op const[0] unit))"))->vec[0] == 0.5);
}

TEST_CASE("linear swap and eval", "[runtime]") {
  // lswap t applied to x then y gives t y x
  TermPtr fam = parse_term("(lam (y (real 1)) (lop lscale y))");  // y |-> (x |-> y*x)
  ValuePtr sw = eval_closed(mk_lswap(fam));
  ValuePtr inner = sw->call(v_scalar(5.0));  // x fixed at 5
  CHECK(inner->call(v_scalar(3.0))->vec == std::vector<double>{15.0});

  ValuePtr le = eval_closed(mk_leval(mk_op("const[2]", mk_unit()), real_type(1)));
  ValuePtr f = eval_closed(parse_term("(lam (x (real 1)) (op square x))"));
  CHECK(le->call(f)->vec == std::vector<double>{4.0});
}

TEST_CASE("AD-emitted linear functions satisfy the monoid laws", "[runtime]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int i = 0; i < 12; ++i) {
    uint64_t seed = adlam::detail::mix_seed(505, static_cast<uint64_t>(i));
    std::mt19937_64 trng(seed);
    TypePtr src = adlam::detail::random_boundary_type(trng, 3);
    TypePtr dst = adlam::detail::random_boundary_type(trng, 3);
    CheckedProgram p(src, gen_random_program(seed, 4, src, dst, 3)->a);

    std::vector<double> x(static_cast<size_t>(p.in_width()));
    for (auto& xi : x) xi = d(rng);

    for (bool fwd : {true, false}) {
      ValuePtr h = fwd ? p.fwd_lin_at(x) : p.rev_lin_at(x);
      const TypePtr& argt = fwd ? p.src() : p.dst();
      int k = flat_width(argt);

      // h(0) = 0
      for (double z : decode_value(h->call(zero_of(argt)))) CHECK(z == 0.0);

      // h(v+w) = h(v) + h(w)
      std::vector<double> v(static_cast<size_t>(k)), w(static_cast<size_t>(k)), vw(static_cast<size_t>(k));
      for (int j = 0; j < k; ++j) {
        v[static_cast<size_t>(j)] = d(rng);
        w[static_cast<size_t>(j)] = d(rng);
        vw[static_cast<size_t>(j)] = v[static_cast<size_t>(j)] + w[static_cast<size_t>(j)];
      }
      auto hv = decode_value(h->call(encode_value(argt, v)));
      auto hw = decode_value(h->call(encode_value(argt, w)));
      auto hvw = decode_value(h->call(encode_value(argt, vw)));
      for (size_t j = 0; j < hvw.size(); ++j)
        CHECK(std::abs(hvw[j] - (hv[j] + hw[j])) <= 1e-12 * (1.0 + std::abs(hv[j] + hw[j])));
    }
  }
}

TEST_CASE("map values are a quotient under lcurryinv observations", "[runtime]") {
  // [(t,s), (t,s')] and [(t, s+s')] cannot be told apart by lcurryinv
  TermPtr fam = parse_term("(lam (k (real 2)) (lcomp (lop lscale k) (lop lsum k)))");
  ValuePtr lin = eval_closed(mk_lcurryinv(fam, real_type(1)));

  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int i = 0; i < 20; ++i) {
    ValuePtr t = v_real({d(rng), d(rng)});
    ValuePtr s = v_real({d(rng), d(rng)});
    ValuePtr s2 = v_real({d(rng), d(rng)});
    ValuePtr split = v_map({{t, s}, {t, s2}});
    ValuePtr merged = v_map({{t, plus_values(s, s2)}});
    double a = lin->call(split)->vec[0];
    double b = lin->call(merged)->vec[0];
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));

    // cons order is unobservable too
    ValuePtr flipped = v_map({{t, s2}, {t, s}});
    double c = lin->call(flipped)->vec[0];
    CHECK(std::abs(a - c) <= 1e-12 * (1.0 + std::abs(c)));
  }
}
