#include <catch2/catch_amalgamated.hpp>

#include "adlam/fuzz.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/typecheck.hpp"

using namespace adlam;

TEST_CASE("generation is deterministic in the seed", "[fuzz]") {
  TypePtr src = prod_type(real_type(2), real_type(3));
  TypePtr dst = real_type(2);
  TermPtr a = gen_random_program(99, 6, src, dst);
  TermPtr b = gen_random_program(99, 6, src, dst);
  CHECK(term_equal(a, b));
  CHECK(print_term(a) == print_term(b));

  TermPtr c = gen_random_program(100, 6, src, dst);
  CHECK_FALSE(print_term(a) == print_term(c));
}

TEST_CASE("depth zero produces a minimal well-typed term", "[fuzz]") {
  TermPtr t = gen_random_program(5, 0, real_type(2), real_type(1));
  CHECK(type_equal(typecheck_source({}, t), fun_type(real_type(2), real_type(1))));
}

TEST_CASE("every generated program typechecks", "[fuzz]") {
  for (int i = 0; i < 100; ++i) {
    uint64_t seed = adlam::detail::mix_seed(2024, static_cast<uint64_t>(i));
    std::mt19937_64 rng(seed);
    TypePtr src = adlam::detail::random_boundary_type(rng, 4);
    TypePtr dst = adlam::detail::random_boundary_type(rng, 4);
    TermPtr t = gen_random_program(seed, 6, src, dst);
    INFO("seed " << seed);
    CHECK(type_equal(typecheck_source({}, t), fun_type(src, dst)));
  }
}

TEST_CASE("boundary types must be first-order", "[fuzz]") {
  CHECK_THROWS_AS(gen_random_program(1, 3, fun_type(real_type(1), real_type(1)), real_type(1)),
                  Error);
}

TEST_CASE("corpus records carry seeds and status", "[fuzz]") {
  FuzzOptions opt;
  opt.seed = 11;
  opt.count = 10;
  opt.max_depth = 4;
  auto recs = run_fuzz_corpus(opt);
  REQUIRE(recs.size() == 10);
  for (const auto& r : recs) {
    CHECK(r.pass);
    CHECK(r.status == "ok");
    CHECK(r.typing_ok);
    CHECK(r.primal_ok);
    CHECK_FALSE(r.src_type.empty());
  }
}
