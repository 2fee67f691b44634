#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adlam/sexpr.hpp"

namespace adlam::testing {

struct LawPair {
  std::string law;
  ProgramFile left, right;
};

// Redex/contractum pairs for the product and function laws, each
// instantiated twice with concrete subterms. The two programs of a pair
// must stay extensionally equal, before and after differentiation.
inline std::vector<LawPair> beta_eta_catalog() {
  auto P = [](const char* s) { return parse_program(s); };
  std::vector<LawPair> out;

  // unit eta: any term of unit type equals unit
  out.push_back({"unit-eta",
                 P("(program (arg-type (real 2)) (body (op add (pair arg (op const[1,1] (snd (pair arg unit)))))))"),
                 P("(program (arg-type (real 2)) (body (op add (pair arg (op const[1,1] unit)))))")});
  out.push_back({"unit-eta",
                 P("(program (arg-type (real 1)) (body (op mul (pair arg (op const[2] (fst (pair unit arg)))))))"),
                 P("(program (arg-type (real 1)) (body (op mul (pair arg (op const[2] unit)))))")});

  // fst beta: fst (pair t s) = t
  out.push_back({"fst-beta",
                 P("(program (arg-type (real 2)) (body (op square (fst (pair arg (op swap arg))))))"),
                 P("(program (arg-type (real 2)) (body (op square arg)))")});
  out.push_back({"fst-beta",
                 P("(program (arg-type (real 3)) (body (fst (pair (op sum arg) (op sigmoid (op sum arg))))))"),
                 P("(program (arg-type (real 3)) (body (op sum arg)))")});

  // snd beta: snd (pair t s) = s
  out.push_back({"snd-beta",
                 P("(program (arg-type (real 2)) (body (snd (pair (op swap arg) (op square arg)))))"),
                 P("(program (arg-type (real 2)) (body (op square arg)))")});
  out.push_back({"snd-beta",
                 P("(program (arg-type (real 1)) (body (snd (pair unit (op sigmoid arg)))))"),
                 P("(program (arg-type (real 1)) (body (op sigmoid arg)))")});

  // pair eta: t = (pair (fst t) (snd t))
  out.push_back({"pair-eta",
                 P("(program (arg-type (prod (real 2) (real 2))) (body (op mul arg)))"),
                 P("(program (arg-type (prod (real 2) (real 2))) (body (op mul (pair (fst arg) (snd arg)))))")});
  out.push_back({"pair-eta",
                 P("(program (arg-type (prod (real 3) (real 3))) (body (op inner arg)))"),
                 P("(program (arg-type (prod (real 3) (real 3))) (body (op inner (pair (fst arg) (snd arg)))))")});

  // fun beta: (lam x. t) s = t[s/x]
  out.push_back({"fun-beta",
                 P("(program (arg-type (real 1)) (body (app (lam (y (real 1)) (op mul (pair y y))) (op sigmoid arg))))"),
                 P("(program (arg-type (real 1)) (body (op mul (pair (op sigmoid arg) (op sigmoid arg)))))")});
  out.push_back({"fun-beta",
                 P("(program (arg-type (real 3)) (body (app (lam (v (real 3)) (op sum (op square v))) arg)))"),
                 P("(program (arg-type (real 3)) (body (op sum (op square arg))))")});

  // fun eta: t = (lam x. (app t x)) for fresh x
  out.push_back({"fun-eta",
                 P("(program (arg-type (real 3)) (body (let (f (lam (a (real 1)) (op sigmoid a))) (op map (pair f arg)))))"),
                 P("(program (arg-type (real 3)) (body (let (f (lam (a (real 1)) (op sigmoid a))) (op map (pair (lam (b (real 1)) (app f b)) arg)))))")});
  out.push_back({"fun-eta",
                 P("(program (arg-type (real 1)) (body (let (g (lam (a (real 1)) (op mul (pair a arg)))) (app g arg))))"),
                 P("(program (arg-type (real 1)) (body (let (g (lam (a (real 1)) (op mul (pair a arg)))) (app (lam (b (real 1)) (app g b)) arg))))")});

  return out;
}

}  // namespace adlam::testing
