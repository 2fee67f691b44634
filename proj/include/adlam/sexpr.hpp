#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/ops.hpp"
#include "adlam/term.hpp"
#include "adlam/type.hpp"

namespace adlam {

// S-expression surface syntax.
//
//   types:  (real n) | unit | (prod t u) | (fun t u)
//           | (linfun t u) | (map t u)
//   terms:  x | unit | (lam (x t) e) | (app e1 e2) | (pair e1 e2)
//           | (fst e) | (snd e) | (op name e) | (let (x e1) e2)
//           | (zero t) | (plus e1 e2) | (lop name e) | (lid t)
//           | (lcomp e1 e2) | (lapp e1 e2) | (lswap e) | (leval e t)
//           | (lsing e t) | (lcurryinv e t) | (lfst t u) | (lsnd t u)
//           | (lpair e1 e2)
//   file:   one or more (program (arg-type t) (body e)), body free in `arg`
//
// `;` comments run to end of line.

struct ProgramFile {
  TypePtr arg_type;
  TermPtr body;
};

namespace sexpr_detail {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind;
  std::string text;
  Loc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Loc loc{line_, col_};
    if (pos_ >= src_.size()) return {Token::End, "", loc};
    char c = src_[pos_];
    if (c == '(') { advance(); return {Token::LParen, "(", loc}; }
    if (c == ')') { advance(); return {Token::RParen, ")", loc}; }
    size_t start = pos_;
    while (pos_ < src_.size() && !is_break(src_[pos_])) advance();
    return {Token::Symbol, std::string(src_.substr(start, pos_ - start)), loc};
  }

 private:
  static bool is_break(char c) {
    return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }
  void advance() {
    if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { bump(); }

  bool at_end() const { return tok_.kind == Token::End; }

  TypePtr type() {
    Token t = tok_;
    if (t.kind == Token::Symbol) {
      bump();
      if (t.text == "unit") return unit_type();
      throw err("expected a type, found '" + t.text + "'", t.loc);
    }
    expect_lparen("type");
    Token head = expect_symbol("type constructor");
    TypePtr out;
    if (head.text == "real") {
      Token n = expect_symbol("array width");
      auto w = parse_double(n.text);
      if (!w || *w < 1 || *w != static_cast<int>(*w)) throw err("bad array width '" + n.text + "'", n.loc);
      out = real_type(static_cast<int>(*w));
    } else if (head.text == "prod") {
      TypePtr l = type(), r = type();
      out = prod_type(l, r);
    } else if (head.text == "fun") {
      TypePtr l = type(), r = type();
      out = fun_type(l, r);
    } else if (head.text == "linfun") {
      TypePtr l = type(), r = type();
      out = linfun_type(l, r);
    } else if (head.text == "map") {
      TypePtr l = type(), r = type();
      out = map_type(l, r);
    } else {
      throw err("unknown type constructor '" + head.text + "'", head.loc);
    }
    expect_rparen();
    return out;
  }

  TermPtr term() {
    Token t = tok_;
    if (t.kind == Token::Symbol) {
      bump();
      if (t.text == "unit") return with_loc(mk_unit(), t.loc);
      return with_loc(mk_var(t.text), t.loc);
    }
    expect_lparen("term");
    Token head = expect_symbol("term constructor");
    TermPtr out;
    const std::string& h = head.text;
    if (h == "lam") {
      expect_lparen("binder");
      Token x = expect_symbol("binder name");
      TypePtr ty = type();
      expect_rparen();
      out = mk_lam(x.text, ty, term());
    } else if (h == "app") {
      TermPtr f = term(), a = term();
      out = mk_app(f, a);
    } else if (h == "pair") {
      TermPtr a = term(), b = term();
      out = mk_pair(a, b);
    } else if (h == "fst") {
      out = mk_fst(term());
    } else if (h == "snd") {
      out = mk_snd(term());
    } else if (h == "op") {
      Token name = expect_symbol("op name");
      out = mk_op(name.text, term());
    } else if (h == "let") {
      expect_lparen("let binding");
      Token x = expect_symbol("binder name");
      TermPtr bound = term();
      expect_rparen();
      out = mk_let(x.text, bound, term());
    } else if (h == "zero") {
      out = mk_zero(type());
    } else if (h == "plus") {
      TermPtr a = term(), b = term();
      out = mk_plus(a, b);
    } else if (h == "lop") {
      Token name = expect_symbol("linear op name");
      out = mk_lop(name.text, term());
    } else if (h == "lid") {
      out = mk_lid(type());
    } else if (h == "lcomp") {
      TermPtr a = term(), b = term();
      out = mk_lcomp(a, b);
    } else if (h == "lapp") {
      TermPtr a = term(), b = term();
      out = mk_lapp(a, b);
    } else if (h == "lswap") {
      out = mk_lswap(term());
    } else if (h == "leval") {
      TermPtr a = term();
      out = mk_leval(a, type());
    } else if (h == "lsing") {
      TermPtr a = term();
      out = mk_lsing(a, type());
    } else if (h == "lcurryinv") {
      TermPtr a = term();
      out = mk_lcurryinv(a, type());
    } else if (h == "lfst") {
      TypePtr a = type(), b = type();
      out = mk_lfst(a, b);
    } else if (h == "lsnd") {
      TypePtr a = type(), b = type();
      out = mk_lsnd(a, b);
    } else if (h == "lpair") {
      TermPtr a = term(), b = term();
      out = mk_lpair(a, b);
    } else {
      throw err("unknown term constructor '" + h + "'", head.loc);
    }
    expect_rparen();
    return with_loc(out, head.loc);
  }

  ProgramFile program() {
    expect_lparen("program");
    Token head = expect_symbol("program");
    if (head.text != "program") throw err("expected (program ...)", head.loc);
    expect_lparen("arg-type");
    Token at = expect_symbol("arg-type");
    if (at.text != "arg-type") throw err("expected (arg-type ...)", at.loc);
    TypePtr arg = type();
    expect_rparen();
    expect_lparen("body");
    Token bd = expect_symbol("body");
    if (bd.text != "body") throw err("expected (body ...)", bd.loc);
    TermPtr body = term();
    expect_rparen();
    expect_rparen();
    return {arg, body};
  }

 private:
  void bump() { tok_ = lex_.next(); }
  Error err(const std::string& msg, Loc loc) { return Error(ErrorCode::ParseError, msg, loc); }
  void expect_lparen(const std::string& what) {
    if (tok_.kind != Token::LParen) throw err("expected '(' to open " + what, tok_.loc);
    bump();
  }
  void expect_rparen() {
    if (tok_.kind != Token::RParen) throw err("expected ')'", tok_.loc);
    bump();
  }
  Token expect_symbol(const std::string& what) {
    if (tok_.kind != Token::Symbol) throw err("expected " + what, tok_.loc);
    Token t = tok_;
    bump();
    return t;
  }

  Lexer lex_;
  Token tok_;
};

// Rename binders so every bound name in the program is distinct (and
// distinct from the free variables); shadowing in the surface syntax is
// resolved here, deterministically. Already-unique programs come back
// unchanged, which keeps parse/print round trips stable.
struct Renamer {
  std::set<std::string> used;
  unsigned long counter = 0;

  std::string freshen(const std::string& base) {
    while (true) {
      std::string cand = base + "%" + std::to_string(++counter);
      if (!used.count(cand)) return cand;
    }
  }

  TermPtr run(const TermPtr& t, const std::map<std::string, std::string>& env) {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = env.find(t->name);
        return it == env.end() || it->second == t->name
                   ? t
                   : with_loc(mk_var(it->second), t->loc);
      }
      case TermKind::Lam: {
        std::string name = used.insert(t->name).second ? t->name : freshen(t->name);
        used.insert(name);
        auto inner = env;
        inner[t->name] = name;
        TermPtr body = run(t->a, inner);
        return with_loc(mk_lam(name, t->ann, body), t->loc);
      }
      case TermKind::Let: {
        TermPtr bound = run(t->a, env);
        std::string name = used.insert(t->name).second ? t->name : freshen(t->name);
        used.insert(name);
        auto inner = env;
        inner[t->name] = name;
        TermPtr body = run(t->b, inner);
        return with_loc(mk_let(name, bound, body), t->loc);
      }
      default: {
        if (!t->a && !t->b) return t;
        auto copy = std::make_shared<Term>(*t);
        if (t->a) copy->a = run(t->a, env);
        if (t->b) copy->b = run(t->b, env);
        return copy;
      }
    }
  }
};

}  // namespace sexpr_detail

inline TermPtr rename_unique(const TermPtr& t, const std::set<std::string>& free = {"arg"}) {
  sexpr_detail::Renamer r;
  r.used = free;
  return r.run(t, {});
}

inline TypePtr parse_type(std::string_view text) {
  sexpr_detail::Parser p(text);
  return p.type();
}

inline TermPtr parse_term(std::string_view text) {
  sexpr_detail::Parser p(text);
  return rename_unique(p.term());
}

inline ProgramFile parse_program(std::string_view text) {
  sexpr_detail::Parser p(text);
  ProgramFile f = p.program();
  f.body = rename_unique(f.body);
  return f;
}

inline std::vector<ProgramFile> parse_programs(std::string_view text) {
  sexpr_detail::Parser p(text);
  std::vector<ProgramFile> out;
  while (!p.at_end()) {
    ProgramFile f = p.program();
    f.body = rename_unique(f.body);
    out.push_back(std::move(f));
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "no (program ...) form found");
  return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string print_type(const TypePtr& t) { return type_to_string(t); }

inline void print_term_into(const TermPtr& t, std::string& out) {
  auto bin = [&](const char* head, const TermPtr& a, const TermPtr& b) {
    out += "(";
    out += head;
    out += " ";
    print_term_into(a, out);
    out += " ";
    print_term_into(b, out);
    out += ")";
  };
  auto un = [&](const char* head, const TermPtr& a) {
    out += "(";
    out += head;
    out += " ";
    print_term_into(a, out);
    out += ")";
  };
  switch (t->kind) {
    case TermKind::Var: out += t->name; return;
    case TermKind::UnitVal: out += "unit"; return;
    case TermKind::Op:
      out += "(op " + t->name + " ";
      print_term_into(t->a, out);
      out += ")";
      return;
    case TermKind::Pair: bin("pair", t->a, t->b); return;
    case TermKind::Fst: un("fst", t->a); return;
    case TermKind::Snd: un("snd", t->a); return;
    case TermKind::Lam:
      out += "(lam (" + t->name + " " + (t->ann ? print_type(t->ann) : "_") + ") ";
      print_term_into(t->a, out);
      out += ")";
      return;
    case TermKind::App: bin("app", t->a, t->b); return;
    case TermKind::Let:
      out += "(let (" + t->name + " ";
      print_term_into(t->a, out);
      out += ") ";
      print_term_into(t->b, out);
      out += ")";
      return;
    case TermKind::Zero: out += "(zero " + print_type(t->ann) + ")"; return;
    case TermKind::Plus: bin("plus", t->a, t->b); return;
    case TermKind::LOp:
      out += "(lop " + t->name + " ";
      print_term_into(t->a, out);
      out += ")";
      return;
    case TermKind::LId: out += "(lid " + print_type(t->ann) + ")"; return;
    case TermKind::LComp: bin("lcomp", t->a, t->b); return;
    case TermKind::LApp: bin("lapp", t->a, t->b); return;
    case TermKind::LSwap: un("lswap", t->a); return;
    case TermKind::LEval:
      out += "(leval ";
      print_term_into(t->a, out);
      out += " " + print_type(t->ann) + ")";
      return;
    case TermKind::LSing:
      out += "(lsing ";
      print_term_into(t->a, out);
      out += " " + print_type(t->ann) + ")";
      return;
    case TermKind::LCurryInv:
      out += "(lcurryinv ";
      print_term_into(t->a, out);
      out += " " + print_type(t->ann) + ")";
      return;
    case TermKind::LFst: out += "(lfst " + print_type(t->ann) + " " + print_type(t->ann2) + ")"; return;
    case TermKind::LSnd: out += "(lsnd " + print_type(t->ann) + " " + print_type(t->ann2) + ")"; return;
    case TermKind::LPair: bin("lpair", t->a, t->b); return;
  }
  throw Error(ErrorCode::Internal, "print: unhandled construct");
}

inline std::string print_term(const TermPtr& t) {
  std::string out;
  print_term_into(t, out);
  return out;
}

inline std::string print_program(const ProgramFile& f) {
  return "(program\n  (arg-type " + print_type(f.arg_type) + ")\n  (body " + print_term(f.body) +
         "))\n";
}

// CSV for real vectors; integral values keep a trailing .0 so width and
// realness survive a round trip by eye as well as by parser.
inline std::string format_csv(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    std::string s = format_double(xs[i]);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
      s += ".0";
    out += s;
  }
  return out;
}

inline std::vector<double> parse_csv(std::string_view text) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    auto d = parse_double(piece);
    if (!d) throw Error(ErrorCode::ParseError, "bad number '" + std::string(piece) + "' in CSV");
    out.push_back(*d);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace adlam
