#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "adlam/adlam.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitInternal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw adlam::Error(adlam::ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw adlam::Error(adlam::ErrorCode::ParseError, "cannot open '" + path + "' for writing");
  out << text;
}

int classify(const adlam::Error& e) {
  switch (e.code()) {
    case adlam::ErrorCode::Internal:
    case adlam::ErrorCode::NoRuleApplies: return kExitInternal;
    default: return kExitUsage;
  }
}

struct Loaded {
  adlam::ProgramFile file;
  adlam::TypePtr body_type;
};

Loaded load_source_program(const std::string& path) {
  auto progs = adlam::parse_programs(read_file(path));
  Loaded l{progs.front(), nullptr};
  l.body_type = adlam::typecheck_source({{"arg", l.file.arg_type}}, l.file.body);
  return l;
}

int cmd_check(const std::string& path) {
  Loaded l = load_source_program(path);
  std::cout << adlam::print_type(adlam::fun_type(l.file.arg_type, l.body_type)) << "\n";
  return 0;
}

int cmd_transform(const std::string& path, const std::string& out, bool reverse, bool raw) {
  using namespace adlam;
  Loaded l = load_source_program(path);
  CombPtr c = elaborate({{"arg", l.file.arg_type}}, l.file.body);
  AdOutput o = reverse ? reverse_ad(c) : forward_ad(c);

  std::string text;
  text += "; primal\n";
  text += print_program(ProgramFile{predicted_primal_ctx(o), o.primal});
  text += "; derivative\n";
  text += print_program(ProgramFile{predicted_primal_ctx(o), o.deriv});
  if (raw) text += "; combinator form of the input\n; " + comb_to_string(c) + "\n";
  write_output(out, text);
  return 0;
}

int cmd_eval(const std::string& path, const std::string& point_csv, const std::string& which) {
  using namespace adlam;
  auto progs = parse_programs(read_file(path));
  size_t index = progs.size() - 1;  // a transform output lists primal first, derivative last
  if (which == "primal" || which == "first") {
    index = 0;
  } else if (!which.empty() && which != "deriv" && which != "last") {
    try {
      index = static_cast<size_t>(std::stoul(which));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "--which expects primal, deriv or an index");
    }
  }
  if (index >= progs.size()) throw Error(ErrorCode::ParseError, "--which out of range");
  const ProgramFile& f = progs[index];

  TypePtr body_ty = typecheck_target({{"arg", f.arg_type}}, f.body);
  std::vector<double> nums = parse_csv(point_csv);

  int arg_w = flat_width(f.arg_type);
  if (body_ty->kind == TypeKind::LinFun) {
    int lin_w = flat_width(body_ty->left);
    if (static_cast<int>(nums.size()) != arg_w + lin_w)
      throw Error(ErrorCode::ShapeMismatch,
                  "--point needs " + std::to_string(arg_w) + "+" + std::to_string(lin_w) +
                      " numbers (argument, then linear argument)");
    std::vector<double> xs(nums.begin(), nums.begin() + arg_w);
    std::vector<double> vs(nums.begin() + arg_w, nums.end());
    Env env = env_bind(nullptr, "arg", encode_value(f.arg_type, xs));
    ValuePtr lin = eval_definitional(env, f.body);
    std::cout << format_csv(decode_value(lin->call(encode_value(body_ty->left, vs)))) << "\n";
    return 0;
  }

  if (static_cast<int>(nums.size()) != arg_w)
    throw Error(ErrorCode::ShapeMismatch, "--point needs " + std::to_string(arg_w) + " numbers");
  Env env = env_bind(nullptr, "arg", encode_value(f.arg_type, nums));
  std::cout << format_csv(decode_value(eval_definitional(env, f.body))) << "\n";
  return 0;
}

int cmd_jacobian(const std::string& path, const std::string& point_csv, const std::string& mode,
                 double h) {
  using namespace adlam;
  Loaded l = load_source_program(path);
  CheckedProgram p(l.file.arg_type, l.file.body);
  JacobianReport rep = jacobian_report(p, parse_csv(point_csv), h);
  const Matrix& m = mode == "rev" ? rep.jac_rev : mode == "fd" ? rep.jac_fd : rep.jac_fwd;
  for (int i = 0; i < m.rows; ++i) {
    std::vector<double> row(m.data.begin() + static_cast<size_t>(i) * m.cols,
                            m.data.begin() + static_cast<size_t>(i + 1) * m.cols);
    std::cout << format_csv(row) << "\n";
  }
  return 0;
}

int cmd_gradcheck(const std::string& path, const std::string& point_csv, double h, double tol_fd,
                  double tol_fwd_rev) {
  using namespace adlam;
  Loaded l = load_source_program(path);
  CheckedProgram p(l.file.arg_type, l.file.body);
  JacobianReport rep = jacobian_report(p, parse_csv(point_csv), h);
  bool ok = rep.max_rel_err_fwd_rev <= tol_fwd_rev && rep.max_rel_err_fwd_fd <= tol_fd;
  std::printf("fwd-vs-rev %.6e (tol %.1e)  fwd-vs-fd %.6e (tol %.1e)  %s\n",
              rep.max_rel_err_fwd_rev, tol_fwd_rev, rep.max_rel_err_fwd_fd, tol_fd,
              ok ? "pass" : "FAIL");
  return ok ? 0 : kExitTolerance;
}

int cmd_fuzz(const adlam::FuzzOptions& opt, const std::string& report_path) {
  using namespace adlam;
  auto records = run_fuzz_corpus(opt);
  std::string report;
  int failures = 0;
  for (const auto& r : records) {
    nlohmann::json j{{"seed", r.seed},
                     {"type", r.src_type + " -> " + r.dst_type},
                     {"maxRelErrFwdRev", r.max_rel_err_fwd_rev},
                     {"maxRelErrFwdFD", r.max_rel_err_fwd_fd},
                     {"pass", r.pass},
                     {"status", r.status}};
    report += j.dump() + "\n";
    if (!r.pass) ++failures;
  }
  write_output(report_path, report);
  std::printf("%d/%d programs pass\n", static_cast<int>(records.size()) - failures,
              static_cast<int>(records.size()));
  return failures == 0 ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"source-to-source forward and reverse AD for a typed lambda calculus"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // leaves --h free for the step size
  app.option_defaults()->ignore_case(false);

  std::string file, out, point, which, mode = "fwd", report;
  double h = 1e-4, tol_fd = 1e-4, tol_fwd_rev = 1e-10;
  bool raw = false;
  adlam::FuzzOptions fuzz_opt;

  auto* check = app.add_subcommand("check", "typecheck a program and print its type");
  check->add_option("file", file)->required();

  auto* fwd = app.add_subcommand("fwd", "emit the forward-mode primal and derivative programs");
  fwd->add_option("file", file)->required();
  fwd->add_option("-o,--output", out);
  fwd->add_flag("--raw-combinators", raw, "also dump the combinator form of the input");

  auto* rev = app.add_subcommand("rev", "emit the reverse-mode primal and derivative programs");
  rev->add_option("file", file)->required();
  rev->add_option("-o,--output", out);
  rev->add_flag("--raw-combinators", raw);

  auto* ev = app.add_subcommand("eval", "evaluate a program at a point");
  ev->add_option("file", file)->required();
  ev->add_option("--point", point, "CSV scalars; for linear-function results append the linear argument")->required();
  ev->add_option("--which", which, "primal | deriv | index (default: last program in the file)");

  auto* jac = app.add_subcommand("jacobian", "print the Jacobian at a point");
  jac->add_option("file", file)->required();
  jac->add_option("--point", point)->required();
  jac->add_option("--mode", mode)->check(CLI::IsMember({"fwd", "rev", "fd"}));
  jac->add_option("--h", h, "central-difference step");

  auto* gc = app.add_subcommand("gradcheck", "compare forward, reverse and finite differences");
  gc->add_option("file", file)->required();
  gc->add_option("--point", point)->required();
  gc->add_option("--h", h);
  gc->add_option("--tol", tol_fd, "tolerance against finite differences");
  gc->add_option("--tol-fwd-rev", tol_fwd_rev, "tolerance between forward and reverse");

  auto* fz = app.add_subcommand("fuzz", "generate and check a corpus of random programs");
  fz->add_option("--seed", fuzz_opt.seed);
  fz->add_option("--count", fuzz_opt.count);
  fz->add_option("--depth", fuzz_opt.max_depth);
  fz->add_option("--width", fuzz_opt.max_width);
  fz->add_option("--report", report, "write one JSON record per program");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file);
    if (fwd->parsed()) return cmd_transform(file, out, false, raw);
    if (rev->parsed()) return cmd_transform(file, out, true, raw);
    if (ev->parsed()) return cmd_eval(file, point, which);
    if (jac->parsed()) return cmd_jacobian(file, point, mode, h);
    if (gc->parsed()) return cmd_gradcheck(file, point, h, tol_fd, tol_fwd_rev);
    if (fz->parsed()) return cmd_fuzz(fuzz_opt, report);
  } catch (const adlam::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
