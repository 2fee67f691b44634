#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adlam/combinator.hpp"
#include "adlam/error.hpp"
#include "adlam/eval.hpp"
#include "adlam/term.hpp"
#include "adlam/transform.hpp"
#include "adlam/typecheck.hpp"
#include "adlam/value.hpp"

namespace adlam {

// |a - b| / (1 + |b|): behaves like absolute error near zero and like
// relative error for large magnitudes.
inline double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "comparing vectors of different widths");
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, rel_err(a[i], b[i]));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "dot of vectors of different widths");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> data;  // row-major

  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static Matrix zeros(int r, int c) { return Matrix{r, c, std::vector<double>(static_cast<size_t>(r) * c, 0.0)}; }
};

inline double max_rel_err(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(ErrorCode::ShapeMismatch, "comparing matrices of different shapes");
  return max_rel_err(a.data, b.data);
}

// A typechecked first-order program arg : src |- body : dst together
// with its two transformed forms, ready to drive numerically.
class CheckedProgram {
 public:
  CheckedProgram(TypePtr src, TermPtr body, const Registry& reg = builtin_registry())
      : src_(std::move(src)), reg_(reg), body_(std::move(body)) {
    dst_ = typecheck_source({{"arg", src_}}, body_, reg_);
    comb_ = elaborate({{"arg", src_}}, body_, reg_);
    fwd_ = forward_ad(comb_);
    rev_ = reverse_ad(comb_);
  }

  const TypePtr& src() const { return src_; }
  const TypePtr& dst() const { return dst_; }
  const CombPtr& comb() const { return comb_; }
  const AdOutput& fwd() const { return fwd_; }
  const AdOutput& rev() const { return rev_; }

  int in_width() const { return flat_width(src_); }
  int out_width() const { return flat_width(dst_); }

  void require_first_order() const {
    if (!is_first_order(src_) || !is_first_order(dst_))
      throw Error(ErrorCode::NonFirstOrderType,
                  "program type " + type_to_string(src_) + " -> " + type_to_string(dst_));
  }

  std::vector<double> value_at(const std::vector<double>& x) const {
    return eval_open(body_, x);
  }

  std::vector<double> fwd_primal_at(const std::vector<double>& x) const {
    return eval_open(fwd_.primal, x);
  }

  std::vector<double> rev_primal_at(const std::vector<double>& x) const {
    return eval_open(rev_.primal, x);
  }

  // Evaluate the derivative terms at a primal point once; the returned
  // linear closures can then be probed with many (co)tangents.
  ValuePtr fwd_lin_at(const std::vector<double>& x) const {
    return eval_definitional(env_of(x), fwd_.deriv, reg_);
  }
  ValuePtr rev_lin_at(const std::vector<double>& x) const {
    return eval_definitional(env_of(x), rev_.deriv, reg_);
  }

  // Jacobian-vector product via the forward derivative.
  std::vector<double> jvp(const std::vector<double>& x, const std::vector<double>& v) const {
    return decode_value(fwd_lin_at(x)->call(encode_value(src_, v)));
  }

  // Transposed-Jacobian-vector product via the reverse derivative.
  std::vector<double> vjp(const std::vector<double>& x, const std::vector<double>& w) const {
    return decode_value(rev_lin_at(x)->call(encode_value(dst_, w)));
  }

 private:
  Env env_of(const std::vector<double>& x) const {
    return env_bind(nullptr, "arg", encode_value(src_, x));
  }

  std::vector<double> eval_open(const TermPtr& t, const std::vector<double>& x) const {
    return decode_value(eval_definitional(env_of(x), t, reg_));
  }

  TypePtr src_, dst_;
  const Registry& reg_;
  TermPtr body_;
  CombPtr comb_;
  AdOutput fwd_, rev_;
};

// (f(x + h v) - f(x - h v)) / 2h
inline std::vector<double> central_difference(const CheckedProgram& p, const std::vector<double>& x,
                                              const std::vector<double>& v, double h) {
  p.require_first_order();
  if (static_cast<int>(x.size()) != p.in_width() || x.size() != v.size())
    throw Error(ErrorCode::ShapeMismatch, "central_difference: bad point or direction width");
  std::vector<double> hi(x), lo(x);
  for (size_t i = 0; i < x.size(); ++i) {
    hi[i] += h * v[i];
    lo[i] -= h * v[i];
  }
  std::vector<double> fh = p.value_at(hi), fl = p.value_at(lo);
  std::vector<double> out(fh.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = (fh[i] - fl[i]) / (2.0 * h);
  return out;
}

struct JacobianReport {
  std::vector<double> point;
  Matrix jac_fwd;   // column j: forward derivative on basis tangent e_j
  Matrix jac_rev;   // row i: reverse derivative on basis cotangent e_i
  Matrix jac_fd;    // central differences
  double max_rel_err_fwd_rev = 0.0;
  double max_rel_err_fwd_fd = 0.0;
};

inline JacobianReport jacobian_report(const CheckedProgram& p, const std::vector<double>& x,
                                      double h = 1e-4) {
  p.require_first_order();
  const int n = p.in_width(), m = p.out_width();
  if (static_cast<int>(x.size()) != n)
    throw Error(ErrorCode::ShapeMismatch, "jacobian_report: bad point width");

  JacobianReport rep;
  rep.point = x;
  rep.jac_fwd = Matrix::zeros(m, n);
  rep.jac_rev = Matrix::zeros(m, n);
  rep.jac_fd = Matrix::zeros(m, n);

  ValuePtr fwd_lin = p.fwd_lin_at(x);
  std::vector<double> basis(n, 0.0);
  for (int j = 0; j < n; ++j) {
    basis[j] = 1.0;
    std::vector<double> col = decode_value(fwd_lin->call(encode_value(p.src(), basis)));
    std::vector<double> fd = central_difference(p, x, basis, h);
    for (int i = 0; i < m; ++i) {
      rep.jac_fwd.at(i, j) = col[i];
      rep.jac_fd.at(i, j) = fd[i];
    }
    basis[j] = 0.0;
  }
  ValuePtr rev_lin = p.rev_lin_at(x);
  std::vector<double> cobasis(m, 0.0);
  for (int i = 0; i < m; ++i) {
    cobasis[i] = 1.0;
    std::vector<double> row = decode_value(rev_lin->call(encode_value(p.dst(), cobasis)));
    for (int j = 0; j < n; ++j) rep.jac_rev.at(i, j) = row[j];
    cobasis[i] = 0.0;
  }
  rep.max_rel_err_fwd_rev = max_rel_err(rep.jac_fwd, rep.jac_rev);
  rep.max_rel_err_fwd_fd = max_rel_err(rep.jac_fwd, rep.jac_fd);
  return rep;
}

// <w, Df(x) v> and <Dtf(x) w, v>; equal for correct derivative pairs.
inline std::pair<double, double> transpose_consistency(const CheckedProgram& p,
                                                       const std::vector<double>& x,
                                                       const std::vector<double>& v,
                                                       const std::vector<double>& w) {
  p.require_first_order();
  double lhs = dot(w, p.jvp(x, v));
  double rhs = dot(p.vjp(x, w), v);
  return {lhs, rhs};
}

}  // namespace adlam
