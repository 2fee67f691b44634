#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "adlam/error.hpp"
#include "adlam/type.hpp"

namespace adlam {

enum class ValueKind { RealVec, Unit, Pair, Fun, Map };

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Runtime values. Ordinary and linear functions share one closure
// representation; `linear` records which static type produced it.
// Map values are finite ordered sequences of key/value pairs whose
// list structure is observable only through lcurryinv.
struct Value {
  ValueKind kind;
  std::vector<double> vec;
  ValuePtr l, r;
  std::function<ValuePtr(const ValuePtr&)> call;
  bool linear = false;
  std::vector<std::pair<ValuePtr, ValuePtr>> entries;
};

inline ValuePtr v_real(std::vector<double> xs) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::RealVec;
  v->vec = std::move(xs);
  return v;
}

inline ValuePtr v_scalar(double x) { return v_real({x}); }

inline ValuePtr v_unit() {
  static const ValuePtr u = [] {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Unit;
    return v;
  }();
  return u;
}

inline ValuePtr v_pair(ValuePtr l, ValuePtr r) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Pair;
  v->l = std::move(l);
  v->r = std::move(r);
  return v;
}

inline ValuePtr v_fun(std::function<ValuePtr(const ValuePtr&)> f, bool linear = false) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Fun;
  v->call = std::move(f);
  v->linear = linear;
  return v;
}

inline ValuePtr v_map(std::vector<std::pair<ValuePtr, ValuePtr>> entries) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Map;
  v->entries = std::move(entries);
  return v;
}

ValuePtr plus_values(const ValuePtr& a, const ValuePtr& b);

// Additive unit at every type of the target language.
inline ValuePtr zero_of(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real: return v_real(std::vector<double>(t->width, 0.0));
    case TypeKind::Unit: return v_unit();
    case TypeKind::Prod: return v_pair(zero_of(t->left), zero_of(t->right));
    case TypeKind::Fun:
    case TypeKind::LinFun: {
      TypePtr cod = t->right;
      return v_fun([cod](const ValuePtr&) { return zero_of(cod); }, t->kind == TypeKind::LinFun);
    }
    case TypeKind::Map: return v_map({});
  }
  throw Error(ErrorCode::Internal, "zero_of: bad type");
}

// Pointwise at functions, componentwise at pairs, concatenation at
// maps, vector addition at real arrays.
inline ValuePtr plus_values(const ValuePtr& a, const ValuePtr& b) {
  if (a->kind != b->kind) throw Error(ErrorCode::Internal, "plus_values: mismatched kinds");
  switch (a->kind) {
    case ValueKind::RealVec: {
      if (a->vec.size() != b->vec.size())
        throw Error(ErrorCode::WidthMismatch, "plus of real vectors of widths " +
                                                  std::to_string(a->vec.size()) + " and " +
                                                  std::to_string(b->vec.size()));
      std::vector<double> out(a->vec.size());
      for (size_t i = 0; i < out.size(); ++i) out[i] = a->vec[i] + b->vec[i];
      return v_real(std::move(out));
    }
    case ValueKind::Unit: return v_unit();
    case ValueKind::Pair: return v_pair(plus_values(a->l, b->l), plus_values(a->r, b->r));
    case ValueKind::Fun: {
      auto fa = a, fb = b;
      return v_fun([fa, fb](const ValuePtr& x) { return plus_values(fa->call(x), fb->call(x)); },
                   a->linear && b->linear);
    }
    case ValueKind::Map: {
      auto entries = a->entries;
      entries.insert(entries.end(), b->entries.begin(), b->entries.end());
      return v_map(std::move(entries));
    }
  }
  throw Error(ErrorCode::Internal, "plus_values: bad kind");
}

// Flat encoding of first-order values, used by the numeric harness.
inline void encode_into(const TypePtr& t, const double*& cursor, const double* end,
                        ValuePtr& out) {
  switch (t->kind) {
    case TypeKind::Real: {
      if (end - cursor < t->width)
        throw Error(ErrorCode::ShapeMismatch, "not enough scalars to fill " + type_to_string(t));
      out = v_real(std::vector<double>(cursor, cursor + t->width));
      cursor += t->width;
      return;
    }
    case TypeKind::Unit: out = v_unit(); return;
    case TypeKind::Prod: {
      ValuePtr l, r;
      encode_into(t->left, cursor, end, l);
      encode_into(t->right, cursor, end, r);
      out = v_pair(std::move(l), std::move(r));
      return;
    }
    default: throw Error(ErrorCode::NonFirstOrderType, "cannot encode scalars at " + type_to_string(t));
  }
}

inline ValuePtr encode_value(const TypePtr& t, const std::vector<double>& xs) {
  const double* cursor = xs.data();
  const double* end = xs.data() + xs.size();
  ValuePtr out;
  encode_into(t, cursor, end, out);
  if (cursor != end)
    throw Error(ErrorCode::ShapeMismatch, "too many scalars for " + type_to_string(t));
  return out;
}

inline void decode_into(const ValuePtr& v, std::vector<double>& out) {
  switch (v->kind) {
    case ValueKind::RealVec: out.insert(out.end(), v->vec.begin(), v->vec.end()); return;
    case ValueKind::Unit: return;
    case ValueKind::Pair:
      decode_into(v->l, out);
      decode_into(v->r, out);
      return;
    default: throw Error(ErrorCode::NonFirstOrderType, "cannot flatten a function or map value");
  }
}

inline std::vector<double> decode_value(const ValuePtr& v) {
  std::vector<double> out;
  decode_into(v, out);
  return out;
}

// Exact comparison at first-order values (used by cross-evaluator and
// primal-preservation tests, where results must agree bitwise).
inline bool values_equal_ground(const ValuePtr& a, const ValuePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ValueKind::RealVec: return a->vec == b->vec;
    case ValueKind::Unit: return true;
    case ValueKind::Pair:
      return values_equal_ground(a->l, b->l) && values_equal_ground(a->r, b->r);
    default: return false;
  }
}

}  // namespace adlam
