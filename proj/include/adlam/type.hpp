#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace adlam {

// Types of the source language (real arrays, unit, products, functions)
// plus the two abstract type formers of the target language: linear
// function types and tensor ("map") types.
enum class TypeKind { Real, Unit, Prod, Fun, LinFun, Map };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  int width = 0;     // Real only; always >= 1
  TypePtr left;      // Prod left / Fun dom / LinFun dom / Map key
  TypePtr right;     // Prod right / Fun cod / LinFun cod / Map value
};

inline TypePtr real_type(int n) {
  if (n < 1) throw std::invalid_argument("real width must be >= 1");
  return std::make_shared<Type>(Type{TypeKind::Real, n, nullptr, nullptr});
}

inline TypePtr unit_type() {
  static const TypePtr u = std::make_shared<Type>(Type{TypeKind::Unit, 0, nullptr, nullptr});
  return u;
}

inline TypePtr prod_type(TypePtr l, TypePtr r) {
  return std::make_shared<Type>(Type{TypeKind::Prod, 0, std::move(l), std::move(r)});
}

inline TypePtr fun_type(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type{TypeKind::Fun, 0, std::move(dom), std::move(cod)});
}

inline TypePtr linfun_type(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type{TypeKind::LinFun, 0, std::move(dom), std::move(cod)});
}

inline TypePtr map_type(TypePtr key, TypePtr val) {
  return std::make_shared<Type>(Type{TypeKind::Map, 0, std::move(key), std::move(val)});
}

inline bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Real: return a->width == b->width;
    case TypeKind::Unit: return true;
    default: return type_equal(a->left, b->left) && type_equal(a->right, b->right);
  }
}

// A type belongs to the source language iff it mentions neither LinFun
// nor Map.
inline bool is_source_type(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real:
    case TypeKind::Unit: return true;
    case TypeKind::Prod:
    case TypeKind::Fun: return is_source_type(t->left) && is_source_type(t->right);
    default: return false;
  }
}

// First-order types contain no function (and no abstract) constructor.
// This is the regime where Jacobians are plain matrices.
inline bool is_first_order(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real:
    case TypeKind::Unit: return true;
    case TypeKind::Prod: return is_first_order(t->left) && is_first_order(t->right);
    default: return false;
  }
}

// Number of scalars in a first-order type.
inline int flat_width(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real: return t->width;
    case TypeKind::Unit: return 0;
    case TypeKind::Prod: return flat_width(t->left) + flat_width(t->right);
    default: throw std::invalid_argument("flat_width: type is not first-order");
  }
}

inline std::string type_to_string(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real: return "(real " + std::to_string(t->width) + ")";
    case TypeKind::Unit: return "unit";
    case TypeKind::Prod: return "(prod " + type_to_string(t->left) + " " + type_to_string(t->right) + ")";
    case TypeKind::Fun: return "(fun " + type_to_string(t->left) + " " + type_to_string(t->right) + ")";
    case TypeKind::LinFun: return "(linfun " + type_to_string(t->left) + " " + type_to_string(t->right) + ")";
    case TypeKind::Map: return "(map " + type_to_string(t->left) + " " + type_to_string(t->right) + ")";
  }
  return "?";
}

}  // namespace adlam
