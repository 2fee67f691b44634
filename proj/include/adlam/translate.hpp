#pragma once

#include <utility>

#include "adlam/error.hpp"
#include "adlam/type.hpp"

namespace adlam {

// Forward-mode translation of a source type into (primal, tangent).
// Tangents at function type are functions from argument primals to
// result tangents; primals at function type pair the original result
// with the derivative as a linear function.
inline std::pair<TypePtr, TypePtr> type_translate_fwd(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real: return {t, t};
    case TypeKind::Unit: return {t, t};
    case TypeKind::Prod: {
      auto l = type_translate_fwd(t->left);
      auto r = type_translate_fwd(t->right);
      return {prod_type(l.first, r.first), prod_type(l.second, r.second)};
    }
    case TypeKind::Fun: {
      auto d = type_translate_fwd(t->left);
      auto c = type_translate_fwd(t->right);
      TypePtr primal = fun_type(d.first, prod_type(c.first, linfun_type(d.second, c.second)));
      TypePtr tangent = fun_type(d.first, c.second);
      return {primal, tangent};
    }
    default:
      throw Error(ErrorCode::TypeMismatch, "AD type translation applies to source types only");
  }
}

// Reverse-mode translation into (primal, adjoint). Adjoints at function
// type collect (argument primal, result adjoint) pairs in a map type.
inline std::pair<TypePtr, TypePtr> type_translate_rev(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Real: return {t, t};
    case TypeKind::Unit: return {t, t};
    case TypeKind::Prod: {
      auto l = type_translate_rev(t->left);
      auto r = type_translate_rev(t->right);
      return {prod_type(l.first, r.first), prod_type(l.second, r.second)};
    }
    case TypeKind::Fun: {
      auto d = type_translate_rev(t->left);
      auto c = type_translate_rev(t->right);
      TypePtr primal = fun_type(d.first, prod_type(c.first, linfun_type(c.second, d.second)));
      TypePtr adjoint = map_type(d.first, c.second);
      return {primal, adjoint};
    }
    default:
      throw Error(ErrorCode::TypeMismatch, "AD type translation applies to source types only");
  }
}

}  // namespace adlam
