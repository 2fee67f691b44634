#pragma once

#include "adlam/check.hpp"
#include "adlam/combinator.hpp"
#include "adlam/error.hpp"
#include "adlam/eval.hpp"
#include "adlam/fuzz.hpp"
#include "adlam/ops.hpp"
#include "adlam/sexpr.hpp"
#include "adlam/symbolic.hpp"
#include "adlam/term.hpp"
#include "adlam/transform.hpp"
#include "adlam/translate.hpp"
#include "adlam/type.hpp"
#include "adlam/typecheck.hpp"
#include "adlam/value.hpp"
