// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRVAX_STATUS_MACROS_H_
#define FAIRVAX_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"

#define FAIRVAX_STATUS_CONCAT_INNER(a, b) a##b
#define FAIRVAX_STATUS_CONCAT(a, b) FAIRVAX_STATUS_CONCAT_INNER(a, b)

#define FAIRVAX_ASSIGN_OR_RETURN_IMPL(lhs, tmp, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = *std::move(tmp)

// ASSIGN_OR_RETURN(auto x, FnReturningStatusOr());
#define ASSIGN_OR_RETURN(lhs, expr)                                     \
  FAIRVAX_ASSIGN_OR_RETURN_IMPL(                                        \
      lhs, FAIRVAX_STATUS_CONCAT(status_or_value_, __LINE__), expr)

#define RETURN_IF_ERROR(expr)                   \
  do {                                          \
    if (absl::Status _st = (expr); !_st.ok()) { \
      return _st;                               \
    }                                           \
  } while (0)

#endif  // FAIRVAX_STATUS_MACROS_H_
