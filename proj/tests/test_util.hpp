// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "lesioneval/errors.hpp"

namespace testutil {

/// Kind of the EvalError raised by f, if any.
inline std::optional<lesioneval::ErrKind> err_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const lesioneval::EvalError& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline bool close(double a, double b, double rel = 1e-12) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace testutil
