#pragma once

#include <cmath>
#include <span>
#include <string>

#include "lgo/errors.hpp"

namespace lgo::detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
}

inline void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) require_finite(x, what);
}

inline void require_positive(double v, const char* what) {
  require_finite(v, what);
  if (v <= 0.0) throw InputError(std::string(what) + " must be positive");
}

}  // namespace lgo::detail
