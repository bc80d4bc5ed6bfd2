#pragma once

#include <vector>

namespace lgo {

// One objective evaluation: the point x_i and the observed value z_i = f(x_i).
struct Trial {
  std::vector<double> point;
  double value = 0.0;
};

}  // namespace lgo
