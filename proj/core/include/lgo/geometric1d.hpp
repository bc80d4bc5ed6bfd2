#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "lgo/domain.hpp"
#include "lgo/lipschitz.hpp"
#include "lgo/objective.hpp"
#include "lgo/partition.hpp"
#include "lgo/result.hpp"
#include "lgo/trial.hpp"

namespace lgo {

// One live subinterval [x_i, x_{i+1}] of a univariate geometric method,
// carrying its endpoint trials, the interval estimate l_i and the
// characteristic R_i (minorant minimum over the interval).
class IntervalCell {
 public:
  IntervalCell(Trial left, Trial right);

  const Trial& left() const { return left_; }
  const Trial& right() const { return right_; }
  double width() const { return right_.point[0] - left_.point[0]; }
  double slope() const;  // |z_{i+1} - z_i| / width

  double estimate() const { return estimate_; }
  void set_estimate(double l) { estimate_ = l; }
  double characteristic() const { return characteristic_; }
  void set_characteristic(double r) { characteristic_ = r; }

  const BoxDomain& region() const { return region_; }

 private:
  Trial left_;
  Trial right_;
  double estimate_ = 0.0;
  double characteristic_ = 0.0;
  BoxDomain region_;
};

// Minorant minimum of one interval under estimate l:
//   R_i = (z_i + z_{i+1})/2 - l (x_{i+1} - x_i)/2.
// Throws StructuralError on a degenerate (zero width) interval.
double interval_characteristic(const IntervalCell& cell, double l);

// Abscissa of the cone intersection inside the interval,
//   x^ = (x_i + x_{i+1})/2 - (z_{i+1} - z_i)/(2l),
// or nullopt when l does not exceed the interval slope, which would place
// the point on or outside a boundary; callers recover by inflating l.
std::optional<double> next_trial_point(const IntervalCell& cell, double l);

// Global estimate over the sorted trial sequence:
//   L = r * max(xi, max_i |z_{i+1} - z_i| / (x_{i+1} - x_i)).
double estimate_L_global(std::span<const Trial> trials, double r, double xi);

// Local estimate for the interval [x_i, x_{i+1}] mixing the neighbourhood
// slope lambda_i (intervals i-1, i, i+1), the global trend
// gamma_i = Lambda (x_{i+1} - x_i) / X_max and the floor:
//   l_i = r * max(lambda_i, gamma_i, xi).
double estimate_L_local(std::span<const Trial> trials, std::size_t i, double r,
                        double xi);

// Univariate geometric solver over [a, b]: Piyavskij with an a-priori
// constant, or the same scheme driven by adaptive global / local estimates.
// MultipleEstimates is not a univariate mode and is rejected.
SolverResult solve_piyavskij(Objective& objective, const BoxDomain& interval,
                             const LipschitzSpec& lipschitz,
                             const StoppingCriteria& stop);

}  // namespace lgo
