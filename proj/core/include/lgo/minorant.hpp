#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "lgo/trial.hpp"

namespace lgo {

// Value at x of the cone minorant F_k(x) = max_i { z_i - L * ||x - x_i|| }.
// Throws DomainError on an empty trial set, InputError on L <= 0 or
// non-finite data.
double minorant_value(std::span<const Trial> trials, double L,
                      std::span<const double> x);

struct MinorantMinimum {
  double point = 0.0;
  double value = 0.0;
};

// Global minimum of the 1-D minorant over [a, b]. Trials must be sorted by
// strictly increasing abscissa and include both endpoints. For each adjacent
// pair the candidate minimum is the cone intersection
//   x^ = (x_i + x_{i+1})/2 - (z_{i+1} - z_i) / (2L)
// with value (z_i + z_{i+1})/2 - L (x_{i+1} - x_i)/2; the smallest candidate
// wins, ties going to the leftmost pair.
MinorantMinimum minorant_minimum_1d(std::span<const Trial> trials, double L,
                                    double a, double b);

// Minimum of the two-cone minorant restricted to a segment of the given
// length whose endpoints carry values z_a and z_b:
//   (z_a + z_b)/2 - L * length / 2.
double diagonal_lower_bound(double z_a, double z_b, double diag_length,
                            double L);

// First pair (i, j), i < j, with |z_i - z_j| strictly greater than
// L * ||x_i - x_j||, if any. Boundary equality is not a violation.
std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation_witness(
    std::span<const Trial> trials, double L);

}  // namespace lgo
