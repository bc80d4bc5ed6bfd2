#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lgo {

// Box-constrained search region D = [a, b], the root hyperinterval.
// Bounds must be finite with a(j) < b(j) on every axis.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lower, std::vector<double> upper);

  static BoxDomain unit_cube(std::size_t dimension);
  static BoxDomain symmetric(std::size_t dimension, double halfwidth);

  std::size_t dimension() const { return lower_.size(); }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }

  double width(std::size_t j) const { return upper_[j] - lower_[j]; }
  double max_width() const;
  double volume() const;
  double diameter() const;  // Euclidean length of the main diagonal
  bool contains(std::span<const double> x, double tol = 0.0) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Euclidean distance between two points of equal dimension.
double euclidean_distance(std::span<const double> x, std::span<const double> y);

}  // namespace lgo
