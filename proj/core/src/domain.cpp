#include "lgo/domain.hpp"

#include <cmath>
#include <utility>

#include "internal.hpp"
#include "lgo/errors.hpp"

namespace lgo {

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InputError("domain must have dimension >= 1");
  if (lower_.size() != upper_.size())
    throw InputError("domain bounds must have equal dimension");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    detail::require_finite(lower_[j], "domain bound");
    detail::require_finite(upper_[j], "domain bound");
    if (!(lower_[j] < upper_[j]))
      throw InputError("domain requires lower(j) < upper(j) on every axis");
  }
}

BoxDomain BoxDomain::unit_cube(std::size_t dimension) {
  return BoxDomain(std::vector<double>(dimension, 0.0),
                   std::vector<double>(dimension, 1.0));
}

BoxDomain BoxDomain::symmetric(std::size_t dimension, double halfwidth) {
  detail::require_positive(halfwidth, "halfwidth");
  return BoxDomain(std::vector<double>(dimension, -halfwidth),
                   std::vector<double>(dimension, halfwidth));
}

double BoxDomain::max_width() const {
  double m = 0.0;
  for (std::size_t j = 0; j < dimension(); ++j) m = std::max(m, width(j));
  return m;
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < dimension(); ++j) v *= width(j);
  return v;
}

double BoxDomain::diameter() const {
  double s = 0.0;
  for (std::size_t j = 0; j < dimension(); ++j) s += width(j) * width(j);
  return std::sqrt(s);
}

bool BoxDomain::contains(std::span<const double> x, double tol) const {
  if (x.size() != dimension()) return false;
  for (std::size_t j = 0; j < dimension(); ++j) {
    if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
  }
  return true;
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw InputError("distance requires points of equal dimension");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double d = x[j] - y[j];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace lgo
