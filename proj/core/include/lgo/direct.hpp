#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lgo/domain.hpp"
#include "lgo/nondominance.hpp"
#include "lgo/objective.hpp"
#include "lgo/partition.hpp"
#include "lgo/result.hpp"

namespace lgo {

enum class DirectVariant {
  Direct,   // split every longest side, Jones ordering
  DirectL   // split exactly one longest side (lowest index)
};

struct RectTrisection;

// Centre-sampled rectangle in the unit-normalised domain. Geometry is kept
// as per-axis trisection counts, side_j = 3^-levels_j, so congruent
// rectangles always produce bit-identical measures.
class CenterRect {
 public:
  CenterRect(std::vector<double> center, std::vector<std::uint16_t> levels,
             double center_value, DirectVariant variant);

  const std::vector<double>& center() const { return center_; }
  double value() const { return value_; }
  const std::vector<std::uint16_t>& levels() const { return levels_; }
  std::uint16_t level(std::size_t j) const { return levels_[j]; }
  double side(std::size_t j) const;

  // Selection measure: half diagonal for Direct, half longest side for
  // DirectL (a pure function of the level multiset either way).
  double measure() const { return measure_; }
  double characteristic() const { return value_; }
  const BoxDomain& region() const { return region_; }
  DirectVariant variant() const { return variant_; }

 private:
  // Trisection hands children their exact slice of the parent region; the
  // public constructor would rebuild it from the centre and lose the last
  // few ulps of nesting at deep levels.
  CenterRect(std::vector<double> center, std::vector<std::uint16_t> levels,
             double center_value, DirectVariant variant, BoxDomain region);

  friend RectTrisection trisect_rect(
      const CenterRect& rect,
      const std::function<double(std::span<const double>)>& sampler);

  std::vector<double> center_;
  std::vector<std::uint16_t> levels_;
  double value_ = 0.0;
  DirectVariant variant_ = DirectVariant::Direct;
  double measure_ = 0.0;
  BoxDomain region_;
};

struct RectTrisection {
  std::vector<CenterRect> children;
  std::size_t continuation = 0;  // index of the shrunken parent rectangle
};

// Trisect along the longest side(s). The sampler evaluates a unit-cube point
// (2 evaluations per split axis, axes in ascending order); children are laid
// out in Jones order, better-valued centres getting the larger boxes, with
// the shrunken parent last.
RectTrisection trisect_rect(
    const CenterRect& rect,
    const std::function<double(std::span<const double>)>& sampler);

// DIRECT potential optimality on centre rectangles; thin adapter over
// nondominated_select with d = measure, f = centre value.
std::vector<std::size_t> potentially_optimal(std::span<const CenterRect> rects,
                                             double f_min, double eps);

// DIRECT / DIRECT-l solver on a box domain. Trials are placed at physical
// points; the partition itself lives in the unit cube.
SolverResult solve_direct(Objective& objective, const BoxDomain& domain,
                          DirectVariant variant, double eps,
                          const StoppingCriteria& stop);

}  // namespace lgo
