#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "lgo/domain.hpp"
#include "lgo/lipschitz.hpp"
#include "lgo/nondominance.hpp"
#include "lgo/objective.hpp"
#include "lgo/partition.hpp"
#include "lgo/result.hpp"

namespace lgo {

// Trisection never exceeds this refinement depth: 3^40 still fits an
// unsigned 64-bit numerator, deeper cells would overflow the exact grid.
inline constexpr std::uint32_t kMaxGridDepth = 40;

// One coordinate on the base-3 refinement grid: the point num / 3^depth of
// the way from a(j) to b(j). Canonical form divides out factors of 3 so that
// equal grid points always compare equal.
struct GridCoord {
  std::uint64_t num = 0;
  std::uint32_t depth = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

GridCoord canonical_coord(std::uint64_t num, std::uint32_t depth);
double unit_value(GridCoord c);  // num / 3^depth as a double in [0, 1]

// Exact grid vertex: one canonical GridCoord per axis.
class ExactVertex {
 public:
  ExactVertex() = default;
  explicit ExactVertex(std::vector<GridCoord> coords);

  static ExactVertex domain_corner(std::size_t dimension, bool upper);

  std::size_t dimension() const { return coords_.size(); }
  const GridCoord& coord(std::size_t j) const { return coords_[j]; }
  double unit(std::size_t j) const { return unit_value(coords_[j]); }
  // Physical location in the domain; exact at the domain corners, clamped
  // inside so downstream evaluators never see an out-of-domain point.
  std::vector<double> to_point(const BoxDomain& domain) const;

  friend bool operator==(const ExactVertex&, const ExactVertex&) = default;

 private:
  std::vector<GridCoord> coords_;
};

struct ExactVertexHash {
  std::size_t operator()(const ExactVertex& v) const;
};

// Cache of objective values keyed by exact vertices, so a grid point shared
// by adjacent hyperintervals is evaluated exactly once per solve.
class VertexStore {
 public:
  using Evaluator = std::function<double(const ExactVertex&)>;

  double fetch(const ExactVertex& v, const Evaluator& eval);
  bool contains(const ExactVertex& v) const { return values_.contains(v); }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::unordered_map<ExactVertex, double, ExactVertexHash> values_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// Hyperinterval of the diagonal method: the box spanned by the two main
// diagonal vertices a, b together with their cached values. The selection
// measure d_i is half the Euclidean diagonal length; the attached value m_i
// is the mean of the two endpoint values.
class DiagCell {
 public:
  DiagCell(ExactVertex a, ExactVertex b, double z_a, double z_b,
           const BoxDomain& domain);

  const ExactVertex& a() const { return a_; }
  const ExactVertex& b() const { return b_; }
  double z_a() const { return z_a_; }
  double z_b() const { return z_b_; }

  double half_diagonal() const { return half_diagonal_; }
  double mean_value() const { return 0.5 * (z_a_ + z_b_); }
  double characteristic() const { return mean_value(); }
  const BoxDomain& region() const { return region_; }
  // Canonical per-axis width fractions; equal geometric widths compare equal.
  const std::vector<GridCoord>& widths() const { return widths_; }

 private:
  ExactVertex a_;
  ExactVertex b_;
  double z_a_ = 0.0;
  double z_b_ = 0.0;
  std::vector<GridCoord> widths_;
  double half_diagonal_ = 0.0;
  BoxDomain region_;
};

struct DiagTrisection {
  std::size_t axis = 0;
  // In order: (a, v), (u, v), (u, b) where u = a advanced 2/3 toward b on
  // the split axis and v = b pulled 2/3 toward a.
  std::vector<DiagCell> children;
};

// Three-slab trisection orthogonal to the longest physical edge (ties break
// toward the lowest axis index). The two new vertices are evaluated through
// the store, u before v.
DiagTrisection trisect_diagonal(const DiagCell& cell, const BoxDomain& domain,
                                VertexStore& store,
                                const VertexStore::Evaluator& eval);

// DIRECT-style nondominance on (d_i, m_i) pairs; see nondominance.hpp for
// the exact hull and margin semantics. Returns ascending indices.
std::vector<std::size_t> select_nondominated(std::span<const DiagCell> cells,
                                             double f_best, double eps);

struct DiagParams {
  double eps = LipschitzSpec::kDefaultEps;  // minimal relative improvement
  bool subdivide_all = true;  // subdivide every nondominated cell per sweep
  std::ostream* partition_trace = nullptr;  // one line per created cell
};

// Multidimensional diagonal solver ("diag-new"): Divide-the-Best with
// three-slab trisection, shared-vertex caching and nondominated selection.
SolverResult solve_multidim_diagonal(Objective& objective,
                                     const BoxDomain& domain,
                                     const DiagParams& params,
                                     const StoppingCriteria& stop);

}  // namespace lgo
