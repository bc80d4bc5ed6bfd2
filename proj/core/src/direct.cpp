#include "lgo/direct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "internal.hpp"
#include "lgo/divide_the_best.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

// Negative powers of three by repeated division; index 646 is the last one
// that is still a normal double, far beyond any reachable trisection depth.
constexpr std::size_t kMaxRectLevel = 646;

const std::array<double, kMaxRectLevel + 1>& pow3_inv() {
  static const auto table = [] {
    std::array<double, kMaxRectLevel + 1> p{};
    p[0] = 1.0;
    for (std::size_t i = 1; i < p.size(); ++i) p[i] = p[i - 1] / 3.0;
    return p;
  }();
  return table;
}

double level_side(std::uint32_t level) {
  if (level > kMaxRectLevel)
    throw StructuralError("trisection level exceeds representable scale");
  return pow3_inv()[level];
}

// Measure from the sorted level multiset so that congruent rectangles give
// bit-identical doubles regardless of axis order.
double rect_measure(const std::vector<std::uint16_t>& levels,
                    DirectVariant variant) {
  if (variant == DirectVariant::DirectL) {
    std::uint16_t lmin = levels[0];
    for (std::uint16_t l : levels) lmin = std::min(lmin, l);
    return 0.5 * level_side(lmin);
  }
  std::vector<std::uint16_t> sorted(levels);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double s = 0.0;
  for (std::uint16_t l : sorted) {
    const double side = level_side(l);
    s += side * side;
  }
  return 0.5 * std::sqrt(s);
}

BoxDomain rect_region(const std::vector<double>& center,
                      const std::vector<std::uint16_t>& levels) {
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t j = 0; j < center.size(); ++j) {
    const double half = 0.5 * level_side(levels[j]);
    lo[j] = center[j] - half;
    hi[j] = center[j] + half;
  }
  return BoxDomain(std::move(lo), std::move(hi));
}

}  // namespace

CenterRect::CenterRect(std::vector<double> center,
                       std::vector<std::uint16_t> levels, double center_value,
                       DirectVariant variant)
    : center_(std::move(center)),
      levels_(std::move(levels)),
      value_(center_value),
      variant_(variant),
      measure_(0.0),
      region_({0.0}, {1.0}) {
  if (center_.empty() || center_.size() != levels_.size())
    throw InputError("rectangle centre and levels must share a dimension");
  detail::require_finite(center_, "rectangle centre");
  detail::require_finite(value_, "centre value");
  measure_ = rect_measure(levels_, variant_);
  region_ = rect_region(center_, levels_);
}

CenterRect::CenterRect(std::vector<double> center,
                       std::vector<std::uint16_t> levels, double center_value,
                       DirectVariant variant, BoxDomain region)
    : center_(std::move(center)),
      levels_(std::move(levels)),
      value_(center_value),
      variant_(variant),
      measure_(0.0),
      region_(std::move(region)) {
  if (center_.empty() || center_.size() != levels_.size())
    throw InputError("rectangle centre and levels must share a dimension");
  detail::require_finite(center_, "rectangle centre");
  detail::require_finite(value_, "centre value");
  measure_ = rect_measure(levels_, variant_);
}

double CenterRect::side(std::size_t j) const { return level_side(levels_[j]); }

RectTrisection trisect_rect(
    const CenterRect& rect,
    const std::function<double(std::span<const double>)>& sampler) {
  if (!sampler) throw InputError("trisect_rect requires a sampler");
  const std::size_t n = rect.center().size();

  std::uint16_t lmin = rect.level(0);
  for (std::size_t j = 1; j < n; ++j) lmin = std::min(lmin, rect.level(j));
  std::vector<std::size_t> axes;
  if (rect.variant() == DirectVariant::DirectL) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rect.level(j) == lmin) {
        axes.push_back(j);
        break;
      }
    }
  } else {
    for (std::size_t j = 0; j < n; ++j)
      if (rect.level(j) == lmin) axes.push_back(j);
  }

  // Sample c +- delta e_j on every split axis first, ascending axis order.
  struct AxisSample {
    std::size_t axis;
    double delta;
    double f_minus;
    double f_plus;
    double w;
  };
  std::vector<AxisSample> samples;
  samples.reserve(axes.size());
  std::vector<double> probe(rect.center());
  for (std::size_t j : axes) {
    const double delta = level_side(rect.level(j) + 1);
    probe[j] = rect.center()[j] - delta;
    const double fm = sampler(probe);
    probe[j] = rect.center()[j] + delta;
    const double fp = sampler(probe);
    probe[j] = rect.center()[j];
    samples.push_back({j, delta, fm, fp, std::min(fm, fp)});
  }

  // Jones ordering: axes with better sampled values split first, so their
  // children keep the larger remaining box.
  std::stable_sort(samples.begin(), samples.end(),
                   [](const AxisSample& a, const AxisSample& b) {
                     if (a.w != b.w) return a.w < b.w;
                     return a.axis < b.axis;
                   });

  // Children take their bounds as slices of the parent's stored region, so
  // shared edges stay bit-identical no matter how deep the refinement goes;
  // rebuilding boxes around the centres would drift by an ulp or two.
  RectTrisection out;
  std::vector<double> center(rect.center());
  std::vector<std::uint16_t> levels(rect.levels());
  std::vector<double> lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = rect.region().lower(j);
    hi[j] = rect.region().upper(j);
  }
  for (const AxisSample& s : samples) {
    levels[s.axis] += 1;
    const std::size_t a = s.axis;
    const double third = (hi[a] - lo[a]) / 3.0;
    const double m1 = lo[a] + third;
    const double m2 = hi[a] - third;
    if (!(lo[a] < m1 && m1 < m2 && m2 < hi[a]))
      throw StructuralError("rectangle side too small to trisect");
    std::vector<double> cm(center), cp(center);
    cm[a] -= s.delta;
    cp[a] += s.delta;
    {
      std::vector<double> l(lo), h(hi);
      h[a] = m1;
      out.children.push_back(CenterRect(std::move(cm), levels, s.f_minus,
                                        rect.variant(),
                                        BoxDomain(std::move(l), std::move(h))));
    }
    {
      std::vector<double> l(lo), h(hi);
      l[a] = m2;
      out.children.push_back(CenterRect(std::move(cp), levels, s.f_plus,
                                        rect.variant(),
                                        BoxDomain(std::move(l), std::move(h))));
    }
    lo[a] = m1;
    hi[a] = m2;
  }
  out.children.push_back(CenterRect(std::move(center), std::move(levels),
                                    rect.value(), rect.variant(),
                                    BoxDomain(std::move(lo), std::move(hi))));
  out.continuation = out.children.size() - 1;
  return out;
}

std::vector<std::size_t> potentially_optimal(std::span<const CenterRect> rects,
                                             double f_min, double eps) {
  std::vector<MeasurePoint> pts;
  pts.reserve(rects.size());
  for (const CenterRect& r : rects) pts.push_back({r.measure(), r.value()});
  return nondominated_select(pts, f_min, eps);
}

namespace {

// Rectangles at the floating-point resolution floor stay live but leave the
// selection pool: once a split axis can no longer be sliced into three
// strictly ordered pieces, trisection cannot produce a valid partition. The
// axis set mirrors trisect_rect (all minimum-level axes, or just the first
// one for DIRECT-l).
bool rect_splittable(const CenterRect& rect) {
  const std::size_t n = rect.center().size();
  std::uint16_t lmin = rect.level(0);
  for (std::size_t j = 1; j < n; ++j) lmin = std::min(lmin, rect.level(j));
  if (static_cast<std::size_t>(lmin) + 1 > kMaxRectLevel) return false;
  for (std::size_t j = 0; j < n; ++j) {
    if (rect.level(j) != lmin) continue;
    const double lo = rect.region().lower(j);
    const double hi = rect.region().upper(j);
    const double third = (hi - lo) / 3.0;
    const double m1 = lo + third;
    const double m2 = hi - third;
    if (!(lo < m1 && m1 < m2 && m2 < hi)) return false;
    if (rect.variant() == DirectVariant::DirectL) break;
  }
  return true;
}

// Divide-the-Best hooks for DIRECT / DIRECT-l on the unit cube, with an
// incremental measure -> (value, id) grouping so selection cost does not
// grow with the trial count.
struct DirectMethod {
  using Cell = CenterRect;
  using State = PartitionState<CenterRect>;
  struct Placement {
    RectTrisection tri;
  };

  DirectVariant variant = DirectVariant::Direct;
  double eps = 1e-4;
  const BoxDomain* physical = nullptr;
  std::map<double, std::set<std::pair<double, std::uint64_t>>> groups;
  std::vector<double> scratch;
  double pending_d = 0.0;
  double pending_f = 0.0;

  std::function<double(std::span<const double>)> sampler(Objective& objective) {
    return [this, &objective](std::span<const double> u) {
      scratch.resize(u.size());
      for (std::size_t j = 0; j < u.size(); ++j)
        scratch[j] = physical->lower(j) + u[j] * physical->width(j);
      return objective.evaluate(scratch);
    };
  }

  void initialize(State& state, Objective& objective) {
    const std::size_t n = physical->dimension();
    std::vector<double> center(n, 0.5);
    const double fc = sampler(objective)(center);
    const std::uint64_t id = state.add_root(
        CenterRect(std::move(center), std::vector<std::uint16_t>(n, 0), fc,
                   variant));
    const CenterRect& cell = state.node(id).cell;
    if (rect_splittable(cell))
      groups[cell.measure()].insert({cell.value(), id});
  }

  void compute_characteristics(State&) {}  // centre values are immutable

  std::vector<std::uint64_t> select(State& state) {
    const Trial* incumbent = state.objective->best();
    if (!incumbent) return {};
    const double f_min = incumbent->value;

    std::vector<MeasurePoint> reps;
    reps.reserve(groups.size());
    for (const auto& [d, members] : groups)
      reps.push_back({d, members.begin()->first});
    const auto chosen = nondominated_select(reps, f_min, eps);

    std::vector<std::uint64_t> ids;
    std::size_t g = 0;
    auto it = groups.begin();
    for (std::size_t k : chosen) {
      while (g < k) {
        ++it;
        ++g;
      }
      const auto& members = it->second;
      const double fmin = members.begin()->first;
      for (const auto& [f, id] : members) {
        if (f != fmin) break;
        ids.push_back(id);
        // DIRECT-l takes at most one rectangle per distinct measure.
        if (variant == DirectVariant::DirectL) break;
      }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  Placement place_trials(State& state, std::uint64_t id, Objective& objective) {
    const CenterRect& cell = state.node(id).cell;
    pending_d = cell.measure();
    pending_f = cell.value();
    return {trisect_rect(cell, sampler(objective))};
  }

  Subdivision<CenterRect> subdivide(State&, std::uint64_t, Placement&& p) {
    Subdivision<CenterRect> sub;
    sub.children = std::move(p.tri.children);
    sub.continuation = p.tri.continuation;
    return sub;
  }

  void post_commit(State& state, std::uint64_t parent_id,
                   std::span<const std::uint64_t> child_ids) {
    auto it = groups.find(pending_d);
    if (it != groups.end()) {
      it->second.erase({pending_f, parent_id});
      if (it->second.empty()) groups.erase(it);
    }
    for (std::uint64_t id : child_ids) {
      const CenterRect& cell = state.node(id).cell;
      if (rect_splittable(cell))
        groups[cell.measure()].insert({cell.value(), id});
    }
  }
};

}  // namespace

SolverResult solve_direct(Objective& objective, const BoxDomain& domain,
                          DirectVariant variant, double eps,
                          const StoppingCriteria& stop) {
  detail::require_finite(eps, "eps");
  if (eps < 0.0) throw InputError("eps must be >= 0");

  DirectMethod method;
  method.variant = variant;
  method.eps = eps;
  method.physical = &domain;
  const BoxDomain unit = BoxDomain::unit_cube(domain.dimension());
  return run_divide_the_best(objective, unit, method, stop);
}

}  // namespace lgo
