#include "lgo/nondominance.hpp"

#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "lgo/errors.hpp"

namespace lgo {

double improvement_margin(double f_best, double eps) {
  detail::require_finite(f_best, "f_best");
  detail::require_finite(eps, "eps");
  if (eps < 0.0) throw InputError("eps must be >= 0");
  if (eps == 0.0) return 0.0;
  if (f_best == 0.0) return 1e-8;
  return eps * std::abs(f_best);
}

namespace {

struct Group {
  double d = 0.0;
  double fmin = 0.0;
  std::size_t begin = 0;  // range in the sorted order
  std::size_t end = 0;
};

}  // namespace

std::vector<std::size_t> nondominated_select(
    std::span<const MeasurePoint> candidates, double f_best, double eps) {
  const double margin = improvement_margin(f_best, eps);
  if (candidates.empty()) return {};
  for (const MeasurePoint& c : candidates) {
    detail::require_positive(c.d, "measure d");
    detail::require_finite(c.f, "value f");
  }

  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (candidates[a].d != candidates[b].d) return candidates[a].d < candidates[b].d;
    if (candidates[a].f != candidates[b].f) return candidates[a].f < candidates[b].f;
    return a < b;
  });

  std::vector<Group> groups;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && candidates[order[j]].d == candidates[order[i]].d) ++j;
    groups.push_back({candidates[order[i]].d, candidates[order[i]].f, i, j});
    i = j;
  }

  // Start at the largest-d group attaining the global minimum value; groups
  // of smaller d are dominated for every K > 0.
  double global_min = groups.front().fmin;
  for (const Group& g : groups) global_min = std::min(global_min, g.fmin);
  std::size_t start = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].fmin == global_min) start = g;
  }

  // Lower-left hull over the group representatives (d, fmin), d ascending.
  // Pop only points strictly above a chord: collinear points stay selectable.
  std::vector<std::size_t> hull;
  for (std::size_t g = start; g < groups.size(); ++g) {
    while (hull.size() >= 2) {
      const Group& p = groups[hull[hull.size() - 2]];
      const Group& q = groups[hull.back()];
      const Group& r = groups[g];
      if ((q.fmin - p.fmin) * (r.d - p.d) > (r.fmin - p.fmin) * (q.d - p.d))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(g);
  }

  // Margin test with the most favourable K for each vertex, the slope toward
  // the next hull vertex. The last vertex has unbounded K and always passes.
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < hull.size(); ++h) {
    const Group& g = groups[hull[h]];
    if (h + 1 < hull.size()) {
      const Group& n = groups[hull[h + 1]];
      const double slope = (n.fmin - g.fmin) / (n.d - g.d);
      if (!(g.fmin - slope * g.d <= f_best - margin)) continue;
    }
    for (std::size_t k = g.begin; k < g.end; ++k) {
      if (candidates[order[k]].f == g.fmin) out.push_back(order[k]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lgo
