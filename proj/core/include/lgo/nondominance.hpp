#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lgo {

// One selection candidate: a positive size measure d and the value f the
// method attaches to the cell (centre value, or mean of diagonal values).
struct MeasurePoint {
  double d = 0.0;
  double f = 0.0;
};

// Margin demanded by the improvement test: eps * |f_best|, with an absolute
// floor of 1e-8 when f_best is exactly zero and eps > 0.
double improvement_margin(double f_best, double eps);

// Indices of the candidates that are nondominated in the DIRECT sense:
// candidate i is selected when some constant K > 0 makes f_i - K d_i minimal
// over all candidates and f_i - K d_i <= f_best - improvement_margin.
//
// Geometrically these are the vertices of the lower-left convex hull of the
// (d, f) cloud, walked from the largest-d group that attains the smallest f;
// candidates collinear on a hull edge are kept, the largest-d vertex always
// passes the margin test, and within a group of exactly equal d every tie at
// the group minimum f is returned. Indices come back ascending.
std::vector<std::size_t> nondominated_select(
    std::span<const MeasurePoint> candidates, double f_best, double eps);

}  // namespace lgo
