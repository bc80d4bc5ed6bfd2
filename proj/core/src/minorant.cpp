#include "lgo/minorant.hpp"

#include <cmath>
#include <limits>

#include "internal.hpp"
#include "lgo/domain.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

void check_L(double L) {
  detail::require_finite(L, "Lipschitz constant L");
  if (L <= 0.0) throw InputError("Lipschitz constant L must be positive");
}

void check_trials(std::span<const Trial> trials) {
  if (trials.empty()) throw DomainError("operation requires at least one trial");
  const std::size_t n = trials.front().point.size();
  for (const Trial& t : trials) {
    if (t.point.size() != n)
      throw InputError("trials must share one dimension");
    detail::require_finite(t.point, "trial point");
    detail::require_finite(t.value, "trial value");
  }
}

}  // namespace

double minorant_value(std::span<const Trial> trials, double L,
                      std::span<const double> x) {
  check_L(L);
  check_trials(trials);
  detail::require_finite(x, "query point");
  if (x.size() != trials.front().point.size())
    throw InputError("query point dimension mismatch");

  double best = -std::numeric_limits<double>::infinity();
  for (const Trial& t : trials) {
    double v = t.value - L * euclidean_distance(t.point, x);
    if (v > best) best = v;
  }
  return best;
}

MinorantMinimum minorant_minimum_1d(std::span<const Trial> trials, double L,
                                    double a, double b) {
  check_L(L);
  check_trials(trials);
  detail::require_finite(a, "interval endpoint");
  detail::require_finite(b, "interval endpoint");
  if (!(a < b)) throw InputError("interval requires a < b");
  if (trials.size() < 2)
    throw DomainError("minorant minimum requires both endpoint trials");
  for (const Trial& t : trials) {
    if (t.point.size() != 1)
      throw InputError("minorant_minimum_1d expects univariate trials");
  }
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (!(trials[i - 1].point[0] < trials[i].point[0]))
      throw InputError("trials must be sorted by strictly increasing abscissa");
  }
  if (trials.front().point[0] != a || trials.back().point[0] != b)
    throw InputError("trials must include both interval endpoints");

  MinorantMinimum best{a, trials.front().value};
  bool have = false;
  for (std::size_t i = 0; i + 1 < trials.size(); ++i) {
    const double xl = trials[i].point[0], zl = trials[i].value;
    const double xr = trials[i + 1].point[0], zr = trials[i + 1].value;
    const double xhat = 0.5 * (xl + xr) - (zr - zl) / (2.0 * L);
    const double vhat = 0.5 * (zl + zr) - 0.5 * L * (xr - xl);
    if (!have || vhat < best.value) {
      best = {xhat, vhat};
      have = true;
    }
  }
  return best;
}

double diagonal_lower_bound(double z_a, double z_b, double diag_length,
                            double L) {
  check_L(L);
  detail::require_finite(z_a, "endpoint value");
  detail::require_finite(z_b, "endpoint value");
  detail::require_finite(diag_length, "diagonal length");
  if (diag_length <= 0.0) throw InputError("diagonal length must be positive");
  return 0.5 * (z_a + z_b) - 0.5 * L * diag_length;
}

std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation_witness(
    std::span<const Trial> trials, double L) {
  check_L(L);
  if (trials.empty()) return std::nullopt;
  check_trials(trials);
  for (std::size_t i = 0; i + 1 < trials.size(); ++i) {
    for (std::size_t j = i + 1; j < trials.size(); ++j) {
      const double gap = std::abs(trials[i].value - trials[j].value);
      const double reach = L * euclidean_distance(trials[i].point, trials[j].point);
      if (gap > reach) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

}  // namespace lgo
