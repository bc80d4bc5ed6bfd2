#include "lgo/geometric1d.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "internal.hpp"
#include "lgo/divide_the_best.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

void check_1d_sorted(std::span<const Trial> trials) {
  if (trials.size() < 2)
    throw InputError("estimate requires at least two trials");
  for (const Trial& t : trials) {
    if (t.point.size() != 1) throw InputError("trials must be univariate");
    detail::require_finite(t.point[0], "trial abscissa");
    detail::require_finite(t.value, "trial value");
  }
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (trials[i - 1].point[0] == trials[i].point[0])
      throw InputError("duplicate trial abscissae");
    if (trials[i - 1].point[0] > trials[i].point[0])
      throw InputError("trials must be sorted by abscissa");
  }
}

void check_rate_params(double r, double xi) {
  detail::require_finite(r, "reliability r");
  if (r < 1.0) throw InputError("reliability r must be >= 1");
  detail::require_positive(xi, "floor xi");
}

double pair_slope(const Trial& a, const Trial& b) {
  return std::abs(b.value - a.value) / (b.point[0] - a.point[0]);
}

}  // namespace

namespace {

BoxDomain make_interval_region(const Trial& left, const Trial& right) {
  const double xl = left.point.at(0), xr = right.point.at(0);
  detail::require_finite(xl, "trial abscissa");
  detail::require_finite(xr, "trial abscissa");
  if (!(xl < xr)) throw StructuralError("degenerate interval");
  return BoxDomain({xl}, {xr});
}

}  // namespace

IntervalCell::IntervalCell(Trial left, Trial right)
    : left_(std::move(left)),
      right_(std::move(right)),
      region_(make_interval_region(left_, right_)) {
  detail::require_finite(left_.value, "trial value");
  detail::require_finite(right_.value, "trial value");
}

double IntervalCell::slope() const {
  return std::abs(right_.value - left_.value) / width();
}

double interval_characteristic(const IntervalCell& cell, double l) {
  detail::require_positive(l, "estimate l");
  const double w = cell.width();
  if (!(w > 0.0)) throw StructuralError("interval has zero width");
  return 0.5 * (cell.left().value + cell.right().value) - 0.5 * l * w;
}

std::optional<double> next_trial_point(const IntervalCell& cell, double l) {
  detail::require_positive(l, "estimate l");
  const double xl = cell.left().point[0], xr = cell.right().point[0];
  const double xhat =
      0.5 * (xl + xr) - (cell.right().value - cell.left().value) / (2.0 * l);
  if (!(xhat > xl && xhat < xr)) return std::nullopt;
  return xhat;
}

double estimate_L_global(std::span<const Trial> trials, double r, double xi) {
  check_1d_sorted(trials);
  check_rate_params(r, xi);
  double h = xi;
  for (std::size_t i = 0; i + 1 < trials.size(); ++i)
    h = std::max(h, pair_slope(trials[i], trials[i + 1]));
  return r * h;
}

double estimate_L_local(std::span<const Trial> trials, std::size_t i, double r,
                        double xi) {
  check_1d_sorted(trials);
  check_rate_params(r, xi);
  if (i + 1 >= trials.size())
    throw InputError("interval index out of range");

  double lambda = 0.0, Lambda = 0.0, xmax = 0.0;
  for (std::size_t k = 0; k + 1 < trials.size(); ++k) {
    const double s = pair_slope(trials[k], trials[k + 1]);
    Lambda = std::max(Lambda, s);
    xmax = std::max(xmax, trials[k + 1].point[0] - trials[k].point[0]);
    if (k + 1 >= i && k <= i + 1) lambda = std::max(lambda, s);
  }
  const double width = trials[i + 1].point[0] - trials[i].point[0];
  const double gamma = Lambda * width / xmax;
  return r * std::max({lambda, gamma, xi});
}

namespace {

// Hook bundle shared by the three univariate modes. Characteristics are
// refreshed for all live intervals each iteration; estimates come from the
// configured Lipschitz mode.
struct PiyavskijMethod {
  using Cell = IntervalCell;
  using State = PartitionState<IntervalCell>;
  struct Placement {
    Trial trial;
  };

  LipschitzSpec spec;
  double a, b;
  double minsep;  // minimal distance between trial abscissae

  PiyavskijMethod(const LipschitzSpec& s, const BoxDomain& interval)
      : spec(s),
        a(interval.lower(0)),
        b(interval.upper(0)),
        minsep(1e-12 * interval.width(0)) {}

  void initialize(State& state, Objective& objective) {
    const double za = objective.evaluate(a);
    const double zb = objective.evaluate(b);
    state.add_root(IntervalCell({{a}, za}, {{b}, zb}));
  }

  void compute_characteristics(State& state) {
    switch (spec.mode()) {
      case LipschitzMode::APriori: {
        for (auto& n : state.live) apply_estimate(n.cell, spec.constant());
        break;
      }
      case LipschitzMode::AdaptiveGlobal: {
        double h = spec.floor();
        for (const auto& n : state.live) h = std::max(h, n.cell.slope());
        const double L = spec.reliability() * h;
        for (auto& n : state.live) apply_estimate(n.cell, L);
        break;
      }
      case LipschitzMode::LocalTuning: {
        local_tuning(state);
        break;
      }
      case LipschitzMode::MultipleEstimates:
        throw InputError("MultipleEstimates is not a univariate mode");
    }
  }

  std::vector<std::uint64_t> select(State& state) const {
    double best = 0.0;
    std::uint64_t best_id = 0;
    bool have = false;
    for (const auto& n : state.live) {
      if (n.cell.width() < 4.0 * minsep) continue;  // too narrow to split
      const double r = n.cell.characteristic();
      if (!have || r < best || (r == best && n.id < best_id)) {
        best = r;
        best_id = n.id;
        have = true;
      }
    }
    if (!have) return {};
    return {best_id};
  }

  Placement place_trials(State& state, std::uint64_t id, Objective& objective) {
    const IntervalCell& cell = state.node(id).cell;
    const double xl = cell.left().point[0], xr = cell.right().point[0];
    double l = cell.estimate();
    std::optional<double> xhat;
    for (int attempt = 0; attempt < 64 && !xhat; ++attempt) {
      xhat = next_trial_point(cell, l);
      if (!xhat) l *= spec.reliability();
    }
    double x = xhat ? std::clamp(*xhat, xl + minsep, xr - minsep)
                    : 0.5 * (xl + xr);
    const double z = objective.evaluate(x);
    return {Trial{{x}, z}};
  }

  Subdivision<IntervalCell> subdivide(State& state, std::uint64_t id,
                                      Placement&& p) {
    const IntervalCell& cell = state.node(id).cell;
    Subdivision<IntervalCell> sub;
    sub.children.emplace_back(cell.left(), p.trial);
    sub.children.emplace_back(std::move(p.trial), cell.right());
    return sub;
  }

 private:
  static void apply_estimate(IntervalCell& cell, double l) {
    cell.set_estimate(l);
    cell.set_characteristic(interval_characteristic(cell, l));
  }

  void local_tuning(State& state) const {
    std::vector<std::size_t> order(state.live.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
      return state.live[u].cell.left().point[0] <
             state.live[v].cell.left().point[0];
    });

    double Lambda = 0.0, xmax = 0.0;
    for (const auto& n : state.live) {
      Lambda = std::max(Lambda, n.cell.slope());
      xmax = std::max(xmax, n.cell.width());
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      IntervalCell& cell = state.live[order[k]].cell;
      double lambda = cell.slope();
      if (k > 0)
        lambda = std::max(lambda, state.live[order[k - 1]].cell.slope());
      if (k + 1 < order.size())
        lambda = std::max(lambda, state.live[order[k + 1]].cell.slope());
      const double gamma = Lambda * cell.width() / xmax;
      apply_estimate(cell,
                     spec.reliability() * std::max({lambda, gamma, spec.floor()}));
    }
  }
};

}  // namespace

SolverResult solve_piyavskij(Objective& objective, const BoxDomain& interval,
                             const LipschitzSpec& lipschitz,
                             const StoppingCriteria& stop) {
  if (interval.dimension() != 1)
    throw InputError("solve_piyavskij requires a 1-D domain");
  if (lipschitz.mode() == LipschitzMode::MultipleEstimates)
    throw InputError("MultipleEstimates is not a univariate mode");

  PiyavskijMethod method(lipschitz, interval);
  return run_divide_the_best(objective, interval, method, stop);
}

}  // namespace lgo
