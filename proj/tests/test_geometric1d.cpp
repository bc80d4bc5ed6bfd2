#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lgo/errors.hpp"
#include "lgo/geometric1d.hpp"
#include "oracles.hpp"

using namespace lgo;

namespace {

std::vector<Trial> grid_trials(std::initializer_list<std::pair<double, double>> pts) {
  std::vector<Trial> out;
  for (auto [x, z] : pts) out.push_back({{x}, z});
  return out;
}

}  // namespace

TEST_CASE("IntervalCell geometry") {
  IntervalCell cell({{0.0}, 1.0}, {{1.0}, 0.0});
  CHECK(cell.width() == 1.0);
  CHECK(cell.slope() == 1.0);
  CHECK(cell.region().lower(0) == 0.0);
  CHECK(cell.region().upper(0) == 1.0);
  CHECK_THROWS_AS(IntervalCell({{1.0}, 0.0}, {{1.0}, 0.0}), StructuralError);
  CHECK_THROWS_AS(IntervalCell({{2.0}, 0.0}, {{1.0}, 0.0}), StructuralError);
}

TEST_CASE("interval_characteristic closed form") {
  IntervalCell down({{0.0}, 1.0}, {{1.0}, 0.0});
  CHECK(interval_characteristic(down, 2.0) == doctest::Approx(-0.5));

  IntervalCell flat({{0.0}, 4.0}, {{1.0}, 4.0});
  CHECK(interval_characteristic(flat, 3.0) == doctest::Approx(4.0 - 1.5));

  // slope equal to the estimate: minimum sits at the left endpoint value
  IntervalCell ramp({{0.0}, 0.0}, {{2.0}, 2.0});
  CHECK(interval_characteristic(ramp, 1.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(interval_characteristic(down, 0.0), InputError);
}

TEST_CASE("next_trial_point closed form") {
  IntervalCell down({{0.0}, 1.0}, {{1.0}, 0.0});
  auto x = next_trial_point(down, 2.0);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(0.75));

  IntervalCell flat({{0.0}, 2.0}, {{1.0}, 2.0});
  x = next_trial_point(flat, 1.0);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(0.5));

  IntervalCell up({{0.0}, 0.0}, {{1.0}, 1.0});
  x = next_trial_point(up, 2.0);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(0.25));

  // slope condition violated: the candidate would leave the interior
  CHECK_FALSE(next_trial_point(up, 1.0).has_value());
  CHECK_FALSE(next_trial_point(up, 0.5).has_value());
}

TEST_CASE("estimate_L_global") {
  CHECK(estimate_L_global(grid_trials({{0.0, 0.0}, {1.0, 3.0}}), 1.5, 1e-8) ==
        doctest::Approx(4.5));
  CHECK(estimate_L_global(grid_trials({{0.0, 5.0}, {0.5, 5.0}, {1.0, 5.0}}),
                          2.0, 1e-8) == doctest::Approx(2e-8));
  CHECK(estimate_L_global(grid_trials({{0.0, 0.0}, {0.5, 1.0}, {1.0, 1.0}}),
                          1.0, 1e-8) == doctest::Approx(2.0));

  CHECK_THROWS_AS(estimate_L_global(grid_trials({{0.0, 0.0}}), 1.5, 1e-8),
                  InputError);
  CHECK_THROWS_AS(
      estimate_L_global(grid_trials({{0.0, 0.0}, {0.0, 1.0}}), 1.5, 1e-8),
      InputError);
  CHECK_THROWS_AS(
      estimate_L_global(grid_trials({{1.0, 0.0}, {0.0, 1.0}}), 1.5, 1e-8),
      InputError);
  CHECK_THROWS_AS(
      estimate_L_global(grid_trials({{0.0, 0.0}, {1.0, 1.0}}), 0.9, 1e-8),
      InputError);
}

TEST_CASE("estimate_L_local blends local and global information") {
  // uniform grid with constant slope: lambda = gamma = s everywhere
  const double s = 2.5;
  auto uniform = grid_trials(
      {{0.0, 0.0}, {0.25, 0.25 * s}, {0.5, 0.5 * s}, {0.75, 0.75 * s}, {1.0, s}});
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(estimate_L_local(uniform, i, 1.0, 1e-8) == doctest::Approx(s));

  // flat neighborhood, distant steep wall: the gamma term takes over
  auto mixed = grid_trials(
      {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}, {0.3, 0.0}, {1.3, 10.0}});
  CHECK(estimate_L_local(mixed, 1, 1.0, 1e-8) == doctest::Approx(1.0));

  // two trials only: the single interval dominates everything
  CHECK(estimate_L_local(grid_trials({{0.0, 0.0}, {1.0, 3.0}}), 0, 1.2,
                         1e-8) == doctest::Approx(3.6));

  CHECK_THROWS_AS(estimate_L_local(uniform, 4, 1.0, 1e-8), InputError);
}

TEST_CASE("solve_piyavskij finds the kink of |x - 0.3|") {
  Objective obj([](std::span<const double> x) { return std::abs(x[0] - 0.3); });
  SolverResult res = solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                     LipschitzSpec::a_priori(1.0),
                                     StoppingCriteria{50, {}, {}});
  CHECK(res.best_value <= 1e-3);
  CHECK(std::abs(res.best_point[0] - 0.3) <= 2e-3);
  CHECK(res.trials_used <= 50);
}

TEST_CASE("solve_piyavskij on a constant function") {
  Objective obj([](std::span<const double>) { return -7.5; });
  SolverResult res = solve_piyavskij(obj, BoxDomain({2.0}, {3.0}),
                                     LipschitzSpec::adaptive_global(),
                                     StoppingCriteria{40, {}, {}});
  CHECK(res.best_value == -7.5);
  CHECK(res.trial_history.size() >= 2);
  CHECK(res.trial_history[0].point[0] == 2.0);  // endpoints first, a then b
  CHECK(res.trial_history[1].point[0] == 3.0);
}

TEST_CASE("solve_piyavskij rejects bad setups") {
  Objective obj([](std::span<const double>) { return 0.0; });
  CHECK_THROWS_AS(solve_piyavskij(obj, BoxDomain::unit_cube(2),
                                  LipschitzSpec::a_priori(1.0),
                                  StoppingCriteria{10, {}, {}}),
                  InputError);
  CHECK_THROWS_AS(solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                  LipschitzSpec::multiple_estimates(),
                                  StoppingCriteria{10, {}, {}}),
                  InputError);
}

TEST_CASE("adaptive global mode hits cone minima on most seeds") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const oracles::ConeFunction1D f = oracles::make_cone_function(seed);
    Objective obj([&](std::span<const double> x) { return f(x[0]); });
    SolverResult res = solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                       LipschitzSpec::adaptive_global(1.5),
                                       StoppingCriteria{1000, {}, {}});
    bool hit = false;
    for (const Trial& t : res.trial_history)
      if (std::abs(t.point[0] - f.x_star) <= 1e-4) {
        hit = true;
        break;
      }
    hits += hit ? 1 : 0;
  }
  CHECK(hits >= 95);
}

TEST_CASE("a-priori characteristics are valid lower bounds") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const oracles::ConeFunction1D f = oracles::make_cone_function(seed);
    const double L = f.lipschitz * 1.2;
    Objective obj([&](std::span<const double> x) { return f(x[0]); });
    SolverResult res = solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                       LipschitzSpec::a_priori(L),
                                       StoppingCriteria{120, {}, {}});

    // rebuild the final intervals from the sorted history and check that the
    // smallest characteristic still underestimates the known optimum
    std::vector<Trial> sorted = res.trial_history;
    std::sort(sorted.begin(), sorted.end(),
              [](const Trial& a, const Trial& b) { return a.point[0] < b.point[0]; });
    double min_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      IntervalCell cell(sorted[i], sorted[i + 1]);
      min_r = std::min(min_r, interval_characteristic(cell, L));
    }
    CHECK(min_r <= f.f_star + 1e-9);
    CHECK(res.best_value >= min_r);
    CHECK(res.best_value >= f.f_star);
  }
}

TEST_CASE("trial abscissae never collide") {
  for (std::uint64_t seed = 300; seed < 305; ++seed) {
    const oracles::ConeFunction1D f = oracles::make_cone_function(seed);
    Objective obj([&](std::span<const double> x) { return f(x[0]); });
    SolverResult res = solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                       LipschitzSpec::local_tuning(1.5),
                                       StoppingCriteria{400, {}, {}});
    std::vector<double> xs;
    for (const Trial& t : res.trial_history) xs.push_back(t.point[0]);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      CHECK(xs[i + 1] - xs[i] >= 0.9e-12);
  }
}

TEST_CASE("local tuning keeps refining around the global minimizer") {
  const oracles::ConeFunction1D f = oracles::make_cone_function(55);
  Objective obj([&](std::span<const double> x) { return f(x[0]); });
  SolverResult res = solve_piyavskij(obj, BoxDomain::unit_cube(1),
                                     LipschitzSpec::local_tuning(2.0),
                                     StoppingCriteria{2000, {}, {}});

  // the interval bracketing x* must have been subdivided down to size
  std::vector<double> xs;
  for (const Trial& t : res.trial_history) xs.push_back(t.point[0]);
  std::sort(xs.begin(), xs.end());
  auto right = std::upper_bound(xs.begin(), xs.end(), f.x_star);
  REQUIRE(right != xs.begin());
  REQUIRE(right != xs.end());
  const double bracket = *right - *(right - 1);
  CHECK(bracket < 1e-6);
  CHECK(res.best_value <= f.f_star + 1e-6);
}
