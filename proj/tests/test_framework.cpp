#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lgo/divide_the_best.hpp"
#include "lgo/errors.hpp"
#include "lgo/geometric1d.hpp"
#include "lgo/partition.hpp"
#include "oracles.hpp"

using namespace lgo;

namespace {

// Minimal cell carrying a box and a fixed characteristic.
struct StubCell {
  BoxDomain box;
  double r;
  const BoxDomain& region() const { return box; }
  double characteristic() const { return r; }
};

PartitionState<StubCell> make_state(std::vector<double> rs) {
  PartitionState<StubCell> state(BoxDomain::unit_cube(1));
  for (double r : rs) state.add_root(StubCell{BoxDomain::unit_cube(1), r});
  return state;
}

// Breadth-first trisection: always subdivide the oldest live cell along its
// longest axis. Selecting everything eventually makes the partition dense.
struct RoundRobinMethod {
  using Cell = StubCell;
  using State = PartitionState<StubCell>;
  struct Placement {};

  void initialize(State& state, Objective&) {
    state.add_root(StubCell{state.domain, 0.0});
  }
  void compute_characteristics(State&) {}

  std::vector<std::uint64_t> select(State& state) const {
    std::uint64_t oldest = state.live.front().id;
    for (const auto& n : state.live) oldest = std::min(oldest, n.id);
    return {oldest};
  }

  Placement place_trials(State&, std::uint64_t, Objective& objective) {
    objective.evaluate(0.5);
    return {};
  }

  Subdivision<StubCell> subdivide(State& state, std::uint64_t id, Placement&&) {
    const BoxDomain& r = state.node(id).cell.region();
    std::size_t axis = 0;
    for (std::size_t j = 1; j < r.dimension(); ++j)
      if (r.width(j) > r.width(axis)) axis = j;

    Subdivision<StubCell> sub;
    for (int third = 0; third < 3; ++third) {
      std::vector<double> lo = r.lower_bounds(), hi = r.upper_bounds();
      const double w = r.width(axis) / 3.0;
      lo[axis] = r.lower(axis) + third * w;
      hi[axis] = third == 2 ? r.upper(axis) : lo[axis] + w;
      sub.children.push_back(StubCell{BoxDomain(std::move(lo), std::move(hi)), 0.0});
    }
    return sub;
  }
};

// Variant producing defective children, to exercise the structural checks.
struct EscapingMethod : RoundRobinMethod {
  Subdivision<StubCell> subdivide(State& state, std::uint64_t id, Placement&&) {
    const BoxDomain& r = state.node(id).cell.region();
    Subdivision<StubCell> sub;
    std::vector<double> lo = r.lower_bounds(), hi = r.upper_bounds();
    hi[0] += 0.5 * r.width(0);  // escapes the parent
    sub.children.push_back(StubCell{BoxDomain(std::move(lo), std::move(hi)), 0.0});
    return sub;
  }
};

struct LeakyMethod : RoundRobinMethod {
  Subdivision<StubCell> subdivide(State& state, std::uint64_t id, Placement&&) {
    const BoxDomain& r = state.node(id).cell.region();
    Subdivision<StubCell> sub;  // half the parent volume goes missing
    std::vector<double> lo = r.lower_bounds(), hi = r.upper_bounds();
    hi[0] = lo[0] + 0.5 * r.width(0);
    sub.children.push_back(StubCell{BoxDomain(std::move(lo), std::move(hi)), 0.0});
    return sub;
  }
};

}  // namespace

TEST_CASE("StoppingCriteria validation") {
  CHECK_THROWS_AS(validate(StoppingCriteria{0, {}, {}}), InputError);
  CHECK_THROWS_AS(validate(StoppingCriteria{10, 0.0, {}}), InputError);
  CHECK_THROWS_AS(validate(StoppingCriteria{10, 1.5, {}}), InputError);
  CHECK_THROWS_AS(validate(StoppingCriteria{10, {}, 0}), InputError);
  CHECK_NOTHROW(validate(StoppingCriteria{10, 1e-9, 100}));
}

TEST_CASE("select_best_cells picks minima with id tie-break") {
  auto state = make_state({5.0, 2.0, 2.0});
  CHECK(select_best_cells(state, 1) == std::vector<std::uint64_t>{1});

  auto state2 = make_state({5.0, 2.0, 7.0});
  CHECK(select_best_cells(state2, 2) == std::vector<std::uint64_t>{1, 0});

  auto lone = make_state({123.0});
  CHECK(select_best_cells(lone, 1) == std::vector<std::uint64_t>{0});
  CHECK(select_best_cells(lone, 5) == std::vector<std::uint64_t>{0});

  CHECK_THROWS_AS(select_best_cells(state, 0), InputError);

  // maximize flips the ordering
  CHECK(select_best_cells(state2, 1, true) == std::vector<std::uint64_t>{2});
}

TEST_CASE("check_stop honors each criterion") {
  Objective obj([](std::span<const double>) { return 0.0; });
  auto state = make_state({1.0});
  state.objective = &obj;

  StoppingCriteria cap{1000000, {}, {}};
  for (int i = 0; i < 10; ++i) obj.evaluate(0.0);
  CHECK_FALSE(check_stop(state, &state.live[0], cap).has_value());

  StoppingCriteria tiny{10, {}, {}};
  CHECK(check_stop(state, &state.live[0], tiny) == SolveStatus::MaxTrials);

  // volume fraction 1 vs threshold 1e-9: continue; then a shrunken cell
  StoppingCriteria vol{1000, 1e-9, {}};
  CHECK_FALSE(check_stop(state, &state.live[0], vol).has_value());
  PartitionState<StubCell> small(BoxDomain::unit_cube(1));
  small.objective = &obj;
  small.add_root(StubCell{BoxDomain({0.0}, {1e-10}), 0.0});
  CHECK(check_stop(small, &small.live[0], vol) == SolveStatus::MinCellVolume);

  StoppingCriteria iters{1000, {}, 5};
  state.iteration = 5;
  CHECK(check_stop(state, &state.live[0], iters) == SolveStatus::MaxIterations);
  state.iteration = 4;
  CHECK_FALSE(check_stop(state, &state.live[0], iters).has_value());
}

TEST_CASE("engine terminates on a constant objective at the trial cap") {
  Objective obj([](std::span<const double>) { return 3.25; });
  RoundRobinMethod method;
  SolverResult res = run_divide_the_best(obj, BoxDomain::unit_cube(2), method,
                                         StoppingCriteria{10, {}, {}});
  CHECK(res.trials_used <= 10);
  CHECK(res.best_value == 3.25);
  CHECK(res.status == SolveStatus::MaxTrials);
  CHECK(res.trial_history.size() == res.trials_used);
}

TEST_CASE("engine requires a fresh objective") {
  Objective obj([](std::span<const double>) { return 0.0; });
  obj.evaluate(0.0);
  RoundRobinMethod method;
  CHECK_THROWS_AS(run_divide_the_best(obj, BoxDomain::unit_cube(2), method,
                                      StoppingCriteria{10, {}, {}}),
                  InputError);
}

TEST_CASE("round-robin trisection becomes everywhere dense") {
  Objective obj([](std::span<const double>) { return 0.0; });
  RoundRobinMethod method;
  SolverResult res =
      run_divide_the_best(obj, BoxDomain::unit_cube(2), method,
                          StoppingCriteria{20000, {}, 10000});
  CHECK(res.status == SolveStatus::MaxIterations);
  CHECK(res.hyperintervals_generated == 1 + 3 * 10000);
}

TEST_CASE("live cells keep tiling the domain") {
  // Drive the engine manually so the live set stays observable.
  Objective obj([](std::span<const double>) { return 0.0; });
  RoundRobinMethod method;
  PartitionState<StubCell> state(BoxDomain::unit_cube(2));
  state.objective = &obj;
  method.initialize(state, obj);

  for (int iter = 0; iter < 500; ++iter) {
    auto ids = method.select(state);
    REQUIRE(ids.size() == 1);
    auto placement = method.place_trials(state, ids[0], obj);
    auto sub = method.subdivide(state, ids[0], std::move(placement));

    // replicate the engine's commit through the public pieces
    const auto& parent = state.node(ids[0]);
    double volume = 0.0;
    for (const auto& c : sub.children) volume += c.region().volume();
    CHECK(std::abs(volume - parent.cell.region().volume()) <=
          1e-9 * parent.cell.region().volume());

    std::size_t pos = state.index.at(ids[0]);
    state.index.erase(ids[0]);
    if (pos != state.live.size() - 1) {
      state.live[pos] = std::move(state.live.back());
      state.index[state.live[pos].id] = pos;
    }
    state.live.pop_back();
    for (auto& child : sub.children) {
      PartitionState<StubCell>::Node n{state.cells_created, ids[0], 0,
                                       std::move(child)};
      state.cells_created += 1;
      state.index.emplace(n.id, state.live.size());
      state.live.push_back(std::move(n));
    }

    double total = 0.0;
    for (const auto& n : state.live) total += n.cell.region().volume();
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }

  // breadth-first trisection after 500 splits: no live cell wider than 1/9
  double max_diag = 0.0;
  for (const auto& n : state.live)
    max_diag = std::max(max_diag, n.cell.region().diameter());
  CHECK(max_diag < 0.2);
}

TEST_CASE("max diameter shrinks under dense selection") {
  Objective obj([](std::span<const double>) { return 0.0; });
  RoundRobinMethod method;
  PartitionState<StubCell> state(BoxDomain::unit_cube(2));
  state.objective = &obj;
  method.initialize(state, obj);
  for (int iter = 0; iter < 10000; ++iter) {
    auto ids = method.select(state);
    auto sub = method.subdivide(state, ids[0], RoundRobinMethod::Placement{});
    std::size_t pos = state.index.at(ids[0]);
    state.index.erase(ids[0]);
    if (pos != state.live.size() - 1) {
      state.live[pos] = std::move(state.live.back());
      state.index[state.live[pos].id] = pos;
    }
    state.live.pop_back();
    for (auto& child : sub.children) {
      PartitionState<StubCell>::Node n{state.cells_created, ids[0], 0,
                                       std::move(child)};
      state.cells_created += 1;
      state.index.emplace(n.id, state.live.size());
      state.live.push_back(std::move(n));
    }
  }
  double max_diag = 0.0;
  for (const auto& n : state.live)
    max_diag = std::max(max_diag, n.cell.region().diameter());
  CHECK(max_diag < 0.05);
}

TEST_CASE("structural defects in subdivisions are rejected") {
  {
    Objective obj([](std::span<const double>) { return 0.0; });
    EscapingMethod method;
    CHECK_THROWS_AS(run_divide_the_best(obj, BoxDomain::unit_cube(1), method,
                                        StoppingCriteria{100, {}, {}}),
                    StructuralError);
  }
  {
    Objective obj([](std::span<const double>) { return 0.0; });
    LeakyMethod method;
    CHECK_THROWS_AS(run_divide_the_best(obj, BoxDomain::unit_cube(1), method,
                                        StoppingCriteria{100, {}, {}}),
                    StructuralError);
  }
}

TEST_CASE("Piyavskij hooks drive the engine to a known apex") {
  const oracles::ConeFunction1D f = oracles::make_cone_function(17);
  Objective obj([&](std::span<const double> x) { return f(x[0]); });
  SolverResult res =
      solve_piyavskij(obj, BoxDomain::unit_cube(1),
                      LipschitzSpec::a_priori(f.lipschitz * 1.5),
                      StoppingCriteria{100, {}, {}});
  CHECK(res.best_value <= f.f_star + 1e-3);
  CHECK(std::abs(res.best_point[0] - f.x_star) <= 1e-3);
  CHECK(res.trials_used <= 100);
  CHECK(res.trial_history.size() == res.trials_used);
}

TEST_CASE("selection of minimal R subdivides that cell") {
  // three stub cells with R = {3, 1, 2}: the R=1 cell must be selected
  auto state = make_state({3.0, 1.0, 2.0});
  auto ids = select_best_cells(state, 1);
  REQUIRE(ids.size() == 1);
  CHECK(state.node(ids[0]).cell.characteristic() == 1.0);
}
