#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lgo/domain.hpp"
#include "lgo/errors.hpp"
#include "lgo/objective.hpp"
#include "lgo/result.hpp"

namespace lgo {

// Stopping rules for a Divide-the-Best run. max_trials is mandatory and is
// also pushed into the objective budget, so the limit fires inside trial
// placement rather than a whole iteration late. The volume fraction applies
// to the best cell selected in the current iteration, relative to the domain.
struct StoppingCriteria {
  std::uint64_t max_trials = 0;
  std::optional<double> min_cell_volume_fraction;
  std::optional<std::uint64_t> max_iterations;
};

inline void validate(const StoppingCriteria& stop) {
  if (stop.max_trials == 0)
    throw InputError("stopping criteria require max_trials >= 1");
  if (stop.min_cell_volume_fraction &&
      !(*stop.min_cell_volume_fraction > 0.0 &&
        *stop.min_cell_volume_fraction <= 1.0))
    throw InputError("min_cell_volume_fraction must lie in (0, 1]");
  if (stop.max_iterations && *stop.max_iterations == 0)
    throw InputError("max_iterations must be >= 1");
}

template <typename C>
concept PartitionCell = requires(const C c) {
  { c.region() } -> std::convertible_to<const BoxDomain&>;
  { c.characteristic() } -> std::convertible_to<double>;
};

// Live partition of the search domain plus shared bookkeeping.
//
// Cells are addressed by creation id: ids are assigned sequentially starting
// at 0 and never reused, so cells_created equals the number of hyperintervals
// ever generated. The `live` vector order is not meaningful; use `index` (or
// node()) to find a cell by id.
template <PartitionCell C>
struct PartitionState {
  using Cell = C;

  struct Node {
    std::uint64_t id = 0;
    std::uint64_t parent = 0;  // root nodes point at themselves
    std::uint32_t generation = 0;
    Cell cell;
  };

  BoxDomain domain;
  std::vector<Node> live;
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::uint64_t iteration = 0;
  std::uint64_t cells_created = 0;
  const Objective* objective = nullptr;  // read-only view of the trial history

  explicit PartitionState(BoxDomain d) : domain(std::move(d)) {}

  std::uint64_t add_root(Cell cell) {
    Node n{cells_created, cells_created, 0, std::move(cell)};
    cells_created += 1;
    index.emplace(n.id, live.size());
    live.push_back(std::move(n));
    return live.back().id;
  }

  const Node& node(std::uint64_t id) const {
    auto it = index.find(id);
    if (it == index.end()) throw StructuralError("unknown cell id");
    return live[it->second];
  }

  Node& node(std::uint64_t id) {
    auto it = index.find(id);
    if (it == index.end()) throw StructuralError("unknown cell id");
    return live[it->second];
  }
};

// Generic Step-3 selection: ids of the `multiplicity` live cells with the
// best characteristic (smallest by default). Ties break toward the lower id.
// Asking for more cells than are live returns all of them.
template <PartitionCell C>
std::vector<std::uint64_t> select_best_cells(const PartitionState<C>& state,
                                             std::size_t multiplicity,
                                             bool maximize = false) {
  if (multiplicity < 1) throw InputError("multiplicity must be >= 1");
  std::vector<std::pair<double, std::uint64_t>> keyed;
  keyed.reserve(state.live.size());
  for (const auto& n : state.live) {
    double r = n.cell.characteristic();
    keyed.emplace_back(maximize ? -r : r, n.id);
  }
  std::size_t take = std::min(multiplicity, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + take, keyed.end());
  std::vector<std::uint64_t> ids;
  ids.reserve(take);
  for (std::size_t i = 0; i < take; ++i) ids.push_back(keyed[i].second);
  return ids;
}

namespace detail {

inline std::optional<SolveStatus> stop_reason(std::uint64_t trials,
                                              std::uint64_t iteration,
                                              std::optional<double> best_fraction,
                                              const StoppingCriteria& stop) {
  if (trials >= stop.max_trials) return SolveStatus::MaxTrials;
  if (stop.min_cell_volume_fraction && best_fraction &&
      *best_fraction <= *stop.min_cell_volume_fraction)
    return SolveStatus::MinCellVolume;
  if (stop.max_iterations && iteration >= *stop.max_iterations)
    return SolveStatus::MaxIterations;
  return std::nullopt;
}

}  // namespace detail

// Stop test used after each iteration: trial budget, volume of the best cell,
// iteration limit. `best_cell` may be null when no cell was selected.
template <PartitionCell C>
std::optional<SolveStatus> check_stop(
    const PartitionState<C>& state,
    const typename PartitionState<C>::Node* best_cell,
    const StoppingCriteria& stop) {
  validate(stop);
  std::optional<double> fraction;
  if (best_cell)
    fraction = best_cell->cell.region().volume() / state.domain.volume();
  std::uint64_t trials = state.objective ? state.objective->evaluation_count() : 0;
  return detail::stop_reason(trials, state.iteration, fraction, stop);
}

}  // namespace lgo
