#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "lgo/objective.hpp"
#include "lgo/partition.hpp"
#include "lgo/result.hpp"

namespace lgo {

// Result of one subdivision step. `continuation`, when not npos, names the
// child that carries on the parent cell under the parent's id (DIRECT keeps
// the shrunken centre box alive this way); such a child is not counted as a
// newly generated hyperinterval.
template <typename Cell>
struct Subdivision {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<Cell> children;
  std::size_t continuation = npos;
};

// Hook bundle implemented by each concrete method:
//   initialize(state, obj)            create root cells, run initial trials
//   compute_characteristics(state)    refresh R_i (full or incremental)
//   select(state) -> ids              best cell(s); empty means exhausted
//   place_trials(state, id, obj)      evaluate new points for one cell
//   subdivide(state, id, placement)   replace the cell by its children
// An optional post_commit(state, parent_id, child_ids) hook runs after the
// engine has committed a subdivision, for incremental bookkeeping.
template <typename M>
concept DivideTheBestMethod =
    PartitionCell<typename M::Cell> &&
    requires(M m, PartitionState<typename M::Cell>& s, Objective& o,
             std::uint64_t id, typename M::Placement&& p) {
      m.initialize(s, o);
      m.compute_characteristics(s);
      { m.select(s) } -> std::same_as<std::vector<std::uint64_t>>;
      { m.place_trials(s, id, o) } -> std::same_as<typename M::Placement>;
      { m.subdivide(s, id, std::move(p)) } -> std::same_as<Subdivision<typename M::Cell>>;
    };

namespace detail {

template <typename M, typename Cell>
concept HasPostCommit = requires(M m, PartitionState<Cell>& s, std::uint64_t id,
                                 std::span<const std::uint64_t> ids) {
  m.post_commit(s, id, ids);
};

// Children must tile the parent: stay inside it and conserve its volume to
// 1e-9 relative. Anything else is a structural defect in the method.
template <typename Cell>
void validate_subdivision(const typename PartitionState<Cell>::Node& parent,
                          const std::vector<Cell>& children) {
  if (children.empty()) throw StructuralError("subdivision produced no children");
  const BoxDomain& pr = parent.cell.region();
  double child_volume = 0.0;
  for (const Cell& c : children) {
    const BoxDomain& r = c.region();
    if (r.dimension() != pr.dimension())
      throw StructuralError("child cell dimension mismatch");
    for (std::size_t j = 0; j < r.dimension(); ++j) {
      const double tol = 1e-12 * pr.width(j);
      if (r.lower(j) < pr.lower(j) - tol || r.upper(j) > pr.upper(j) + tol)
        throw StructuralError("child cell escapes its parent");
    }
    child_volume += r.volume();
  }
  const double pv = pr.volume();
  if (std::abs(child_volume - pv) > 1e-9 * pv)
    throw StructuralError("subdivision does not conserve volume");
}

}  // namespace detail

// The Divide-the-Best loop: characteristics, selection, trial placement,
// subdivision, stop check, repeated until a stopping rule fires. max_trials
// is tightened into the objective budget so the run can never place more
// trials than allowed; a budget hit inside placement terminates cleanly.
template <DivideTheBestMethod M>
SolverResult run_divide_the_best(Objective& objective, const BoxDomain& domain,
                                 M& method, const StoppingCriteria& stop) {
  using Cell = typename M::Cell;
  validate(stop);
  if (objective.evaluation_count() != 0)
    throw InputError("run requires a fresh objective");
  objective.tighten_budget(stop.max_trials);

  PartitionState<Cell> state(domain);
  state.objective = &objective;

  auto commit = [&state](std::uint64_t parent_id, Subdivision<Cell>&& sub,
                         std::vector<std::uint64_t>& child_ids) {
    auto it = state.index.find(parent_id);
    if (it == state.index.end())
      throw StructuralError("subdivided cell is not live");
    const std::size_t pos = it->second;
    auto parent = std::move(state.live[pos]);
    detail::validate_subdivision<Cell>(parent, sub.children);

    state.index.erase(it);
    if (pos != state.live.size() - 1) {
      state.live[pos] = std::move(state.live.back());
      state.index[state.live[pos].id] = pos;
    }
    state.live.pop_back();

    child_ids.clear();
    for (std::size_t i = 0; i < sub.children.size(); ++i) {
      typename PartitionState<Cell>::Node n{
          0, parent.id, parent.generation + 1, std::move(sub.children[i])};
      if (i == sub.continuation) {
        n.id = parent.id;
      } else {
        n.id = state.cells_created;
        state.cells_created += 1;
      }
      child_ids.push_back(n.id);
      state.index.emplace(n.id, state.live.size());
      state.live.push_back(std::move(n));
    }
  };

  SolveStatus status = SolveStatus::MaxTrials;
  bool done = false;
  auto finish = [&](SolveStatus s) {
    status = s;
    done = true;
  };
  auto budget_status = [&] {
    return objective.evaluation_count() >= stop.max_trials
               ? SolveStatus::MaxTrials
               : SolveStatus::BudgetExhausted;
  };

  try {
    method.initialize(state, objective);
  } catch (const BudgetExhausted&) {
    finish(budget_status());
  } catch (const StopRequested&) {
    finish(SolveStatus::StopRequested);
  }

  std::vector<std::uint64_t> child_ids;
  while (!done) {
    state.iteration += 1;
    method.compute_characteristics(state);
    auto selected = method.select(state);
    if (selected.empty()) {
      status = SolveStatus::Exhausted;
      break;
    }
    // Captured before subdivision: the best cell is gone afterwards.
    const double best_fraction =
        state.node(selected.front()).cell.region().volume() /
        state.domain.volume();

    try {
      for (std::uint64_t id : selected) {
        auto placement = method.place_trials(state, id, objective);
        auto sub = method.subdivide(state, id, std::move(placement));
        commit(id, std::move(sub), child_ids);
        if constexpr (detail::HasPostCommit<M, Cell>) {
          method.post_commit(state, id,
                             std::span<const std::uint64_t>(child_ids));
        }
      }
    } catch (const BudgetExhausted&) {
      finish(budget_status());
    } catch (const StopRequested&) {
      finish(SolveStatus::StopRequested);
    }

    if (!done) {
      auto reason = detail::stop_reason(objective.evaluation_count(),
                                        state.iteration, best_fraction, stop);
      if (reason) {
        status = *reason;
        done = true;
      }
    }
  }

  SolverResult result;
  result.trial_history = objective.history();
  result.trials_used = objective.evaluation_count();
  result.hyperintervals_generated = state.cells_created;
  result.status = status;
  if (const Trial* b = objective.best()) {
    result.best_point = b->point;
    result.best_value = b->value;
  } else {
    result.best_value = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace lgo
