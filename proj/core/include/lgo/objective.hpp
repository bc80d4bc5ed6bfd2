#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lgo/trial.hpp"

namespace lgo {

// Counted wrapper around the black-box function f.
//
// Every invocation of the evaluator is appended to the trial history, so
// evaluation_count() is exactly the number of calls since construction.
// With a budget set, evaluation number budget+1 throws BudgetExhausted
// before touching the evaluator. The optional observer runs after each
// recorded trial and may call request_stop(), which makes the *next*
// evaluation throw StopRequested; the benchmark harness uses this to stop
// a solver at first hit without changing solver logic.
class Objective {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  // Observer receives the 1-based evaluation index and the recorded trial.
  using Observer = std::function<void(std::uint64_t, const Trial&)>;

  explicit Objective(Evaluator evaluator,
                     std::optional<std::uint64_t> budget = std::nullopt);

  double evaluate(std::span<const double> x);
  double evaluate(double x);  // univariate convenience

  std::uint64_t evaluation_count() const { return history_.size(); }
  const std::vector<Trial>& history() const { return history_; }
  // Earliest trial attaining the minimum value, or nullptr before any trial.
  const Trial* best() const;

  std::optional<std::uint64_t> budget() const { return budget_; }
  // Lower the budget to at most `cap` evaluations. Solvers call this with
  // their max_trials so the budget check fires inside trial placement.
  void tighten_budget(std::uint64_t cap);

  void set_observer(Observer observer) { observer_ = std::move(observer); }
  void request_stop() { stop_requested_ = true; }
  bool stop_requested() const { return stop_requested_; }

 private:
  Evaluator evaluator_;
  std::optional<std::uint64_t> budget_;
  std::vector<Trial> history_;
  std::size_t best_index_ = 0;
  Observer observer_;
  bool stop_requested_ = false;
};

}  // namespace lgo
