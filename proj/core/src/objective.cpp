#include "lgo/objective.hpp"

#include <algorithm>
#include <utility>

#include "internal.hpp"
#include "lgo/errors.hpp"

namespace lgo {

Objective::Objective(Evaluator evaluator, std::optional<std::uint64_t> budget)
    : evaluator_(std::move(evaluator)), budget_(budget) {
  if (!evaluator_) throw InputError("objective requires an evaluator");
}

double Objective::evaluate(std::span<const double> x) {
  if (stop_requested_) throw StopRequested("stop requested by observer");
  if (budget_ && history_.size() >= *budget_)
    throw BudgetExhausted("trial budget exhausted");
  detail::require_finite(x, "trial point");

  Trial t;
  t.point.assign(x.begin(), x.end());
  t.value = evaluator_(x);
  detail::require_finite(t.value, "objective value");

  history_.push_back(std::move(t));
  if (history_.size() == 1 || history_.back().value < history_[best_index_].value)
    best_index_ = history_.size() - 1;
  if (observer_) observer_(history_.size(), history_.back());
  return history_.back().value;
}

double Objective::evaluate(double x) {
  return evaluate(std::span<const double>(&x, 1));
}

const Trial* Objective::best() const {
  if (history_.empty()) return nullptr;
  return &history_[best_index_];
}

void Objective::tighten_budget(std::uint64_t cap) {
  budget_ = budget_ ? std::min(*budget_, cap) : cap;
}

}  // namespace lgo
