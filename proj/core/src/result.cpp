#include "lgo/result.hpp"

namespace lgo {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::MaxTrials: return "max_trials";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::MinCellVolume: return "min_cell_volume";
    case SolveStatus::StopRequested: return "stop_requested";
    case SolveStatus::Exhausted: return "exhausted";
  }
  return "unknown";
}

}  // namespace lgo
