#pragma once

#include <cstdint>
#include <vector>

#include "lgo/trial.hpp"

namespace lgo {

// Why a solve run stopped.
enum class SolveStatus {
  MaxTrials,        // the configured trial limit was reached
  BudgetExhausted,  // the objective's own budget ran out first
  MaxIterations,    // iteration limit reached
  MinCellVolume,    // best cell became smaller than the volume threshold
  StopRequested,    // an observer asked the run to stop
  Exhausted         // no subdividable cell was left
};

const char* to_string(SolveStatus status);

// Outcome of one solver run.
struct SolverResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::uint64_t trials_used = 0;
  // Count of hyperintervals ever created during the run, including the root.
  std::uint64_t hyperintervals_generated = 0;
  std::vector<Trial> trial_history;
  SolveStatus status = SolveStatus::MaxTrials;
};

}  // namespace lgo
