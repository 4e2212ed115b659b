#pragma once

// Experiment drivers behind the CLI. Each returns a ResultTable whose column
// order is fixed per mode; see the README for the column lists.
//
// Grid rows are independent and computed on a small thread pool; rows are
// always emitted in grid order. Solver failures become a status cell, they do
// not abort the run.

#include <string_view>

#include "htgame/fictitious_play.hpp"
#include "htgame/result_table.hpp"
#include "htgame/scenario.hpp"

namespace htgame {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// FP settings of the scenario with `model` swapped in.
FPConfig scenario_fp_config(const ScenarioFile& scenario, const BehaviorModel& model);

ResultTable run_solve(const ScenarioFile& scenario);
ResultTable run_sweep_fine(const ScenarioFile& scenario);
ResultTable run_sweep_alpha(const ScenarioFile& scenario);
ResultTable run_scenario_pair(const ScenarioFile& scenario);
ResultTable run_trace(const ScenarioFile& scenario);
ResultTable run_threshold(const ScenarioFile& scenario);

ResultTable run_experiment(const ScenarioFile& scenario, ExperimentMode mode);

}  // namespace htgame
