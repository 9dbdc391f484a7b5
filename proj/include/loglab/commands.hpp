#pragma once

#include "loglab/scenario.hpp"

namespace loglab {

// Command entry points. Each validates the scenario fields it needs,
// runs the computation and writes its outputs: JSON reports go to
// `report` or stdout, CSV data to `out` (simulate defaults its CSV to
// stdout since that is its only product). Errors are thrown; the CLI
// driver maps them to exit codes.
int run_simulate(const Scenario& sc);
int run_stability(const Scenario& sc);
int run_policy(const Scenario& sc);
int run_discrete(const Scenario& sc);

} // namespace loglab
