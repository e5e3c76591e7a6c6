#pragma once

// Subcommand orchestration. Computation modules never touch files; all I/O
// lives here. Exit codes: 0 all asserted checks pass, 1 an asserted check
// failed, 2 configuration error, 3 I/O error.

#include "clks/config.hpp"

namespace clks {

int run(const RunConfig& cfg);

int run_verify_kernel(const RunConfig& cfg);
int run_verify_lemmas(const RunConfig& cfg);
int run_trace(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);

}  // namespace clks
