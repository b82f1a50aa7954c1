#pragma once

namespace graphrho {

// Applies the GRAPH_RHO_THREADS cap to the OpenMP runtime when the variable
// is set to a positive integer. Called once by entry points.
void apply_thread_env();

// Current OpenMP thread budget (1 when built without OpenMP).
int max_threads();

}  // namespace graphrho
