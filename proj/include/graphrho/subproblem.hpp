#pragma once

#include <unordered_map>
#include <vector>

#include "graphrho/schedule.hpp"

namespace graphrho {

// One rolling-horizon window: a contiguous-per-job slice of operations plus
// the boundary state committed work imposes on it.
struct Subproblem {
  const Instance* inst = nullptr;
  std::vector<OpId> ops;             // window contents, in window order
  std::vector<Time> job_ready;       // per job id
  std::vector<Time> machine_ready;   // per machine id
  std::unordered_map<OpId, MachineId> fixed;      // frozen machine assignments
  std::unordered_map<OpId, Assignment> warm_start;  // optional incumbent fragment

  int size() const { return static_cast<int>(ops.size()); }

  // Checks the structural invariants: fixed keys inside ops with compatible
  // machines, non-negative ready times, within-job contiguity. Throws
  // std::invalid_argument on the first failure.
  void check() const;
};

}  // namespace graphrho
