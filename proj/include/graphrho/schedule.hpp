#pragma once

#include <string>
#include <vector>

#include "graphrho/instance.hpp"
#include "graphrho/types.hpp"

namespace graphrho {

struct Assignment {
  MachineId machine = -1;
  Time start = -1;

  bool assigned() const { return machine >= 0; }
  bool operator==(const Assignment&) const = default;
};

// Per-op (machine, start) pairs indexed by flat OpId, plus the makespan.
struct Schedule {
  std::vector<Assignment> ops;
  Time makespan = 0;

  bool complete() const {
    for (const auto& a : ops)
      if (!a.assigned()) return false;
    return !ops.empty();
  }
};

enum class ViolationKind {
  missing_assignment,
  invalid_option,
  precedence,
  machine_overlap,
  makespan_mismatch,
};

struct Violation {
  ViolationKind kind;
  OpId op = -1;
  OpId other = -1;  // second op for overlap/precedence violations
  std::string detail;
};

const char* violation_kind_name(ViolationKind k);

// Returns every violation of the Schedule invariants; empty iff valid.
// Missing assignments are reported as violations, never thrown.
std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& sched);

// Max completion time over all ops. Requires a complete schedule.
Time makespan(const Instance& inst, const Schedule& sched);

// One line per op `job op machine start end`, preceded by `# makespan <v>`.
std::string serialize_schedule(const Instance& inst, const Schedule& sched);
void save_schedule_file(const Instance& inst, const Schedule& sched, const std::string& path);

}  // namespace graphrho
