#include "graphrho/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace graphrho {

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::missing_assignment: return "missing_assignment";
    case ViolationKind::invalid_option: return "invalid_option";
    case ViolationKind::precedence: return "precedence";
    case ViolationKind::machine_overlap: return "machine_overlap";
    case ViolationKind::makespan_mismatch: return "makespan_mismatch";
  }
  return "?";
}

std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& sched) {
  std::vector<Violation> out;
  const int n = inst.total_ops();
  auto describe = [&](OpId o) {
    return "op (" + std::to_string(inst.op_job(o)) + "," + std::to_string(inst.op_pos(o)) + ")";
  };

  if (static_cast<int>(sched.ops.size()) != n) {
    out.push_back({ViolationKind::missing_assignment, -1, -1,
                   "schedule covers " + std::to_string(sched.ops.size()) + " of " +
                       std::to_string(n) + " ops"});
    return out;
  }

  std::vector<char> usable(static_cast<size_t>(n), 1);
  for (OpId o = 0; o < n; ++o) {
    const Assignment& a = sched.ops[static_cast<size_t>(o)];
    if (!a.assigned() || a.start < 0) {
      out.push_back({ViolationKind::missing_assignment, o, -1, describe(o) + " unassigned"});
      usable[static_cast<size_t>(o)] = 0;
      continue;
    }
    if (!inst.op(o).find_option(a.machine)) {
      out.push_back({ViolationKind::invalid_option, o, -1,
                     describe(o) + " assigned incompatible machine " + std::to_string(a.machine)});
      usable[static_cast<size_t>(o)] = 0;
    }
  }

  // job precedence
  for (JobId j = 0; j < inst.num_jobs(); ++j) {
    for (int k = 0; k + 1 < inst.job_size(j); ++k) {
      OpId a = inst.op_id(j, k), b = inst.op_id(j, k + 1);
      if (!usable[static_cast<size_t>(a)] || !usable[static_cast<size_t>(b)]) continue;
      Time end_a = sched.ops[static_cast<size_t>(a)].start +
                   inst.op(a).find_option(sched.ops[static_cast<size_t>(a)].machine)->ptime;
      if (sched.ops[static_cast<size_t>(b)].start < end_a)
        out.push_back({ViolationKind::precedence, a, b,
                       describe(b) + " starts before " + describe(a) + " ends"});
    }
  }

  // machine capacity: sort per machine by start, adjacent pairs must not overlap
  std::vector<std::vector<OpId>> on_machine(static_cast<size_t>(inst.num_machines));
  for (OpId o = 0; o < n; ++o)
    if (usable[static_cast<size_t>(o)])
      on_machine[static_cast<size_t>(sched.ops[static_cast<size_t>(o)].machine)].push_back(o);
  Time max_end = 0;
  for (auto& ops : on_machine) {
    std::sort(ops.begin(), ops.end(), [&](OpId a, OpId b) {
      return sched.ops[static_cast<size_t>(a)].start < sched.ops[static_cast<size_t>(b)].start;
    });
    Time prev_end = 0;
    OpId prev = -1;
    for (OpId o : ops) {
      const Assignment& a = sched.ops[static_cast<size_t>(o)];
      Time end = a.start + inst.op(o).find_option(a.machine)->ptime;
      if (prev >= 0 && a.start < prev_end)
        out.push_back({ViolationKind::machine_overlap, prev, o,
                       describe(prev) + " and " + describe(o) + " overlap on machine " +
                           std::to_string(a.machine)});
      prev = o;
      prev_end = std::max(prev_end, end);
      max_end = std::max(max_end, end);
    }
  }

  if (out.empty() && sched.makespan != max_end)
    out.push_back({ViolationKind::makespan_mismatch, -1, -1,
                   "recorded makespan " + std::to_string(sched.makespan) + " != computed " +
                       std::to_string(max_end)});
  return out;
}

Time makespan(const Instance& inst, const Schedule& sched) {
  if (static_cast<int>(sched.ops.size()) != inst.total_ops())
    throw std::invalid_argument("makespan: schedule incomplete");
  Time m = 0;
  for (OpId o = 0; o < inst.total_ops(); ++o) {
    const Assignment& a = sched.ops[static_cast<size_t>(o)];
    if (!a.assigned()) throw std::invalid_argument("makespan: schedule incomplete");
    m = std::max(m, a.start + inst.op(o).find_option(a.machine)->ptime);
  }
  return m;
}

std::string serialize_schedule(const Instance& inst, const Schedule& sched) {
  std::ostringstream out;
  out << "# makespan " << sched.makespan << '\n';
  for (OpId o = 0; o < inst.total_ops(); ++o) {
    const Assignment& a = sched.ops[static_cast<size_t>(o)];
    Time end = a.start + inst.op(o).find_option(a.machine)->ptime;
    out << inst.op_job(o) << ' ' << inst.op_pos(o) << ' ' << a.machine << ' ' << a.start << ' '
        << end << '\n';
  }
  return out.str();
}

void save_schedule_file(const Instance& inst, const Schedule& sched, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule file: " + path);
  out << serialize_schedule(inst, sched);
}

}  // namespace graphrho
