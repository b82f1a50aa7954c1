#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphrho/schedule.hpp"

namespace graphrho {

// DAG over a concrete schedule: conjunctive arcs follow job order, disjunctive
// arcs follow the schedule's machine order. Arc (u -> v) carries weight
// ptime[u]; the virtual source/sink are implicit (release[] holds the source
// arc weights, terminal nodes feed the sink).
struct DisjunctiveGraph {
  std::vector<OpId> ops;    // node index -> op id
  std::vector<Time> ptime;  // per node, on the assigned machine
  std::vector<Time> release;
  std::vector<std::vector<int32_t>> succ;
  std::vector<std::vector<int32_t>> pred;
  std::vector<int32_t> topo;

  int size() const { return static_cast<int>(ops.size()); }
};

struct SlackEntry {
  Time earliest_start = 0;
  Time latest_start = 0;
  Time slack = 0;
  bool critical = false;
};

struct SlackReport {
  std::vector<SlackEntry> per_node;  // aligned with DisjunctiveGraph::ops
  Time makespan = 0;                 // of the earliest-start schedule
};

// Requires a valid complete schedule (validate_schedule empty). Throws
// std::logic_error if the induced orders admit no topological order.
DisjunctiveGraph build_disjunctive_graph(const Instance& inst, const Schedule& sched);

// Fragment variant used by the rolling loop: nodes are `ops` only, machine
// orders come from `assign` (parallel to ops), and committed work outside the
// fragment enters through ready times.
DisjunctiveGraph build_fragment_graph(const Instance& inst, std::span<const OpId> ops,
                                      std::span<const Assignment> assign,
                                      std::span<const Time> job_ready,
                                      std::span<const Time> machine_ready);

// Forward pass = longest-path earliest starts; backward pass from the
// earliest-start makespan = latest starts. slack = LS - ES, critical <=> slack == 0.
SlackReport compute_slack(const DisjunctiveGraph& g);

// Per-op flat boolean list: 1 iff the op has zero total slack.
std::vector<uint8_t> criticality_labels(const Instance& inst, const Schedule& sched);

}  // namespace graphrho
