#include "graphrho/cpm.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace graphrho {

namespace {

void add_arc(DisjunctiveGraph& g, int u, int v) {
  g.succ[static_cast<size_t>(u)].push_back(v);
  g.pred[static_cast<size_t>(v)].push_back(u);
}

void topo_sort(DisjunctiveGraph& g) {
  const int n = g.size();
  std::vector<int32_t> indeg(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v) indeg[static_cast<size_t>(v)] = static_cast<int32_t>(g.pred[static_cast<size_t>(v)].size());
  g.topo.clear();
  g.topo.reserve(static_cast<size_t>(n));
  std::vector<int32_t> frontier;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) frontier.push_back(v);
  while (!frontier.empty()) {
    int v = frontier.back();
    frontier.pop_back();
    g.topo.push_back(v);
    for (int s : g.succ[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(s)] == 0) frontier.push_back(s);
  }
  if (static_cast<int>(g.topo.size()) != n)
    throw std::logic_error("disjunctive graph is cyclic; schedule orders are inconsistent");
}

// Shared construction once per-node (machine, start, ptime, release) is known.
DisjunctiveGraph build_graph(const Instance& inst, std::span<const OpId> ops,
                             std::span<const Assignment> assign, std::span<const Time> release) {
  DisjunctiveGraph g;
  const int n = static_cast<int>(ops.size());
  g.ops.assign(ops.begin(), ops.end());
  g.ptime.resize(static_cast<size_t>(n));
  g.release.assign(release.begin(), release.end());
  g.succ.resize(static_cast<size_t>(n));
  g.pred.resize(static_cast<size_t>(n));

  std::unordered_map<OpId, int> node_of;
  node_of.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) node_of[ops[static_cast<size_t>(i)]] = i;

  for (int i = 0; i < n; ++i) {
    const Assignment& a = assign[static_cast<size_t>(i)];
    const MachineOption* mo = inst.op(ops[static_cast<size_t>(i)]).find_option(a.machine);
    if (!mo) throw std::logic_error("disjunctive graph: assignment uses incompatible machine");
    g.ptime[static_cast<size_t>(i)] = mo->ptime;
  }

  // conjunctive arcs: consecutive ops of a job, both present
  for (int i = 0; i < n; ++i) {
    OpId o = ops[static_cast<size_t>(i)];
    JobId j = inst.op_job(o);
    int k = inst.op_pos(o);
    if (k + 1 < inst.job_size(j)) {
      auto it = node_of.find(inst.op_id(j, k + 1));
      if (it != node_of.end()) add_arc(g, i, it->second);
    }
  }

  // disjunctive arcs: consecutive ops on each machine, in start order
  std::vector<std::vector<int>> per_machine(static_cast<size_t>(inst.num_machines));
  for (int i = 0; i < n; ++i)
    per_machine[static_cast<size_t>(assign[static_cast<size_t>(i)].machine)].push_back(i);
  for (auto& seq : per_machine) {
    std::sort(seq.begin(), seq.end(), [&](int a, int b) {
      if (assign[static_cast<size_t>(a)].start != assign[static_cast<size_t>(b)].start)
        return assign[static_cast<size_t>(a)].start < assign[static_cast<size_t>(b)].start;
      return g.ops[static_cast<size_t>(a)] < g.ops[static_cast<size_t>(b)];
    });
    for (size_t q = 0; q + 1 < seq.size(); ++q) add_arc(g, seq[q], seq[q + 1]);
  }

  topo_sort(g);
  return g;
}

}  // namespace

DisjunctiveGraph build_disjunctive_graph(const Instance& inst, const Schedule& sched) {
  const int n = inst.total_ops();
  if (static_cast<int>(sched.ops.size()) != n || !sched.complete())
    throw std::invalid_argument("build_disjunctive_graph: schedule incomplete");
  std::vector<OpId> ops(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ops[static_cast<size_t>(i)] = i;
  std::vector<Time> release(static_cast<size_t>(n), 0);
  return build_graph(inst, ops, sched.ops, release);
}

DisjunctiveGraph build_fragment_graph(const Instance& inst, std::span<const OpId> ops,
                                      std::span<const Assignment> assign,
                                      std::span<const Time> job_ready,
                                      std::span<const Time> machine_ready) {
  std::vector<Time> release(ops.size(), 0);
  for (size_t i = 0; i < ops.size(); ++i) {
    Time r = 0;
    JobId j = inst.op_job(ops[i]);
    if (j < static_cast<JobId>(job_ready.size())) r = std::max(r, job_ready[static_cast<size_t>(j)]);
    MachineId m = assign[i].machine;
    if (m >= 0 && m < static_cast<MachineId>(machine_ready.size()))
      r = std::max(r, machine_ready[static_cast<size_t>(m)]);
    release[i] = r;
  }
  return build_graph(inst, ops, assign, release);
}

SlackReport compute_slack(const DisjunctiveGraph& g) {
  const int n = g.size();
  SlackReport rep;
  rep.per_node.resize(static_cast<size_t>(n));

  for (int idx : g.topo) {
    Time es = g.release[static_cast<size_t>(idx)];
    for (int p : g.pred[static_cast<size_t>(idx)])
      es = std::max(es, rep.per_node[static_cast<size_t>(p)].earliest_start +
                            g.ptime[static_cast<size_t>(p)]);
    rep.per_node[static_cast<size_t>(idx)].earliest_start = es;
  }
  for (int i = 0; i < n; ++i)
    rep.makespan = std::max(rep.makespan, rep.per_node[static_cast<size_t>(i)].earliest_start +
                                              g.ptime[static_cast<size_t>(i)]);

  for (auto it = g.topo.rbegin(); it != g.topo.rend(); ++it) {
    int idx = *it;
    Time latest_completion = rep.makespan;
    for (int s : g.succ[static_cast<size_t>(idx)])
      latest_completion = std::min(latest_completion, rep.per_node[static_cast<size_t>(s)].latest_start);
    SlackEntry& e = rep.per_node[static_cast<size_t>(idx)];
    e.latest_start = latest_completion - g.ptime[static_cast<size_t>(idx)];
    e.slack = e.latest_start - e.earliest_start;
    e.critical = (e.slack == 0);
  }
  return rep;
}

std::vector<uint8_t> criticality_labels(const Instance& inst, const Schedule& sched) {
  DisjunctiveGraph g = build_disjunctive_graph(inst, sched);
  SlackReport rep = compute_slack(g);
  std::vector<uint8_t> out(static_cast<size_t>(inst.total_ops()), 0);
  for (int i = 0; i < g.size(); ++i)
    out[static_cast<size_t>(g.ops[static_cast<size_t>(i)])] = rep.per_node[static_cast<size_t>(i)].critical ? 1 : 0;
  return out;
}

}  // namespace graphrho
