#pragma once

// Test-only helpers: independent oracles (exhaustive enumeration, delay-probe
// slack, finite differences) and small builders. These deliberately avoid the
// library code paths they are used to check.

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "graphrho/gnn.hpp"
#include "graphrho/rho.hpp"
#include "graphrho/rng.hpp"
#include "graphrho/subsolver.hpp"
#include "graphrho/trainer.hpp"

namespace graphrho::testing {

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

// Single-machine single-job chain with the given processing times.
inline Instance chain_instance(const std::vector<Time>& ptimes) {
  Instance inst;
  inst.num_machines = 1;
  inst.jobs.resize(1);
  for (size_t k = 0; k < ptimes.size(); ++k)
    inst.jobs[0].ops.push_back({0, static_cast<int>(k), {{0, ptimes[k]}}});
  inst.finalize();
  return inst;
}

inline Subproblem whole_instance_window(const Instance& inst) {
  Subproblem sub;
  sub.inst = &inst;
  for (OpId o = 0; o < inst.total_ops(); ++o) sub.ops.push_back(o);
  sub.job_ready.assign(static_cast<size_t>(inst.num_jobs()), 0);
  sub.machine_ready.assign(static_cast<size_t>(inst.num_machines), 0);
  return sub;
}

// ---------------------------------------------------------------------------
// exhaustive optimum: all machine assignments x all machine orderings
// ---------------------------------------------------------------------------

namespace detail {

// Longest-path start times for fixed machine sequences; returns -1 on cycle.
inline Time eval_orders(const Subproblem& sub, const std::vector<MachineId>& machine_of,
                        const std::vector<std::vector<int>>& machine_seq) {
  const Instance& inst = *sub.inst;
  const int n = sub.size();
  std::vector<std::vector<int>> succ(static_cast<size_t>(n));
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  auto add_arc = [&](int u, int v) {
    succ[static_cast<size_t>(u)].push_back(v);
    ++indeg[static_cast<size_t>(v)];
  };
  // job arcs between in-window neighbors
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && inst.op_job(sub.ops[static_cast<size_t>(i)]) == inst.op_job(sub.ops[static_cast<size_t>(j)]) &&
          inst.op_pos(sub.ops[static_cast<size_t>(i)]) + 1 == inst.op_pos(sub.ops[static_cast<size_t>(j)]))
        add_arc(i, j);
  for (const auto& seq : machine_seq)
    for (size_t q = 0; q + 1 < seq.size(); ++q) add_arc(seq[q], seq[q + 1]);

  std::vector<Time> p(static_cast<size_t>(n)), release(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    p[static_cast<size_t>(i)] = inst.op(o).find_option(machine_of[static_cast<size_t>(i)])->ptime;
    Time r = 0;
    JobId j = inst.op_job(o);
    if (j < static_cast<JobId>(sub.job_ready.size())) r = std::max(r, sub.job_ready[static_cast<size_t>(j)]);
    MachineId m = machine_of[static_cast<size_t>(i)];
    if (m < static_cast<MachineId>(sub.machine_ready.size()))
      r = std::max(r, sub.machine_ready[static_cast<size_t>(m)]);
    release[static_cast<size_t>(i)] = r;
  }

  std::vector<int> frontier;
  std::vector<Time> start(release);
  for (int i = 0; i < n; ++i)
    if (indeg[static_cast<size_t>(i)] == 0) frontier.push_back(i);
  int seen = 0;
  Time makespan = 0;
  while (!frontier.empty()) {
    int u = frontier.back();
    frontier.pop_back();
    ++seen;
    Time end = start[static_cast<size_t>(u)] + p[static_cast<size_t>(u)];
    makespan = std::max(makespan, end);
    for (int v : succ[static_cast<size_t>(u)]) {
      start[static_cast<size_t>(v)] = std::max(start[static_cast<size_t>(v)], end);
      if (--indeg[static_cast<size_t>(v)] == 0) frontier.push_back(v);
    }
  }
  return seen == n ? makespan : -1;
}

inline void enumerate_machine_orders(const Subproblem& sub, const std::vector<MachineId>& machine_of,
                                     std::vector<std::vector<int>>& per_machine, size_t mi,
                                     std::vector<std::vector<int>>& seq, Time& best) {
  if (mi == per_machine.size()) {
    Time mk = eval_orders(sub, machine_of, seq);
    if (mk >= 0) best = std::min(best, mk);
    return;
  }
  std::vector<int>& ops = per_machine[mi];
  std::sort(ops.begin(), ops.end());
  do {
    seq[mi] = ops;
    enumerate_machine_orders(sub, machine_of, per_machine, mi + 1, seq, best);
  } while (std::next_permutation(ops.begin(), ops.end()));
}

}  // namespace detail

// Brute-force optimum over every machine assignment and every per-machine
// ordering. Honors sub.fixed and the ready times.
inline Time enumerate_optimal(const Subproblem& sub) {
  const Instance& inst = *sub.inst;
  const int n = sub.size();
  std::vector<MachineId> machine_of(static_cast<size_t>(n));
  Time best = std::numeric_limits<Time>::max();
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      std::vector<std::vector<int>> per_machine(static_cast<size_t>(inst.num_machines));
      for (int q = 0; q < n; ++q)
        per_machine[static_cast<size_t>(machine_of[static_cast<size_t>(q)])].push_back(q);
      std::vector<std::vector<int>> seq(per_machine.size());
      detail::enumerate_machine_orders(sub, machine_of, per_machine, 0, seq, best);
      return;
    }
    OpId o = sub.ops[static_cast<size_t>(i)];
    auto it = sub.fixed.find(o);
    for (const MachineOption& opt : inst.op(o).options) {
      if (it != sub.fixed.end() && opt.machine != it->second) continue;
      machine_of[static_cast<size_t>(i)] = opt.machine;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

// ---------------------------------------------------------------------------
// delay-probe slack oracle
// ---------------------------------------------------------------------------

struct DelayProbe {
  std::vector<Time> earliest_start;
  std::vector<Time> slack;
  Time makespan = 0;
};

// Re-derives earliest starts with its own DP over the schedule's fixed job and
// machine orders, then probes each op with increasing forced delays until the
// makespan grows.
inline DelayProbe delay_probe(const Instance& inst, const Schedule& sched) {
  const int n = inst.total_ops();
  std::vector<std::vector<int>> succ(static_cast<size_t>(n));
  std::vector<int> indeg0(static_cast<size_t>(n), 0);
  auto add_arc = [&](int u, int v) {
    succ[static_cast<size_t>(u)].push_back(v);
    ++indeg0[static_cast<size_t>(v)];
  };
  for (JobId j = 0; j < inst.num_jobs(); ++j)
    for (int k = 0; k + 1 < inst.job_size(j); ++k) add_arc(inst.op_id(j, k), inst.op_id(j, k + 1));
  std::vector<std::vector<OpId>> on_machine(static_cast<size_t>(inst.num_machines));
  for (OpId o = 0; o < n; ++o)
    on_machine[static_cast<size_t>(sched.ops[static_cast<size_t>(o)].machine)].push_back(o);
  for (auto& ops : on_machine) {
    std::sort(ops.begin(), ops.end(), [&](OpId a, OpId b) {
      return sched.ops[static_cast<size_t>(a)].start < sched.ops[static_cast<size_t>(b)].start;
    });
    for (size_t q = 0; q + 1 < ops.size(); ++q) add_arc(ops[q], ops[q + 1]);
  }
  std::vector<Time> p(static_cast<size_t>(n));
  for (OpId o = 0; o < n; ++o)
    p[static_cast<size_t>(o)] = inst.op(o).find_option(sched.ops[static_cast<size_t>(o)].machine)->ptime;

  auto earliest = [&](OpId delayed, Time floor_start, std::vector<Time>* starts_out) {
    std::vector<int> indeg = indeg0;
    std::vector<Time> start(static_cast<size_t>(n), 0);
    if (delayed >= 0) start[static_cast<size_t>(delayed)] = floor_start;
    std::vector<int> frontier;
    for (int i = 0; i < n; ++i)
      if (indeg[static_cast<size_t>(i)] == 0) frontier.push_back(i);
    Time mk = 0;
    while (!frontier.empty()) {
      int u = frontier.back();
      frontier.pop_back();
      Time end = start[static_cast<size_t>(u)] + p[static_cast<size_t>(u)];
      mk = std::max(mk, end);
      for (int v : succ[static_cast<size_t>(u)]) {
        start[static_cast<size_t>(v)] = std::max(start[static_cast<size_t>(v)], end);
        if (--indeg[static_cast<size_t>(v)] == 0) frontier.push_back(v);
      }
    }
    if (starts_out) *starts_out = start;
    return mk;
  };

  DelayProbe out;
  out.makespan = earliest(-1, 0, &out.earliest_start);
  out.slack.resize(static_cast<size_t>(n), 0);
  for (OpId o = 0; o < n; ++o) {
    Time delta = 0;
    while (delta <= out.makespan + 1) {
      Time mk = earliest(o, out.earliest_start[static_cast<size_t>(o)] + delta + 1, nullptr);
      if (mk > out.makespan) break;
      ++delta;
    }
    out.slack[static_cast<size_t>(o)] = delta;
  }
  return out;
}

// ---------------------------------------------------------------------------
// graph permutation (relabeling at the encoded-graph level)
// ---------------------------------------------------------------------------

// op_perm[i] = new row of old op row i; ma_perm likewise.
inline HeteroGraph permute_graph(const HeteroGraph& g, const std::vector<int>& op_perm,
                                 const std::vector<int>& ma_perm) {
  HeteroGraph out;
  out.schema = g.schema;
  out.op_x = Matrix(g.op_x.rows, g.op_x.cols);
  out.ma_x = Matrix(g.ma_x.rows, g.ma_x.cols);
  out.window_ops.resize(g.window_ops.size());
  out.op_machine_row.resize(g.op_machine_row.size());
  for (int i = 0; i < g.op_x.rows; ++i) {
    int ni = op_perm[static_cast<size_t>(i)];
    std::copy(g.op_x.row(i), g.op_x.row(i) + g.op_x.cols, out.op_x.row(ni));
    out.window_ops[static_cast<size_t>(ni)] = g.window_ops[static_cast<size_t>(i)];
    out.op_machine_row[static_cast<size_t>(ni)] =
        ma_perm[static_cast<size_t>(g.op_machine_row[static_cast<size_t>(i)])];
  }
  for (int m = 0; m < g.ma_x.rows; ++m)
    std::copy(g.ma_x.row(m), g.ma_x.row(m) + g.ma_x.cols, out.ma_x.row(ma_perm[static_cast<size_t>(m)]));
  for (int r = 0; r < kNumRelations; ++r) {
    const EdgeSet& e = g.edges[static_cast<size_t>(r)];
    EdgeSet& oe = out.edges[static_cast<size_t>(r)];
    const bool to_machine = (r == kRelAssign || r == kRelAlternative);
    for (size_t q = 0; q < e.size(); ++q) {
      int s = op_perm[static_cast<size_t>(e.src[q])];
      int d = to_machine ? ma_perm[static_cast<size_t>(e.dst[q])]
                         : op_perm[static_cast<size_t>(e.dst[q])];
      oe.add(s, d, e.feat[q][0], e.feat[q][1]);
    }
  }
  for (int c : g.candidate_rows) out.candidate_rows.push_back(op_perm[static_cast<size_t>(c)]);
  return out;
}

// ---------------------------------------------------------------------------
// labeled-graph corpora for network tests
// ---------------------------------------------------------------------------

inline std::vector<LabeledGraph> sample_labeled_graphs(int instances, uint64_t seed0,
                                                       int machines = 3, int jobs = 3,
                                                       int ops_per_job = 4, int w = 6, int s = 2) {
  std::vector<Instance> insts;
  for (int i = 0; i < instances; ++i) {
    GenParams gp;
    gp.num_machines = machines;
    gp.num_jobs = jobs;
    gp.ops_per_job = ops_per_job;
    gp.flex_min = 1;
    gp.flex_max = machines;
    gp.p_min = 1;
    gp.p_max = 12;
    gp.seed = seed0 + static_cast<uint64_t>(i);
    insts.push_back(generate_instance(gp));
  }
  CollectConfig cc;
  cc.rho.window_w = w;
  cc.rho.step_s = s;
  cc.rho.subsolver.heuristic.budget = SolveBudget::moves(400);
  cc.rho.seed = seed0 ^ 0xC0DE;
  cc.parallel = false;
  return collect_dataset(insts, cc);
}

// ---------------------------------------------------------------------------
// finite differences
// ---------------------------------------------------------------------------

struct GradCheckResult {
  double max_rel_err = 0;
  std::string worst_tensor;
  size_t checked = 0;
};

// Central finite differences over every element (or an index stride per
// tensor when stride > 1) against the analytic gradient.
inline GradCheckResult grad_check(const LabeledGraph& lg, const ModelParams& params, double lambda,
                                  uint64_t dropout_seed, bool training, double step = 1e-4,
                                  int stride = 1) {
  auto loss_of = [&](const ModelParams& p) {
    ForwardResult fr = gnn_forward(lg.graph, p, training, dropout_seed, nullptr);
    LossResult lr = bce_loss(fr.y_fix, fr.y_crit, lg.y_fix, lg.y_crit, lambda);
    return lr.total;
  };
  ForwardTape tape;
  ForwardResult fr = gnn_forward(lg.graph, params, training, dropout_seed, &tape);
  LossResult lr = bce_loss(fr.y_fix, fr.y_crit, lg.y_fix, lg.y_crit, lambda);
  std::vector<double> grad = gnn_backward(lg.graph, params, tape, lr.d_yfix, lr.d_ycrit);

  GradCheckResult out;
  ModelParams work = params;
  for (const auto& t : params.layout.tensors()) {
    for (size_t i = 0; i < t.count(); i += static_cast<size_t>(stride)) {
      size_t idx = t.offset + i;
      double saved = work.data[idx];
      work.data[idx] = saved + step;
      double lp = loss_of(work);
      work.data[idx] = saved - step;
      double lm = loss_of(work);
      work.data[idx] = saved;
      double fd = (lp - lm) / (2 * step);
      double an = grad[idx];
      double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
      if (rel > out.max_rel_err) {
        out.max_rel_err = rel;
        out.worst_tensor = t.name;
      }
      ++out.checked;
    }
  }
  return out;
}

}  // namespace graphrho::testing
