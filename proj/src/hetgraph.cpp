#include "graphrho/hetgraph.hpp"

#include <algorithm>
#include <ostream>

#include "graphrho/subsolver.hpp"

namespace graphrho {

const char* relation_name(int r) {
  switch (r) {
    case kRelAssign: return "assign";
    case kRelAlternative: return "alternative";
    case kRelPrecedence: return "precedence";
    case kRelMachineOrder: return "machine_order";
  }
  return "?";
}

namespace {

double ratio(double num, double den) {
  if (den <= 0) return 0.0;
  double r = num / den;
  return std::clamp(r, 0.0, 1.0);
}

}  // namespace

HeteroGraph encode(const Subproblem& sub, const PrevContext& prev, int window_cap) {
  const Instance& inst = *sub.inst;
  const int n = sub.size();
  const int nm = inst.num_machines;

  HeteroGraph g;
  g.window_ops = sub.ops;
  g.op_x = Matrix(n, kOpFeatureDim);
  g.ma_x = Matrix(nm, kMaFeatureDim);
  g.op_machine_row.assign(static_cast<size_t>(n), -1);

  std::unordered_map<OpId, int> row_of;
  row_of.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) row_of[sub.ops[static_cast<size_t>(i)]] = i;

  // tentative assignment: previous machine for overlap ops, greedy otherwise
  std::unordered_map<OpId, MachineId> pinned;
  std::vector<char> is_overlap(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    auto it = prev.assign.find(o);
    if (it != prev.assign.end()) {
      if (!inst.op(o).find_option(it->second.machine))
        throw std::invalid_argument("encode: previous assignment incompatible with op");
      is_overlap[static_cast<size_t>(i)] = 1;
      pinned[o] = it->second.machine;
    }
  }
  GreedyResult tentative = greedy_dispatch(sub, &pinned);
  const std::vector<Assignment>& tent = tentative.decoded.assignment;
  const Time c_loc = std::max<Time>(tentative.decoded.makespan, 1);
  const Time c_prev = std::max<Time>(prev.prev_makespan, 1);

  Time pmax_win = 1;
  for (int i = 0; i < n; ++i)
    pmax_win = std::max(pmax_win, inst.op(sub.ops[static_cast<size_t>(i)]).max_ptime());

  // ---- operation node features -------------------------------------------
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    const Operation& op = inst.op(o);
    const Assignment& a = tent[static_cast<size_t>(i)];
    const MachineOption* mo = op.find_option(a.machine);
    Time p_assigned = mo->ptime;
    Time p_min = op.min_ptime(), p_max = op.max_ptime();
    double p_mean = 0;
    for (const auto& opt : op.options) p_mean += static_cast<double>(opt.ptime);
    p_mean /= static_cast<double>(op.options.size());
    JobId j = inst.op_job(o);
    int k = inst.op_pos(o);
    int n_i = inst.job_size(j);
    const SlackEntry* se = nullptr;
    if (auto it = prev.slack.find(o); it != prev.slack.end()) se = &it->second;

    double* x = g.op_x.row(i);
    x[0] = ratio(static_cast<double>(p_assigned), static_cast<double>(pmax_win));
    x[1] = ratio(static_cast<double>(p_min), static_cast<double>(pmax_win));
    x[2] = ratio(static_cast<double>(p_max), static_cast<double>(pmax_win));
    x[3] = ratio(p_mean, static_cast<double>(pmax_win));
    x[4] = ratio(static_cast<double>(op.options.size()), static_cast<double>(nm));
    x[5] = ratio(static_cast<double>(j), static_cast<double>(inst.num_jobs()));
    x[6] = ratio(static_cast<double>(k), static_cast<double>(n_i));
    x[7] = ratio(static_cast<double>(n_i - k), static_cast<double>(n_i));
    x[8] = ratio(static_cast<double>(a.start), static_cast<double>(c_loc));
    x[9] = ratio(static_cast<double>(a.start + p_assigned), static_cast<double>(c_loc));
    x[10] = is_overlap[static_cast<size_t>(i)] ? 1.0 : 0.0;
    x[11] = prev.fixed_last_iter.count(o) ? 1.0 : 0.0;
    x[12] = se ? ratio(static_cast<double>(se->slack), static_cast<double>(c_prev)) : 0.0;
    x[13] = (se && se->critical) ? 1.0 : 0.0;
    x[14] = ratio(static_cast<double>(i), static_cast<double>(window_cap));
    g.op_machine_row[static_cast<size_t>(i)] = a.machine;
    if (is_overlap[static_cast<size_t>(i)]) g.candidate_rows.push_back(i);
  }

  // ---- machine node features ----------------------------------------------
  std::vector<int> assigned_count(static_cast<size_t>(nm), 0);
  std::vector<int> assigned_overlap(static_cast<size_t>(nm), 0);
  std::vector<Time> assigned_p(static_cast<size_t>(nm), 0);
  std::vector<Time> completion_sum(static_cast<size_t>(nm), 0);
  std::vector<Time> completion_max(static_cast<size_t>(nm), 0);
  std::vector<int> candidate_count(static_cast<size_t>(nm), 0);
  std::vector<Time> candidate_p(static_cast<size_t>(nm), 0);
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    const Assignment& a = tent[static_cast<size_t>(i)];
    Time p = inst.op(o).find_option(a.machine)->ptime;
    auto ms = static_cast<size_t>(a.machine);
    assigned_count[ms] += 1;
    assigned_overlap[ms] += is_overlap[static_cast<size_t>(i)] ? 1 : 0;
    assigned_p[ms] += p;
    completion_sum[ms] += a.start + p;
    completion_max[ms] = std::max(completion_max[ms], a.start + p);
    for (const auto& opt : inst.op(o).options) {
      candidate_count[static_cast<size_t>(opt.machine)] += 1;
      candidate_p[static_cast<size_t>(opt.machine)] += opt.ptime;
    }
  }
  for (MachineId m = 0; m < nm; ++m) {
    auto ms = static_cast<size_t>(m);
    Time ready = m < static_cast<MachineId>(sub.machine_ready.size())
                     ? sub.machine_ready[ms]
                     : 0;
    double span = static_cast<double>(std::max<Time>(c_loc - ready, 1));
    double* x = g.ma_x.row(m);
    x[0] = ratio(assigned_count[ms], window_cap);
    x[1] = ratio(assigned_overlap[ms], window_cap);
    x[2] = ratio(static_cast<double>(assigned_p[ms]), static_cast<double>(c_loc));
    x[3] = assigned_count[ms] ? ratio(static_cast<double>(completion_sum[ms]) /
                                          static_cast<double>(assigned_count[ms]),
                                      static_cast<double>(c_loc))
                              : 0.0;
    x[4] = ratio(static_cast<double>(completion_max[ms]), static_cast<double>(c_loc));
    x[5] = ratio(static_cast<double>(c_loc - ready - assigned_p[ms]), static_cast<double>(c_loc));
    x[6] = ratio(candidate_count[ms], window_cap);
    x[7] = ratio(static_cast<double>(assigned_p[ms]), span);
    x[8] = ratio(static_cast<double>(ready), static_cast<double>(c_loc));
    x[9] = candidate_count[ms]
               ? ratio(static_cast<double>(candidate_p[ms]) / static_cast<double>(candidate_count[ms]),
                       static_cast<double>(pmax_win))
               : 0.0;
    x[10] = ratio(static_cast<double>(m), static_cast<double>(nm));
  }

  // ---- edges ----------------------------------------------------------------
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    const Operation& op = inst.op(o);
    MachineId assigned = tent[static_cast<size_t>(i)].machine;
    for (const auto& opt : op.options) {
      double pn = ratio(static_cast<double>(opt.ptime), static_cast<double>(pmax_win));
      if (opt.machine == assigned)
        g.edges[kRelAssign].add(i, opt.machine, pn, 1.0);
      else
        g.edges[kRelAlternative].add(i, opt.machine, pn, 0.0);
    }
  }

  // r3: within-job consecutive pairs inside the window, gap from the tentative
  for (int i = 0; i < n; ++i) {
    OpId o = sub.ops[static_cast<size_t>(i)];
    JobId j = inst.op_job(o);
    int k = inst.op_pos(o);
    if (k + 1 >= inst.job_size(j)) continue;
    auto it = row_of.find(inst.op_id(j, k + 1));
    if (it == row_of.end()) continue;
    int succ = it->second;
    Time pred_p = inst.op(o).find_option(tent[static_cast<size_t>(i)].machine)->ptime;
    Time gap = tent[static_cast<size_t>(succ)].start - (tent[static_cast<size_t>(i)].start + pred_p);
    g.edges[kRelPrecedence].add(i, succ, ratio(static_cast<double>(gap), static_cast<double>(c_loc)),
                                ratio(static_cast<double>(pred_p), static_cast<double>(pmax_win)));
  }

  // r4: consecutive pairs per machine under the previous local schedule,
  // restricted to overlap ops (the only ones the previous fragment covers)
  {
    std::vector<std::vector<int>> per_machine(static_cast<size_t>(nm));
    for (int i = 0; i < n; ++i) {
      if (!is_overlap[static_cast<size_t>(i)]) continue;
      const Assignment& pa = prev.assign.at(sub.ops[static_cast<size_t>(i)]);
      per_machine[static_cast<size_t>(pa.machine)].push_back(i);
    }
    for (auto& seq : per_machine) {
      std::sort(seq.begin(), seq.end(), [&](int a, int b) {
        Time sa = prev.assign.at(sub.ops[static_cast<size_t>(a)]).start;
        Time sb = prev.assign.at(sub.ops[static_cast<size_t>(b)]).start;
        if (sa != sb) return sa < sb;
        return sub.ops[static_cast<size_t>(a)] < sub.ops[static_cast<size_t>(b)];
      });
      for (size_t q = 0; q + 1 < seq.size(); ++q) {
        int a = seq[q], b = seq[q + 1];
        OpId oa = sub.ops[static_cast<size_t>(a)], ob = sub.ops[static_cast<size_t>(b)];
        const Assignment& aa = prev.assign.at(oa);
        const Assignment& ab = prev.assign.at(ob);
        Time pa = inst.op(oa).find_option(aa.machine)->ptime;
        Time gap = ab.start - (aa.start + pa);
        double same_job = inst.op_job(oa) == inst.op_job(ob) ? 1.0 : 0.0;
        g.edges[kRelMachineOrder].add(a, b, ratio(static_cast<double>(gap), static_cast<double>(c_prev)),
                                      same_job);
      }
    }
  }

  return g;
}

const FeatureSchema& feature_schema() {
  static const FeatureSchema schema{
      kSchemaTag,
      {"p_assigned", "p_min", "p_max", "p_mean", "flexibility", "job_id", "job_progress",
       "job_remaining", "tentative_start", "tentative_end", "overlap", "fixed_last_iter",
       "prev_slack", "prev_critical", "window_position"},
      {"assigned_ops", "assigned_overlap_ops", "assigned_load", "mean_completion",
       "max_completion", "idle_fraction", "candidate_ops", "utilization", "earliest_available",
       "mean_candidate_p", "machine_id"},
      {{{"p_norm", "assignment_indicator"},
        {"p_norm", "assignment_indicator"},
        {"gap_norm", "pred_p_norm"},
        {"idle_gap_norm", "same_job"}}},
  };
  return schema;
}

void dump_graph(const HeteroGraph& g, std::ostream& out) {
  const FeatureSchema& s = feature_schema();
  out << "schema " << g.schema << "\n";
  out << "ops " << g.num_ops() << " machines " << g.num_machines() << "\n";
  for (int i = 0; i < g.num_ops(); ++i) {
    out << "op " << i << " id " << g.window_ops[static_cast<size_t>(i)];
    for (int f = 0; f < kOpFeatureDim; ++f) out << ' ' << s.op_features[static_cast<size_t>(f)] << '=' << g.op_x(i, f);
    out << "\n";
  }
  for (int m = 0; m < g.num_machines(); ++m) {
    out << "machine " << m;
    for (int f = 0; f < kMaFeatureDim; ++f) out << ' ' << s.ma_features[static_cast<size_t>(f)] << '=' << g.ma_x(m, f);
    out << "\n";
  }
  for (int r = 0; r < kNumRelations; ++r) {
    const EdgeSet& e = g.edges[static_cast<size_t>(r)];
    for (size_t i = 0; i < e.size(); ++i)
      out << "edge " << relation_name(r) << ' ' << e.src[i] << " -> " << e.dst[i] << " ["
          << e.feat[i][0] << ", " << e.feat[i][1] << "]\n";
  }
  out << "candidates";
  for (int c : g.candidate_rows) out << ' ' << c;
  out << "\n";
}

}  // namespace graphrho
