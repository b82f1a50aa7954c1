#include "graphrho/rho.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "graphrho/cpm.hpp"
#include "graphrho/rng.hpp"

namespace graphrho {

Policy parse_policy(const std::string& name) {
  if (name == "default") return Policy::default_rho;
  if (name == "warm_start") return Policy::warm_start;
  if (name == "oracle_fix") return Policy::oracle_fix;
  if (name == "learned") return Policy::learned;
  throw std::invalid_argument("unknown policy: " + name);
}

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::default_rho: return "default";
    case Policy::warm_start: return "warm_start";
    case Policy::oracle_fix: return "oracle_fix";
    case Policy::learned: return "learned";
  }
  return "?";
}

void RhoConfig::validate() const {
  if (step_s < 1 || step_s >= window_w)
    throw std::invalid_argument("rho config: need 1 <= step_s < window_w");
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("rho config: gamma in (0,1]");
  if (tau_min < 0.0 || tau_min > 1.0) throw std::invalid_argument("rho config: tau_min in [0,1]");
  if (static_tau < 0.0 || static_tau > 1.0)
    throw std::invalid_argument("rho config: static_tau in [0,1]");
}

int64_t RhoTrace::total_moves() const {
  int64_t s = 0;
  for (const auto& it : iters) s += it.moves;
  return s;
}

int64_t RhoTrace::total_nodes() const {
  int64_t s = 0;
  for (const auto& it : iters) s += it.nodes;
  return s;
}

int RhoTrace::fallback_count() const {
  int s = 0;
  for (const auto& it : iters) s += it.fallback ? 1 : 0;
  return s;
}

double RhoTrace::mean_fix_ratio() const {
  double sum = 0;
  int n = 0;
  for (const auto& it : iters) {
    if (it.overlap_size == 0) continue;
    sum += static_cast<double>(it.fix_count) / static_cast<double>(it.overlap_size);
    ++n;
  }
  return n ? sum / n : 0.0;
}

std::string trace_csv(const RhoTrace& trace) {
  std::ostringstream out;
  out << "iter,window_size,overlap_size,fix_count,tau,solve_ms,local_makespan,fallback\n";
  for (const auto& it : trace.iters) {
    out << it.iter << ',' << it.window_size << ',' << it.overlap_size << ',' << it.fix_count << ',';
    if (std::isnan(it.tau))
      out << "nan";
    else
      out << it.tau;
    out << ',' << it.solve_ms << ',' << it.local_makespan << ',' << (it.fallback ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string trace_probs_csv(const RhoTrace& trace) {
  std::ostringstream out;
  out << "iter,prob\n";
  for (const auto& it : trace.iters)
    for (double p : it.probs) out << it.iter << ',' << p << '\n';
  return out.str();
}

int ThresholdDecision::fix_count() const {
  int n = 0;
  for (uint8_t b : fix_mask) n += b;
  return n;
}

ThresholdDecision adaptive_threshold(std::span<const double> probs, double gamma, double tau_min) {
  if (probs.empty()) throw std::invalid_argument("adaptive_threshold: empty probability vector");
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("adaptive_threshold: gamma in (0,1]");
  if (tau_min < 0.0 || tau_min > 1.0)
    throw std::invalid_argument("adaptive_threshold: tau_min in [0,1]");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("adaptive_threshold: probabilities must lie in [0,1]");

  const int n = static_cast<int>(probs.size());
  const int k = static_cast<int>(std::floor(gamma * static_cast<double>(n)));
  ThresholdDecision out;
  double tau_t;
  if (k == 0) {
    tau_t = std::numeric_limits<double>::infinity();  // nothing passes the rank cut
  } else {
    std::vector<double> sorted(probs.begin(), probs.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    tau_t = sorted[static_cast<size_t>(k - 1)];
  }
  out.tau_safe = std::max(tau_t, tau_min);
  out.fix_mask.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.fix_mask[static_cast<size_t>(i)] = probs[static_cast<size_t>(i)] >= out.tau_safe ? 1 : 0;
  return out;
}

RhoState RhoState::create(const Instance& inst) {
  RhoState s;
  s.committed.assign(static_cast<size_t>(inst.total_ops()), Assignment{});
  s.is_committed.assign(static_cast<size_t>(inst.total_ops()), 0);
  s.job_ready.assign(static_cast<size_t>(inst.num_jobs()), 0);
  s.machine_ready.assign(static_cast<size_t>(inst.num_machines), 0);
  s.job_next.assign(static_cast<size_t>(inst.num_jobs()), 0);
  return s;
}

Subproblem build_window(const RhoState& state, const Instance& inst, int w, WindowRule rule) {
  Subproblem sub;
  sub.inst = &inst;
  sub.job_ready = state.job_ready;
  sub.machine_ready = state.machine_ready;

  std::vector<int> next_pos = state.job_next;

  // previous residue first: it is the overlap region by construction
  for (OpId o : state.prev_window) {
    if (state.is_committed[static_cast<size_t>(o)]) continue;
    sub.ops.push_back(o);
    JobId j = inst.op_job(o);
    next_pos[static_cast<size_t>(j)] =
        std::max(next_pos[static_cast<size_t>(j)], inst.op_pos(o) + 1);
    if (static_cast<int>(sub.ops.size()) == w) return sub;
  }

  if (rule == WindowRule::round_robin) {
    bool progress = true;
    while (static_cast<int>(sub.ops.size()) < w && progress) {
      progress = false;
      for (JobId j = 0; j < inst.num_jobs() && static_cast<int>(sub.ops.size()) < w; ++j) {
        int k = next_pos[static_cast<size_t>(j)];
        if (k >= inst.job_size(j)) continue;
        sub.ops.push_back(inst.op_id(j, k));
        next_pos[static_cast<size_t>(j)] = k + 1;
        progress = true;
      }
    }
  } else {
    // earliest-ready-first: repeatedly take the job whose next op is
    // estimated to become available first
    std::vector<Time> est = state.job_ready;
    while (static_cast<int>(sub.ops.size()) < w) {
      JobId pick = -1;
      for (JobId j = 0; j < inst.num_jobs(); ++j) {
        if (next_pos[static_cast<size_t>(j)] >= inst.job_size(j)) continue;
        if (pick < 0 || est[static_cast<size_t>(j)] < est[static_cast<size_t>(pick)]) pick = j;
      }
      if (pick < 0) break;
      int k = next_pos[static_cast<size_t>(pick)];
      OpId o = inst.op_id(pick, k);
      sub.ops.push_back(o);
      next_pos[static_cast<size_t>(pick)] = k + 1;
      est[static_cast<size_t>(pick)] += inst.op(o).min_ptime();
    }
  }
  return sub;
}

std::vector<OpId> commit_step(RhoState& state, const Instance& inst, const Subproblem& sub,
                              const SolveResult& local, int s) {
  const int n = sub.size();
  if (static_cast<int>(local.assignment.size()) != n)
    throw std::invalid_argument("commit_step: fragment does not cover the window");

  const int remaining_total = inst.total_ops() - state.committed_count;
  int commit_n = (n >= remaining_total) ? n : std::min(s, n);

  std::vector<int> sorted(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) sorted[static_cast<size_t>(i)] = i;
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    const Assignment& aa = local.assignment[static_cast<size_t>(a)];
    const Assignment& ab = local.assignment[static_cast<size_t>(b)];
    if (aa.start != ab.start) return aa.start < ab.start;
    OpId oa = sub.ops[static_cast<size_t>(a)], ob = sub.ops[static_cast<size_t>(b)];
    if (inst.op_job(oa) != inst.op_job(ob)) return inst.op_job(oa) < inst.op_job(ob);
    return inst.op_pos(oa) < inst.op_pos(ob);
  });

  std::unordered_map<OpId, int> window_index;
  for (int i = 0; i < n; ++i) window_index[sub.ops[static_cast<size_t>(i)]] = i;
  std::vector<char> picked(static_cast<size_t>(n), 0);
  std::vector<int> picks;
  picks.reserve(static_cast<size_t>(commit_n));

  for (int rank = 0; rank < n && static_cast<int>(picks.size()) < commit_n; ++rank) {
    int wi = sorted[static_cast<size_t>(rank)];
    if (picked[static_cast<size_t>(wi)]) continue;
    // precedence repair: never commit an op before its in-window predecessor
    for (;;) {
      OpId o = sub.ops[static_cast<size_t>(wi)];
      int k = inst.op_pos(o);
      if (k == 0) break;
      OpId pred = inst.op_id(inst.op_job(o), k - 1);
      if (state.is_committed[static_cast<size_t>(pred)]) break;
      auto it = window_index.find(pred);
      if (it == window_index.end())
        throw std::logic_error("commit_step: uncommitted predecessor outside the window");
      if (picked[static_cast<size_t>(it->second)]) break;
      wi = it->second;
    }
    picked[static_cast<size_t>(wi)] = 1;
    picks.push_back(wi);
  }

  std::vector<OpId> committed_ops;
  committed_ops.reserve(picks.size());
  for (int wi : picks) {
    OpId o = sub.ops[static_cast<size_t>(wi)];
    const Assignment& a = local.assignment[static_cast<size_t>(wi)];
    state.committed[static_cast<size_t>(o)] = a;
    state.is_committed[static_cast<size_t>(o)] = 1;
    ++state.committed_count;
    JobId j = inst.op_job(o);
    Time end = a.start + inst.op(o).find_option(a.machine)->ptime;
    state.job_ready[static_cast<size_t>(j)] = std::max(state.job_ready[static_cast<size_t>(j)], end);
    state.machine_ready[static_cast<size_t>(a.machine)] =
        std::max(state.machine_ready[static_cast<size_t>(a.machine)], end);
    state.job_next[static_cast<size_t>(j)] =
        std::max(state.job_next[static_cast<size_t>(j)], inst.op_pos(o) + 1);
    committed_ops.push_back(o);
  }
  return committed_ops;
}

namespace {

SolveResult run_subsolver(const Subproblem& sub, const SubsolverConfig& cfg, uint64_t seed) {
  if (cfg.kind == SubsolverConfig::Kind::exact) return solve_exact(sub, cfg.exact_node_limit);
  HeuristicParams p = cfg.heuristic;
  p.seed = seed;
  return solve_heuristic(sub, p);
}

}  // namespace

SolveResult solve_window_with_fallback(Subproblem& sub, const SubsolverConfig& cfg, uint64_t seed,
                                       bool& fallback) {
  fallback = false;
  SolveResult res = run_subsolver(sub, cfg, seed);
  if (res.status != SolveStatus::infeasible) return res;
  fallback = true;
  sub.fixed.clear();
  res = run_subsolver(sub, cfg, mix_seed(seed, 0xFA11));
  if (res.status == SolveStatus::infeasible)
    throw std::logic_error("rho: window infeasible even without fixing");
  return res;
}

RhoResult run_rho(const Instance& inst, const RhoConfig& cfg, const ModelParams* model) {
  cfg.validate();
  if (cfg.policy == Policy::learned && !model)
    throw std::invalid_argument("run_rho: policy=learned requires a model");

  RhoState state = RhoState::create(inst);
  const int total = inst.total_ops();

  while (state.committed_count < total) {
    Subproblem sub = build_window(state, inst, cfg.window_w, cfg.window_rule);
    IterTrace it;
    it.iter = state.iteration;
    it.window_size = sub.size();

    std::vector<OpId> overlap;
    for (OpId o : sub.ops)
      if (state.prev.has(o)) overlap.push_back(o);
    it.overlap_size = static_cast<int>(overlap.size());

    const bool use_warm =
        cfg.policy == Policy::warm_start ||
        ((cfg.policy == Policy::learned || cfg.policy == Policy::oracle_fix) && cfg.warm_start_learned);
    if (use_warm) {
      for (OpId o : overlap) sub.warm_start[o] = state.prev.assign.at(o);
    }

    uint64_t window_seed = mix_seed(cfg.seed, static_cast<uint64_t>(state.iteration));

    if (cfg.policy == Policy::oracle_fix && !overlap.empty()) {
      // lookahead oracle = the default (unfixed) solve of this window
      Subproblem plain = sub;
      plain.fixed.clear();
      SolveResult oracle = run_subsolver(plain, cfg.subsolver, mix_seed(window_seed, 0x0AC1E));
      it.aux_moves = oracle.stats.moves + oracle.stats.nodes;
      std::unordered_map<OpId, int> wi;
      for (int i = 0; i < sub.size(); ++i) wi[sub.ops[static_cast<size_t>(i)]] = i;
      for (OpId o : overlap) {
        MachineId prev_m = state.prev.assign.at(o).machine;
        if (oracle.assignment[static_cast<size_t>(wi.at(o))].machine == prev_m)
          sub.fixed[o] = prev_m;
      }
    } else if (cfg.policy == Policy::learned && !overlap.empty()) {
      HeteroGraph g = encode(sub, state.prev, cfg.window_w);
      ForwardResult pred = gnn_forward(g, *model, /*training=*/false, 0, nullptr);
      it.probs = pred.y_fix;
      if (!pred.y_fix.empty()) {
        ThresholdDecision dec;
        if (cfg.threshold == ThresholdMode::adaptive) {
          dec = adaptive_threshold(pred.y_fix, cfg.gamma, cfg.tau_min);
        } else {
          dec.tau_safe = cfg.static_tau;
          dec.fix_mask.resize(pred.y_fix.size());
          for (size_t i = 0; i < pred.y_fix.size(); ++i)
            dec.fix_mask[i] = pred.y_fix[i] >= cfg.static_tau ? 1 : 0;
        }
        it.tau = dec.tau_safe;
        for (size_t i = 0; i < dec.fix_mask.size(); ++i) {
          if (!dec.fix_mask[i]) continue;
          OpId o = g.window_ops[static_cast<size_t>(g.candidate_rows[i])];
          sub.fixed[o] = state.prev.assign.at(o).machine;
        }
      }
    }

    it.fix_count = static_cast<int>(sub.fixed.size());
    for (const auto& [o, m] : sub.fixed) it.fixed_ops.push_back(o);
    std::sort(it.fixed_ops.begin(), it.fixed_ops.end());
    for (OpId o : it.fixed_ops) it.fixed_machines.push_back(sub.fixed.at(o));

    SolveResult res = solve_window_with_fallback(sub, cfg.subsolver, window_seed, it.fallback);
    if (it.fallback) {
      it.fix_count = 0;
      it.fixed_ops.clear();
      it.fixed_machines.clear();
    }

    it.moves = res.stats.moves;
    it.nodes = res.stats.nodes;
    it.solve_ms = res.stats.wall_ms;
    it.local_makespan = res.makespan_local;

    // previous-iteration state for the next window, computed before committing
    PrevContext next_prev;
    {
      DisjunctiveGraph fg =
          build_fragment_graph(inst, sub.ops, res.assignment, sub.job_ready, sub.machine_ready);
      SlackReport rep = compute_slack(fg);
      for (int i = 0; i < fg.size(); ++i)
        next_prev.slack[fg.ops[static_cast<size_t>(i)]] = rep.per_node[static_cast<size_t>(i)];
      next_prev.prev_makespan = rep.makespan;
      for (int i = 0; i < sub.size(); ++i)
        next_prev.assign[sub.ops[static_cast<size_t>(i)]] = res.assignment[static_cast<size_t>(i)];
      for (const auto& [o, m] : sub.fixed) next_prev.fixed_last_iter.insert(o);
    }

    it.committed_ops = commit_step(state, inst, sub, res, cfg.step_s);
    state.prev = std::move(next_prev);
    state.prev_window = sub.ops;
    state.trace.iters.push_back(std::move(it));
    ++state.iteration;
  }

  RhoResult out;
  out.schedule.ops = state.committed;
  out.schedule.makespan = makespan(inst, out.schedule);
  out.trace = std::move(state.trace);
  return out;
}

}  // namespace graphrho
