#include "graphrho/subsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphrho/rng.hpp"

namespace graphrho {

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout: return "timeout";
  }
  return "?";
}

namespace {

constexpr Time kInfTime = std::numeric_limits<Time>::max() / 4;

struct WindowView {
  const Subproblem* sub;
  int n;
  std::vector<JobId> job;        // per window index
  std::vector<int> pos;
  std::vector<int> job_pred;     // window index of in-window job predecessor, -1 if none
  std::vector<std::vector<int>> job_chain;  // per job: window indices in pos order
  std::vector<JobId> jobs_present;

  explicit WindowView(const Subproblem& s) : sub(&s), n(s.size()) {
    const Instance& inst = *s.inst;
    job.resize(static_cast<size_t>(n));
    pos.resize(static_cast<size_t>(n));
    job_pred.assign(static_cast<size_t>(n), -1);
    job_chain.resize(static_cast<size_t>(inst.num_jobs()));
    for (int i = 0; i < n; ++i) {
      job[static_cast<size_t>(i)] = inst.op_job(s.ops[static_cast<size_t>(i)]);
      pos[static_cast<size_t>(i)] = inst.op_pos(s.ops[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < n; ++i)
      job_chain[static_cast<size_t>(job[static_cast<size_t>(i)])].push_back(i);
    for (auto& chain : job_chain)
      std::sort(chain.begin(), chain.end(), [&](int a, int b) {
        return pos[static_cast<size_t>(a)] < pos[static_cast<size_t>(b)];
      });
    for (JobId j = 0; j < inst.num_jobs(); ++j) {
      const auto& chain = job_chain[static_cast<size_t>(j)];
      if (!chain.empty()) jobs_present.push_back(j);
      for (size_t q = 1; q < chain.size(); ++q)
        job_pred[static_cast<size_t>(chain[q])] = chain[q - 1];
    }
  }

  Time job_ready(JobId j) const {
    return j < static_cast<JobId>(sub->job_ready.size())
               ? sub->job_ready[static_cast<size_t>(j)]
               : 0;
  }
  Time machine_ready(MachineId m) const {
    return m < static_cast<MachineId>(sub->machine_ready.size())
               ? sub->machine_ready[static_cast<size_t>(m)]
               : 0;
  }
  const Operation& op(int wi) const { return sub->inst->op(sub->ops[static_cast<size_t>(wi)]); }
};

bool fixed_set_valid(const Subproblem& sub) {
  for (const auto& [o, m] : sub.fixed)
    if (!sub.inst->op(o).find_option(m)) return false;
  return true;
}

// Busy intervals of one machine, kept sorted by start. Placement fills the
// earliest idle gap that fits (not merely the tail), which makes the
// (order, machine) encoding far more expressive for the local search.
struct MachineTimeline {
  Time ready = 0;
  std::vector<std::pair<Time, Time>> busy;

  Time earliest_fit(Time lower, Time p) const {
    Time t = std::max(lower, ready);
    for (const auto& [s, e] : busy) {
      if (t + p <= s) break;
      t = std::max(t, e);
    }
    return t;
  }

  void occupy(Time start, Time p) {
    auto it = std::lower_bound(busy.begin(), busy.end(), std::make_pair(start, start));
    busy.insert(it, {start, start + p});
  }
};

const MachineId* fixed_machine(const Subproblem& sub, OpId o) {
  auto it = sub.fixed.find(o);
  return it == sub.fixed.end() ? nullptr : &it->second;
}

}  // namespace

DispatchResult dispatch(const Subproblem& sub, std::span<const int> order,
                        std::span<const MachineId> machine_choice) {
  const Instance& inst = *sub.inst;
  const int n = sub.size();
  DispatchResult res;
  res.assignment.assign(static_cast<size_t>(n), Assignment{});
  std::vector<Time> job_avail(static_cast<size_t>(inst.num_jobs()), 0);
  for (JobId j = 0; j < inst.num_jobs(); ++j)
    if (j < static_cast<JobId>(sub.job_ready.size()))
      job_avail[static_cast<size_t>(j)] = sub.job_ready[static_cast<size_t>(j)];
  std::vector<Time> machine_avail(static_cast<size_t>(inst.num_machines), 0);
  for (MachineId m = 0; m < inst.num_machines; ++m)
    if (m < static_cast<MachineId>(sub.machine_ready.size()))
      machine_avail[static_cast<size_t>(m)] = sub.machine_ready[static_cast<size_t>(m)];

  for (int wi : order) {
    OpId o = sub.ops[static_cast<size_t>(wi)];
    MachineId m = machine_choice[static_cast<size_t>(wi)];
    const MachineOption* mo = inst.op(o).find_option(m);
    if (!mo) throw std::logic_error("dispatch: incompatible machine choice");
    JobId j = inst.op_job(o);
    Time start = std::max(job_avail[static_cast<size_t>(j)], machine_avail[static_cast<size_t>(m)]);
    res.assignment[static_cast<size_t>(wi)] = {m, start};
    Time end = start + mo->ptime;
    job_avail[static_cast<size_t>(j)] = end;
    machine_avail[static_cast<size_t>(m)] = end;
    res.makespan = std::max(res.makespan, end);
  }
  return res;
}

GreedyResult greedy_dispatch(const Subproblem& sub,
                             const std::unordered_map<OpId, MachineId>* preset) {
  const Instance& inst = *sub.inst;
  WindowView w(sub);
  const int n = sub.size();
  GreedyResult res;
  res.machine_choice.assign(static_cast<size_t>(n), -1);

  std::vector<Time> job_avail(static_cast<size_t>(inst.num_jobs()), 0);
  for (JobId j : w.jobs_present) job_avail[static_cast<size_t>(j)] = w.job_ready(j);
  std::vector<Time> machine_avail(static_cast<size_t>(inst.num_machines), 0);
  for (MachineId m = 0; m < inst.num_machines; ++m) machine_avail[static_cast<size_t>(m)] = w.machine_ready(m);

  std::vector<size_t> next_in_chain(static_cast<size_t>(inst.num_jobs()), 0);
  res.decoded.assignment.assign(static_cast<size_t>(n), Assignment{});

  for (int step = 0; step < n; ++step) {
    int best_wi = -1;
    MachineId best_m = -1;
    Time best_end = kInfTime, best_p = kInfTime;
    for (JobId j : w.jobs_present) {
      const auto& chain = w.job_chain[static_cast<size_t>(j)];
      if (next_in_chain[static_cast<size_t>(j)] >= chain.size()) continue;
      int wi = chain[next_in_chain[static_cast<size_t>(j)]];
      OpId o = sub.ops[static_cast<size_t>(wi)];
      const MachineId* fm = fixed_machine(sub, o);
      MachineId pm = -1;
      if (!fm && preset) {
        auto it = preset->find(o);
        if (it != preset->end() && inst.op(o).find_option(it->second)) pm = it->second;
      }
      for (const MachineOption& opt : w.op(wi).options) {
        if (fm && opt.machine != *fm) continue;
        if (pm >= 0 && opt.machine != pm) continue;
        Time start = std::max(job_avail[static_cast<size_t>(j)],
                              machine_avail[static_cast<size_t>(opt.machine)]);
        Time end = start + opt.ptime;
        // ties: shorter op first, then job id, then machine id
        if (end < best_end || (end == best_end && (opt.ptime < best_p ||
            (opt.ptime == best_p && (best_wi < 0 || j < w.job[static_cast<size_t>(best_wi)] ||
             (j == w.job[static_cast<size_t>(best_wi)] && opt.machine < best_m)))))) {
          best_end = end;
          best_p = opt.ptime;
          best_wi = wi;
          best_m = opt.machine;
        }
      }
    }
    if (best_wi < 0) throw std::logic_error("greedy_dispatch: no schedulable op");
    JobId j = w.job[static_cast<size_t>(best_wi)];
    Time start = std::max(job_avail[static_cast<size_t>(j)], machine_avail[static_cast<size_t>(best_m)]);
    res.order.push_back(best_wi);
    res.machine_choice[static_cast<size_t>(best_wi)] = best_m;
    res.decoded.assignment[static_cast<size_t>(best_wi)] = {best_m, start};
    job_avail[static_cast<size_t>(j)] = best_end;
    machine_avail[static_cast<size_t>(best_m)] = best_end;
    res.decoded.makespan = std::max(res.decoded.makespan, best_end);
    ++next_in_chain[static_cast<size_t>(j)];
  }
  return res;
}

// ---------------------------------------------------------------------------
// exact branch and bound
// ---------------------------------------------------------------------------

namespace {

struct ExactSearch {
  const Subproblem& sub;
  const WindowView w;
  int64_t node_limit;
  int64_t nodes = 0;
  bool timed_out = false;

  Time best_makespan = kInfTime;
  std::vector<Assignment> best_assign;

  std::vector<Time> job_avail;
  std::vector<Time> machine_avail;
  std::vector<size_t> next_in_chain;
  std::vector<Assignment> cur_assign;
  std::vector<Time> chain_tail_minp;  // per job: sum of min ptimes of remaining chain ops
  std::vector<Time> forced_load;      // per machine: total p of unscheduled ops forced onto it

  explicit ExactSearch(const Subproblem& s, int64_t limit)
      : sub(s), w(s), node_limit(limit) {
    const Instance& inst = *s.inst;
    job_avail.assign(static_cast<size_t>(inst.num_jobs()), 0);
    for (JobId j : w.jobs_present) job_avail[static_cast<size_t>(j)] = w.job_ready(j);
    machine_avail.assign(static_cast<size_t>(inst.num_machines), 0);
    for (MachineId m = 0; m < inst.num_machines; ++m)
      machine_avail[static_cast<size_t>(m)] = w.machine_ready(m);
    next_in_chain.assign(static_cast<size_t>(inst.num_jobs()), 0);
    cur_assign.assign(static_cast<size_t>(s.size()), Assignment{});
    chain_tail_minp.assign(static_cast<size_t>(inst.num_jobs()), 0);
    for (JobId j : w.jobs_present)
      for (int wi : w.job_chain[static_cast<size_t>(j)])
        chain_tail_minp[static_cast<size_t>(j)] += w.op(wi).min_ptime();
    forced_load.assign(static_cast<size_t>(inst.num_machines), 0);
    for (int wi = 0; wi < s.size(); ++wi) {
      OpId o = s.ops[static_cast<size_t>(wi)];
      const MachineId* fm = fixed_machine(s, o);
      const auto& opts = w.op(wi).options;
      if (fm)
        forced_load[static_cast<size_t>(*fm)] += inst.op(o).find_option(*fm)->ptime;
      else if (opts.size() == 1)
        forced_load[static_cast<size_t>(opts[0].machine)] += opts[0].ptime;
    }
  }

  Time lower_bound(Time max_end_so_far) const {
    Time lb = max_end_so_far;
    for (JobId j : w.jobs_present)
      if (next_in_chain[static_cast<size_t>(j)] < w.job_chain[static_cast<size_t>(j)].size())
        lb = std::max(lb, job_avail[static_cast<size_t>(j)] + chain_tail_minp[static_cast<size_t>(j)]);
    for (MachineId m = 0; m < sub.inst->num_machines; ++m)
      if (forced_load[static_cast<size_t>(m)] > 0)
        lb = std::max(lb, machine_avail[static_cast<size_t>(m)] + forced_load[static_cast<size_t>(m)]);
    return lb;
  }

  void dfs(int depth, Time max_end_so_far) {
    if (timed_out) return;
    if (depth == sub.size()) {
      if (max_end_so_far < best_makespan) {
        best_makespan = max_end_so_far;
        best_assign = cur_assign;
      }
      return;
    }
    if (lower_bound(max_end_so_far) >= best_makespan) return;

    for (JobId j : w.jobs_present) {
      size_t ni = next_in_chain[static_cast<size_t>(j)];
      const auto& chain = w.job_chain[static_cast<size_t>(j)];
      if (ni >= chain.size()) continue;
      int wi = chain[ni];
      OpId o = sub.ops[static_cast<size_t>(wi)];
      const MachineId* fm = fixed_machine(sub, o);
      bool single = w.op(wi).options.size() == 1;
      for (const MachineOption& opt : w.op(wi).options) {
        if (fm && opt.machine != *fm) continue;
        if (++nodes > node_limit) {
          timed_out = true;
          return;
        }
        Time start = std::max(job_avail[static_cast<size_t>(j)],
                              machine_avail[static_cast<size_t>(opt.machine)]);
        Time end = start + opt.ptime;

        Time saved_job = job_avail[static_cast<size_t>(j)];
        Time saved_machine = machine_avail[static_cast<size_t>(opt.machine)];
        Time saved_tail = chain_tail_minp[static_cast<size_t>(j)];
        Time saved_forced = forced_load[static_cast<size_t>(opt.machine)];

        job_avail[static_cast<size_t>(j)] = end;
        machine_avail[static_cast<size_t>(opt.machine)] = end;
        chain_tail_minp[static_cast<size_t>(j)] -= w.op(wi).min_ptime();
        if (fm || single)
          forced_load[static_cast<size_t>(opt.machine)] -= opt.ptime;
        next_in_chain[static_cast<size_t>(j)] = ni + 1;
        cur_assign[static_cast<size_t>(wi)] = {opt.machine, start};

        dfs(depth + 1, std::max(max_end_so_far, end));

        cur_assign[static_cast<size_t>(wi)] = Assignment{};
        next_in_chain[static_cast<size_t>(j)] = ni;
        job_avail[static_cast<size_t>(j)] = saved_job;
        machine_avail[static_cast<size_t>(opt.machine)] = saved_machine;
        chain_tail_minp[static_cast<size_t>(j)] = saved_tail;
        forced_load[static_cast<size_t>(opt.machine)] = saved_forced;
        if (timed_out) return;
      }
    }
  }
};

}  // namespace

SolveResult solve_exact(const Subproblem& sub, int64_t node_limit) {
  if (sub.size() > 12)
    throw std::invalid_argument("solve_exact: window larger than 12 operations");
  auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  if (!fixed_set_valid(sub)) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  ExactSearch search(sub, node_limit);
  search.dfs(0, 0);
  res.stats.nodes = search.nodes;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (search.best_makespan >= kInfTime) {
    res.status = search.timed_out ? SolveStatus::timeout : SolveStatus::infeasible;
    return res;
  }
  res.assignment = search.best_assign;
  res.makespan_local = search.best_makespan;
  res.status = search.timed_out ? SolveStatus::timeout : SolveStatus::optimal;
  return res;
}

// ---------------------------------------------------------------------------
// heuristic: greedy construction + local search
// ---------------------------------------------------------------------------

namespace {

struct Move {
  enum class Kind { reassign, swap_adjacent } kind;
  int wi_a = -1;
  int wi_b = -1;       // swap only
  MachineId m = -1;    // reassign only
};

struct LocalSearch {
  const Subproblem& sub;
  const WindowView w;
  const HeuristicParams& params;
  Rng rng;
  std::chrono::steady_clock::time_point t0;

  std::vector<int> order;
  std::vector<MachineId> choice;
  DispatchResult current;

  std::vector<int> best_order;
  std::vector<MachineId> best_choice;
  DispatchResult best;

  SolveStats stats;
  int64_t moves_since_best = 0;
  double temp;

  LocalSearch(const Subproblem& s, const HeuristicParams& p)
      : sub(s), w(s), params(p), rng(p.seed), temp(p.sa_initial_temp) {
    t0 = std::chrono::steady_clock::now();
  }

  bool budget_left() const {
    if (params.budget.mode == SolveBudget::Mode::moves) return stats.moves < params.budget.value;
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return ms < static_cast<double>(params.budget.value);
  }

  DispatchResult evaluate() {
    ++stats.moves;
    return dispatch(sub, order, choice);
  }

  void adopt_if_best() {
    if (best.assignment.empty() || current.makespan < best.makespan) {
      best = current;
      best_order = order;
      best_choice = choice;
      moves_since_best = 0;
      stats.incumbent_history.emplace_back(stats.moves, best.makespan);
    }
  }

  std::vector<Move> neighborhood() const {
    std::vector<Move> moves;
    for (int wi = 0; wi < sub.size(); ++wi) {
      OpId o = sub.ops[static_cast<size_t>(wi)];
      if (sub.fixed.count(o)) continue;
      for (const MachineOption& opt : w.op(wi).options)
        if (opt.machine != choice[static_cast<size_t>(wi)])
          moves.push_back({Move::Kind::reassign, wi, -1, opt.machine});
    }
    // adjacent pairs per machine under the current decode
    std::vector<std::vector<int>> seq(static_cast<size_t>(sub.inst->num_machines));
    for (int wi = 0; wi < sub.size(); ++wi)
      seq[static_cast<size_t>(current.assignment[static_cast<size_t>(wi)].machine)].push_back(wi);
    for (auto& s : seq) {
      std::sort(s.begin(), s.end(), [&](int a, int b) {
        return current.assignment[static_cast<size_t>(a)].start <
               current.assignment[static_cast<size_t>(b)].start;
      });
      for (size_t q = 0; q + 1 < s.size(); ++q) {
        int a = s[q], b = s[q + 1];
        if (w.job[static_cast<size_t>(a)] == w.job[static_cast<size_t>(b)]) continue;
        moves.push_back({Move::Kind::swap_adjacent, a, b, -1});
      }
    }
    return moves;
  }

  // A swap stays precedence-consistent iff no op of either job sits strictly
  // between the two order positions (any such op would flip against its
  // neighbor's job order).
  bool swap_valid(const Move& m, const std::vector<size_t>& pos_of) const {
    size_t lo = pos_of[static_cast<size_t>(m.wi_a)];
    size_t hi = pos_of[static_cast<size_t>(m.wi_b)];
    if (lo > hi) std::swap(lo, hi);
    JobId ja = w.job[static_cast<size_t>(m.wi_a)];
    JobId jb = w.job[static_cast<size_t>(m.wi_b)];
    for (size_t q = lo + 1; q < hi; ++q) {
      JobId jq = w.job[static_cast<size_t>(order[q])];
      if (jq == ja || jq == jb) return false;
    }
    return true;
  }

  // Applies the move to (order, choice); returns the previous state for undo.
  struct Undo {
    Move move;
    MachineId prev_machine = -1;
    size_t pos_a = 0, pos_b = 0;
  };

  Undo apply(const Move& m, const std::vector<size_t>& pos_of) {
    Undo u{m, -1, 0, 0};
    if (m.kind == Move::Kind::reassign) {
      u.prev_machine = choice[static_cast<size_t>(m.wi_a)];
      choice[static_cast<size_t>(m.wi_a)] = m.m;
    } else {
      u.pos_a = pos_of[static_cast<size_t>(m.wi_a)];
      u.pos_b = pos_of[static_cast<size_t>(m.wi_b)];
      std::swap(order[u.pos_a], order[u.pos_b]);
    }
    return u;
  }

  void undo(const Undo& u) {
    if (u.move.kind == Move::Kind::reassign)
      choice[static_cast<size_t>(u.move.wi_a)] = u.prev_machine;
    else
      std::swap(order[u.pos_a], order[u.pos_b]);
  }

  std::vector<size_t> positions() const {
    std::vector<size_t> pos(static_cast<size_t>(sub.size()), 0);
    for (size_t i = 0; i < order.size(); ++i) pos[static_cast<size_t>(order[i])] = i;
    return pos;
  }

  void perturb(int strength) {
    auto pos_of = positions();
    auto moves = neighborhood();
    for (int i = 0; i < strength && !moves.empty(); ++i) {
      const Move& m = moves[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(moves.size()) - 1))];
      if (m.kind == Move::Kind::swap_adjacent && !swap_valid(m, pos_of)) continue;
      apply(m, pos_of);
      current = evaluate();
      pos_of = positions();
      moves = neighborhood();
    }
  }

  void run() {
    // initial incumbent: greedy honoring fixed machines and warm hints
    const std::unordered_map<OpId, MachineId>* preset = nullptr;
    std::unordered_map<OpId, MachineId> warm_machines;
    if (!sub.warm_start.empty()) {
      for (const auto& [o, a] : sub.warm_start)
        if (a.assigned() && sub.inst->op(o).find_option(a.machine)) warm_machines[o] = a.machine;
      if (!warm_machines.empty()) preset = &warm_machines;
    }
    GreedyResult greedy = greedy_dispatch(sub, preset);
    ++stats.moves;
    order = greedy.order;
    choice = greedy.machine_choice;
    current = greedy.decoded;
    adopt_if_best();

    // full warm fragment: replay its own order; semi-active re-dispatch can
    // only shift starts earlier, so this never exceeds the warm makespan
    if (static_cast<int>(warm_machines.size()) == sub.size()) {
      std::vector<int> warm_order(static_cast<size_t>(sub.size()));
      for (int i = 0; i < sub.size(); ++i) warm_order[static_cast<size_t>(i)] = i;
      std::sort(warm_order.begin(), warm_order.end(), [&](int a, int b) {
        Time sa = sub.warm_start.at(sub.ops[static_cast<size_t>(a)]).start;
        Time sb = sub.warm_start.at(sub.ops[static_cast<size_t>(b)]).start;
        if (sa != sb) return sa < sb;
        return sub.ops[static_cast<size_t>(a)] < sub.ops[static_cast<size_t>(b)];
      });
      std::vector<MachineId> warm_choice(static_cast<size_t>(sub.size()));
      bool ok = true;
      for (int i = 0; i < sub.size() && ok; ++i) {
        OpId o = sub.ops[static_cast<size_t>(i)];
        MachineId m = warm_machines.at(o);
        const MachineId* fm = fixed_machine(sub, o);
        if (fm) m = *fm;
        if (!sub.inst->op(o).find_option(m)) ok = false;
        warm_choice[static_cast<size_t>(i)] = m;
      }
      if (ok) {
        auto saved_order = order;
        auto saved_choice = choice;
        order = warm_order;
        choice = warm_choice;
        DispatchResult warm_decoded = evaluate();
        if (warm_decoded.makespan < current.makespan) {
          current = warm_decoded;
          adopt_if_best();
        } else {
          order = saved_order;
          choice = saved_choice;
        }
      }
    }

    int restarts_left = params.max_restarts;
    while (budget_left()) {
      auto moves = neighborhood();
      if (moves.empty()) break;
      int64_t stall_limit =
          std::max<int64_t>(64, static_cast<int64_t>(params.stall_factor * static_cast<double>(moves.size())));
      rng.shuffle(moves);
      auto pos_of = positions();

      bool improved = false;
      for (const Move& m : moves) {
        if (!budget_left()) break;
        if (m.kind == Move::Kind::swap_adjacent && !swap_valid(m, pos_of)) continue;
        Undo u = apply(m, pos_of);
        DispatchResult cand = evaluate();
        ++moves_since_best;
        if (cand.makespan < current.makespan) {
          current = cand;
          adopt_if_best();
          improved = true;
          break;  // first improvement; re-enumerate
        }
        undo(u);
      }
      if (!budget_left()) break;

      if (!improved) {
        // plateau: one annealed random move
        for (int attempt = 0; attempt < 8; ++attempt) {
          const Move& m =
              moves[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(moves.size()) - 1))];
          if (m.kind == Move::Kind::swap_adjacent && !swap_valid(m, pos_of)) continue;
          Undo u = apply(m, pos_of);
          DispatchResult cand = evaluate();
          ++moves_since_best;
          double delta = static_cast<double>(cand.makespan - current.makespan);
          bool accept = delta <= 0 || rng.uniform_real() < std::exp(-delta / std::max(temp, 1e-9));
          if (accept) {
            current = cand;
            adopt_if_best();
            temp *= params.sa_cooling;
          } else {
            undo(u);
          }
          break;
        }
      }

      if (moves_since_best >= stall_limit) {
        if (restarts_left-- > 0) {
          // restart from the incumbent with a small random shake
          order = best_order;
          choice = best_choice;
          current = best;
          perturb(std::max(2, sub.size() / 8));
          adopt_if_best();
          temp = params.sa_initial_temp;
          moves_since_best = 0;
          ++stats.restarts;
        } else {
          break;  // converged
        }
      }
    }
  }
};

}  // namespace

SolveResult solve_heuristic(const Subproblem& sub, const HeuristicParams& params) {
  auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  if (!fixed_set_valid(sub)) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  if (sub.size() == 0) {
    res.status = SolveStatus::feasible;
    res.makespan_local = 0;
    return res;
  }
  LocalSearch ls(sub, params);
  ls.run();
  res.assignment = ls.best.assignment;
  res.makespan_local = ls.best.makespan;
  res.status = SolveStatus::feasible;
  res.stats = ls.stats;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace graphrho
