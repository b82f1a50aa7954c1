#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "graphrho/gnn.hpp"
#include "graphrho/hetgraph.hpp"
#include "graphrho/subsolver.hpp"

namespace graphrho {

enum class Policy { default_rho, warm_start, oracle_fix, learned };
enum class WindowRule { round_robin, earliest_ready };
enum class ThresholdMode { adaptive, static_tau };

Policy parse_policy(const std::string& name);
const char* policy_name(Policy p);

struct SubsolverConfig {
  enum class Kind { heuristic, exact };
  Kind kind = Kind::heuristic;
  HeuristicParams heuristic;
  int64_t exact_node_limit = 2'000'000;
};

struct RhoConfig {
  int window_w = 80;
  int step_s = 30;
  Policy policy = Policy::default_rho;
  double gamma = 0.6;      // target fixation ratio
  double tau_min = 0.3;    // safety floor
  ThresholdMode threshold = ThresholdMode::adaptive;
  double static_tau = 0.5;  // used when threshold == static_tau
  WindowRule window_rule = WindowRule::round_robin;
  bool warm_start_learned = true;  // pass the previous fragment as incumbent
  SubsolverConfig subsolver;
  uint64_t seed = 0;  // per-window solver seeds derive from this

  void validate() const;
};

struct IterTrace {
  int iter = 0;
  int window_size = 0;
  int overlap_size = 0;
  int fix_count = 0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double solve_ms = 0;
  Time local_makespan = 0;
  bool fallback = false;
  int64_t moves = 0;      // effort of the committed solve
  int64_t nodes = 0;
  int64_t aux_moves = 0;  // oracle labeling solve under policy=oracle_fix
  std::vector<double> probs;   // predicted fix probabilities, per overlap op
  std::vector<OpId> fixed_ops;
  std::vector<MachineId> fixed_machines;  // parallel to fixed_ops (= previous machines)
  std::vector<OpId> committed_ops;
};

struct RhoTrace {
  std::vector<IterTrace> iters;

  int64_t total_moves() const;
  int64_t total_nodes() const;
  int fallback_count() const;
  double mean_fix_ratio() const;  // |fix| / |overlap| over iterations with overlap
};

// CSV schema: iter,window_size,overlap_size,fix_count,tau,solve_ms,local_makespan,fallback
std::string trace_csv(const RhoTrace& trace);
// Long-format probability series for the ridgeline report: iter,prob
std::string trace_probs_csv(const RhoTrace& trace);

struct ThresholdDecision {
  double tau_safe = 0;
  std::vector<uint8_t> fix_mask;
  int fix_count() const;
};

// Eq-style rank threshold: tau = k-th largest probability with k = floor(gamma*N),
// then the safety floor tau_min; ops with p >= max(tau, tau_min) pass. k == 0
// yields an infinite rank cut (nothing passes it; the floor cannot rescue it).
ThresholdDecision adaptive_threshold(std::span<const double> probs, double gamma, double tau_min);

struct RhoState {
  std::vector<Assignment> committed;  // global op-indexed, unassigned until committed
  std::vector<char> is_committed;
  int committed_count = 0;
  std::vector<Time> job_ready;
  std::vector<Time> machine_ready;
  std::vector<int> job_next;  // per job: first uncommitted position
  int iteration = 0;
  std::vector<OpId> prev_window;
  PrevContext prev;  // previous local schedule, fix set, slack state
  RhoTrace trace;

  static RhoState create(const Instance& inst);
};

// Window = every yet-uncommitted op of the previous window (the overlap is
// exactly the previous residue), then new ops by the window rule until w ops
// are taken or none remain.
Subproblem build_window(const RhoState& state, const Instance& inst, int w, WindowRule rule);

// Commits the s window ops with the earliest local starts (ties by job, pos),
// replacing any pick whose in-window predecessor is uncommitted by that
// predecessor. A window containing every remaining op is committed whole.
// Returns the committed ops.
std::vector<OpId> commit_step(RhoState& state, const Instance& inst, const Subproblem& sub,
                              const SolveResult& local, int s);

struct RhoResult {
  Schedule schedule;
  RhoTrace trace;
};

// One window solve with the infeasible-fix fallback: when the fixed set makes
// the window infeasible, it is cleared and the window re-solved (sets
// `fallback`). Throws std::logic_error if the window stays infeasible.
SolveResult solve_window_with_fallback(Subproblem& sub, const SubsolverConfig& cfg, uint64_t seed,
                                       bool& fallback);

// The full rolling loop for one instance. policy=learned requires `model`;
// an infeasible fix set triggers one fallback re-solve without fixing
// (recorded in the trace).
RhoResult run_rho(const Instance& inst, const RhoConfig& cfg, const ModelParams* model = nullptr);

}  // namespace graphrho
