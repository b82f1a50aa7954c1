#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "graphrho/subproblem.hpp"

namespace graphrho {

enum class SolveStatus { optimal, feasible, infeasible, timeout };

const char* solve_status_name(SolveStatus s);

struct SolveStats {
  int64_t nodes = 0;   // branch-and-bound expansions
  int64_t moves = 0;   // local-search evaluations (the search-effort metric)
  double wall_ms = 0;
  int restarts = 0;
  // (moves-at-improvement, incumbent makespan) pairs; non-increasing in the
  // second component by construction.
  std::vector<std::pair<int64_t, Time>> incumbent_history;
};

struct SolveResult {
  std::vector<Assignment> assignment;  // parallel to Subproblem::ops
  Time makespan_local = -1;
  SolveStatus status = SolveStatus::infeasible;
  SolveStats stats;
};

// Depth-first branch and bound over (machine choice x dispatch order) with a
// longest-path lower bound. Only for windows of at most 12 operations.
// Honors `fixed` by pruning machine branches; an incompatible fixed machine
// yields status=infeasible. Hitting node_limit returns the best-so-far with
// status=timeout.
SolveResult solve_exact(const Subproblem& sub, int64_t node_limit = 50'000'000);

struct SolveBudget {
  enum class Mode { wall_ms, moves };
  Mode mode = Mode::wall_ms;
  int64_t value = 500;

  static SolveBudget wall(int64_t ms) { return {Mode::wall_ms, ms}; }
  static SolveBudget moves(int64_t n) { return {Mode::moves, n}; }
};

struct HeuristicParams {
  SolveBudget budget = SolveBudget::wall(500);
  uint64_t seed = 0;
  // Converged when no new incumbent for stall_factor * |neighborhood|
  // evaluated moves; scaling with the neighborhood makes search effort track
  // the pruned problem size.
  double stall_factor = 4.0;
  int max_restarts = 1;
  double sa_initial_temp = 3.0;
  double sa_cooling = 0.95;
};

// Greedy earliest-completion-time construction followed by first-improvement
// local search (machine reassignment of unfixed ops, adjacent swaps on a
// machine) with simulated-annealing acceptance on plateaus and restarts.
// Deterministic per seed under a move budget; never claims optimality.
SolveResult solve_heuristic(const Subproblem& sub, const HeuristicParams& params);

// Shared construction primitive: list-schedules `order` (window indices) with
// the given machine choices, starting each op at its earliest feasible time.
// Also used by the graph encoder to derive tentative states.
struct DispatchResult {
  std::vector<Assignment> assignment;  // parallel to sub.ops
  Time makespan = 0;
};

DispatchResult dispatch(const Subproblem& sub, std::span<const int> order,
                        std::span<const MachineId> machine_choice);

// Earliest-completion-time greedy: picks the (ready op, machine) pair with
// the least completion time; fixed ops only consider their fixed machine.
// Returns the order, choices, and decoded fragment.
struct GreedyResult {
  std::vector<int> order;
  std::vector<MachineId> machine_choice;  // parallel to sub.ops
  DispatchResult decoded;
};

// `preset` optionally pins machines for ops beyond sub.fixed (warm-start
// hints); sub.fixed wins on conflict.
GreedyResult greedy_dispatch(const Subproblem& sub,
                             const std::unordered_map<OpId, MachineId>* preset = nullptr);

}  // namespace graphrho
