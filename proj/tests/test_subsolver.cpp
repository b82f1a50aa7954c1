#include "doctest.h"
#include "graphrho/subsolver.hpp"
#include "support.hpp"

using namespace graphrho;

namespace {

// the two-job benchmark instance used across the solver examples
Instance t1_instance() {
  Instance inst;
  inst.num_machines = 2;
  inst.jobs.resize(2);
  inst.jobs[0].ops.push_back({0, 0, {{0, 3}, {1, 5}}});
  inst.jobs[0].ops.push_back({0, 1, {{0, 2}, {1, 2}}});
  inst.jobs[1].ops.push_back({1, 0, {{1, 4}}});
  inst.jobs[1].ops.push_back({1, 1, {{0, 3}, {1, 1}}});
  inst.finalize();
  return inst;
}

Schedule to_schedule(const Subproblem& sub, const SolveResult& res) {
  Schedule s;
  s.ops.assign(static_cast<size_t>(sub.inst->total_ops()), Assignment{});
  for (int i = 0; i < sub.size(); ++i)
    s.ops[static_cast<size_t>(sub.ops[static_cast<size_t>(i)])] = res.assignment[static_cast<size_t>(i)];
  s.makespan = res.makespan_local;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("subsolver");

TEST_CASE("T1: exact equals exhaustive enumeration (frozen optimum 5)") {
  Instance inst = t1_instance();
  Subproblem sub = testing::whole_instance_window(inst);
  CHECK(testing::enumerate_optimal(sub) == 5);
  SolveResult res = solve_exact(sub, 1'000'000);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(res.makespan_local == 5);
  CHECK(validate_schedule(inst, to_schedule(sub, res)).empty());
}

TEST_CASE("T1 with a fixed assignment: restricted optimum 10, dominated") {
  Instance inst = t1_instance();
  Subproblem sub = testing::whole_instance_window(inst);
  sub.fixed[0] = 1;  // first op of job 0 forced onto machine 1
  CHECK(testing::enumerate_optimal(sub) == 10);
  SolveResult res = solve_exact(sub, 1'000'000);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(res.makespan_local == 10);
  CHECK(res.makespan_local >= 5);
  CHECK(to_schedule(sub, res).ops[0].machine == 1);
}

TEST_CASE("single chain on one machine: sum of processing times, optimal") {
  Instance inst = testing::chain_instance({3, 2, 4});
  Subproblem sub = testing::whole_instance_window(inst);
  SolveResult res = solve_exact(sub, 1000);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(res.makespan_local == 9);
}

TEST_CASE("exact equals enumeration on random instances") {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    GenParams p{2 + static_cast<int>(seed % 3), 2, 3, 1, 2, 1, 9, 4400 + seed};  // 6 ops
    Instance inst = generate_instance(p);
    Subproblem sub = testing::whole_instance_window(inst);
    // exercise boundary constraints too
    sub.job_ready[0] = 2;
    sub.machine_ready[0] = 1;
    Time oracle = testing::enumerate_optimal(sub);
    SolveResult res = solve_exact(sub, 50'000'000);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(res.makespan_local == oracle);
  }
}

TEST_CASE("exact: fixed machine outside options is infeasible") {
  Instance inst = t1_instance();
  Subproblem sub = testing::whole_instance_window(inst);
  sub.fixed[2] = 0;  // job 1 op 0 only runs on machine 1
  CHECK(solve_exact(sub, 1000).status == SolveStatus::infeasible);
  CHECK(solve_heuristic(sub, HeuristicParams{}).status == SolveStatus::infeasible);
}

TEST_CASE("exact: node limit yields timeout status") {
  Instance inst = generate_instance({3, 3, 3, 2, 3, 1, 9, 5});
  Subproblem sub = testing::whole_instance_window(inst);
  SolveResult res = solve_exact(sub, 3);
  CHECK(res.status == SolveStatus::timeout);
}

TEST_CASE("exact refuses oversized windows") {
  Instance inst = generate_instance({3, 13, 1, 1, 2, 1, 5, 1});
  Subproblem sub = testing::whole_instance_window(inst);
  CHECK_THROWS_AS(solve_exact(sub, 1000), std::invalid_argument);
}

TEST_CASE("fix-dominance: any fixed set can only raise the optimum") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    Instance inst = generate_instance({3, 2, 3, 1, 3, 1, 8, 6200 + seed});
    Subproblem sub = testing::whole_instance_window(inst);
    Time base = solve_exact(sub, 50'000'000).makespan_local;
    Rng rng(seed);
    Subproblem fixed_sub = sub;
    for (OpId o = 0; o < inst.total_ops(); o += 2) {
      const auto& opts = inst.op(o).options;
      fixed_sub.fixed[o] = opts[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(opts.size()) - 1))].machine;
    }
    SolveResult res = solve_exact(fixed_sub, 50'000'000);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(res.makespan_local >= base);
  }
}

TEST_CASE("heuristic: valid fragment with feasible all-fixed set") {
  Instance inst = t1_instance();
  Subproblem sub = testing::whole_instance_window(inst);
  sub.fixed = {{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  HeuristicParams hp;
  hp.budget = SolveBudget::moves(100);
  SolveResult res = solve_heuristic(sub, hp);
  CHECK(res.status == SolveStatus::feasible);
  Schedule s = to_schedule(sub, res);
  CHECK(validate_schedule(inst, s).empty());
  CHECK(s.ops[0].machine == 0);
  CHECK(s.ops[2].machine == 1);
}

TEST_CASE("heuristic tracks the exact optimum on small windows") {
  int within = 0, total = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = generate_instance({3, 3, 3, 1, 3, 1, 9, 7800 + seed});
    Subproblem sub = testing::whole_instance_window(inst);
    Time opt = solve_exact(sub, 50'000'000).makespan_local;
    HeuristicParams hp;
    hp.budget = SolveBudget::moves(3000);
    hp.seed = seed;
    SolveResult res = solve_heuristic(sub, hp);
    REQUIRE(res.status == SolveStatus::feasible);
    CHECK(res.makespan_local >= opt);
    CHECK(validate_schedule(inst, to_schedule(sub, res)).empty());
    ++total;
    if (res.makespan_local <= opt * 115 / 100) ++within;
  }
  CHECK(within >= total - 1);
}

TEST_CASE("heuristic is deterministic under a move budget") {
  Instance inst = generate_instance({4, 4, 4, 1, 4, 1, 15, 321});
  Subproblem sub = testing::whole_instance_window(inst);
  HeuristicParams hp;
  hp.budget = SolveBudget::moves(1500);
  hp.seed = 99;
  SolveResult a = solve_heuristic(sub, hp);
  SolveResult b = solve_heuristic(sub, hp);
  CHECK(a.makespan_local == b.makespan_local);
  CHECK(a.assignment == b.assignment);
  CHECK(a.stats.moves == b.stats.moves);
  hp.seed = 100;
  SolveResult c = solve_heuristic(sub, hp);
  CHECK(validate_schedule(inst, to_schedule(sub, c)).empty());
}

TEST_CASE("anytime monotonicity: the incumbent never worsens") {
  Instance inst = generate_instance({4, 4, 4, 1, 4, 1, 15, 777});
  Subproblem sub = testing::whole_instance_window(inst);
  HeuristicParams hp;
  hp.budget = SolveBudget::moves(2500);
  hp.seed = 5;
  SolveResult res = solve_heuristic(sub, hp);
  REQUIRE(!res.stats.incumbent_history.empty());
  for (size_t i = 1; i < res.stats.incumbent_history.size(); ++i) {
    CHECK(res.stats.incumbent_history[i].second < res.stats.incumbent_history[i - 1].second);
    CHECK(res.stats.incumbent_history[i].first >= res.stats.incumbent_history[i - 1].first);
  }
  CHECK(res.stats.incumbent_history.back().second == res.makespan_local);
}

TEST_CASE("warm start is never worse than the provided incumbent") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Instance inst = generate_instance({3, 3, 3, 1, 3, 1, 9, 880 + seed});
    Subproblem sub = testing::whole_instance_window(inst);
    SolveResult opt = solve_exact(sub, 50'000'000);
    REQUIRE(opt.status == SolveStatus::optimal);

    Subproblem warm_sub = sub;
    for (int i = 0; i < sub.size(); ++i)
      warm_sub.warm_start[sub.ops[static_cast<size_t>(i)]] = opt.assignment[static_cast<size_t>(i)];
    HeuristicParams hp;
    hp.budget = SolveBudget::moves(50);  // too small to rediscover the optimum
    hp.seed = seed;
    SolveResult res = solve_heuristic(warm_sub, hp);
    CHECK(res.makespan_local <= opt.makespan_local);
  }
}

TEST_CASE("greedy dispatch respects fixed machines and ready times") {
  Instance inst = t1_instance();
  Subproblem sub = testing::whole_instance_window(inst);
  sub.fixed[3] = 0;
  sub.machine_ready[0] = 2;
  GreedyResult g = greedy_dispatch(sub);
  CHECK(g.machine_choice[3] == 0);
  Schedule s;
  s.ops.assign(4, Assignment{});
  for (int i = 0; i < 4; ++i) s.ops[static_cast<size_t>(i)] = g.decoded.assignment[static_cast<size_t>(i)];
  s.makespan = g.decoded.makespan;
  CHECK(validate_schedule(inst, s).empty());
  for (int i = 0; i < 4; ++i)
    if (g.decoded.assignment[static_cast<size_t>(i)].machine == 0)
      CHECK(g.decoded.assignment[static_cast<size_t>(i)].start >= 2);
}

TEST_SUITE_END();
