#include "graphrho/subproblem.hpp"

#include <stdexcept>
#include <unordered_set>

namespace graphrho {

void Subproblem::check() const {
  if (!inst) throw std::invalid_argument("subproblem: missing instance");
  std::unordered_set<OpId> in_window(ops.begin(), ops.end());
  if (in_window.size() != ops.size()) throw std::invalid_argument("subproblem: duplicate ops");
  for (OpId o : ops)
    if (o < 0 || o >= inst->total_ops()) throw std::invalid_argument("subproblem: op id out of range");
  for (const auto& [o, m] : fixed) {
    if (!in_window.count(o)) throw std::invalid_argument("subproblem: fixed op outside window");
    if (!inst->op(o).find_option(m))
      throw std::invalid_argument("subproblem: fixed machine incompatible with op");
  }
  for (Time t : job_ready)
    if (t < 0) throw std::invalid_argument("subproblem: negative job ready time");
  for (Time t : machine_ready)
    if (t < 0) throw std::invalid_argument("subproblem: negative machine ready time");

  // within-job contiguity: included positions of each job form a contiguous run
  std::vector<int> lo(static_cast<size_t>(inst->num_jobs()), -1);
  std::vector<int> hi(static_cast<size_t>(inst->num_jobs()), -1);
  std::vector<int> cnt(static_cast<size_t>(inst->num_jobs()), 0);
  for (OpId o : ops) {
    JobId j = inst->op_job(o);
    int k = inst->op_pos(o);
    auto js = static_cast<size_t>(j);
    lo[js] = (lo[js] < 0) ? k : std::min(lo[js], k);
    hi[js] = std::max(hi[js], k);
    ++cnt[js];
  }
  for (JobId j = 0; j < inst->num_jobs(); ++j) {
    auto js = static_cast<size_t>(j);
    if (cnt[js] > 0 && hi[js] - lo[js] + 1 != cnt[js])
      throw std::invalid_argument("subproblem: job slice not contiguous");
  }
}

}  // namespace graphrho
