#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphrho/types.hpp"

namespace graphrho {

struct MachineOption {
  MachineId machine = 0;
  Time ptime = 0;

  bool operator==(const MachineOption&) const = default;
};

struct Operation {
  JobId job = 0;
  int pos = 0;  // 0-based position within its job
  std::vector<MachineOption> options;

  Time min_ptime() const;
  Time max_ptime() const;
  // Returns nullptr when the machine is not compatible.
  const MachineOption* find_option(MachineId m) const;

  bool operator==(const Operation&) const = default;
};

struct Job {
  std::vector<Operation> ops;

  bool operator==(const Job&) const = default;
};

// The FJSP instance: machines are identified by 0-based ids, jobs carry an
// ordered operation list. Immutable after construction.
struct Instance {
  int num_machines = 0;
  std::vector<Job> jobs;
  uint64_t seed = 0;  // generation provenance; 0 for parsed files

  int num_jobs() const { return static_cast<int>(jobs.size()); }
  int total_ops() const { return total_ops_; }

  OpId op_id(JobId j, int pos) const { return job_offset_[j] + pos; }
  JobId op_job(OpId o) const { return op_job_[o]; }
  int op_pos(OpId o) const { return op_pos_[o]; }
  const Operation& op(OpId o) const { return jobs[op_job_[o]].ops[op_pos_[o]]; }
  OpId job_first_op(JobId j) const { return job_offset_[j]; }
  int job_size(JobId j) const { return static_cast<int>(jobs[j].ops.size()); }

  // Rebuilds the flat-index tables and checks the structural invariants
  // (non-empty jobs/options, distinct in-range machines, positive times).
  // Must be called after constructing or mutating `jobs` by hand; throws
  // std::invalid_argument when an invariant fails.
  void finalize();

  bool operator==(const Instance& o) const {
    return num_machines == o.num_machines && jobs == o.jobs && seed == o.seed;
  }

 private:
  int total_ops_ = 0;
  std::vector<OpId> job_offset_;
  std::vector<JobId> op_job_;
  std::vector<int> op_pos_;
};

struct GenParams {
  int num_machines = 1;
  int num_jobs = 1;
  int ops_per_job = 1;
  int flex_min = 1;  // compatible-machine count range, inclusive
  int flex_max = 1;
  Time p_min = 1;  // processing-time range, inclusive
  Time p_max = 1;
  uint64_t seed = 0;
};

// Deterministic random instance: per op, the compatible-machine count is
// uniform in [flex_min, flex_max], machines are drawn without replacement,
// processing times uniform in [p_min, p_max]. Pure function of its params.
Instance generate_instance(const GenParams& params);

// Standard FJSP text format (whitespace-delimited; machine ids 1-based in
// files, 0-based in memory):
//   line 1: <num_jobs> <num_machines>
//   one line per job: <n_ops> then per op <n_options> {<machine> <ptime>}...
// Malformed input throws ParseError naming the offending line.
struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what);
  int line;
};

Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace graphrho
