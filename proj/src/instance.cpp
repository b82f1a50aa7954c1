#include "graphrho/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphrho/rng.hpp"

namespace graphrho {

Time Operation::min_ptime() const {
  Time m = options.front().ptime;
  for (const auto& o : options) m = std::min(m, o.ptime);
  return m;
}

Time Operation::max_ptime() const {
  Time m = options.front().ptime;
  for (const auto& o : options) m = std::max(m, o.ptime);
  return m;
}

const MachineOption* Operation::find_option(MachineId m) const {
  for (const auto& o : options)
    if (o.machine == m) return &o;
  return nullptr;
}

void Instance::finalize() {
  if (num_machines < 1) throw std::invalid_argument("instance needs at least one machine");
  if (jobs.empty()) throw std::invalid_argument("instance needs at least one job");
  job_offset_.assign(jobs.size(), 0);
  op_job_.clear();
  op_pos_.clear();
  total_ops_ = 0;
  for (size_t j = 0; j < jobs.size(); ++j) {
    job_offset_[j] = total_ops_;
    if (jobs[j].ops.empty()) throw std::invalid_argument("job operation lists must be non-empty");
    for (size_t k = 0; k < jobs[j].ops.size(); ++k) {
      const Operation& op = jobs[j].ops[k];
      if (op.job != static_cast<JobId>(j) || op.pos != static_cast<int>(k))
        throw std::invalid_argument("operation job/pos fields inconsistent with layout");
      if (op.options.empty())
        throw std::invalid_argument("every operation needs at least one compatible machine");
      std::vector<bool> seen(static_cast<size_t>(num_machines), false);
      for (const auto& mo : op.options) {
        if (mo.machine < 0 || mo.machine >= num_machines)
          throw std::invalid_argument("machine id out of range");
        if (seen[static_cast<size_t>(mo.machine)])
          throw std::invalid_argument("duplicate machine in option list");
        seen[static_cast<size_t>(mo.machine)] = true;
        if (mo.ptime < 1) throw std::invalid_argument("processing times must be >= 1");
      }
      op_job_.push_back(static_cast<JobId>(j));
      op_pos_.push_back(static_cast<int>(k));
      ++total_ops_;
    }
  }
}

Instance generate_instance(const GenParams& p) {
  if (p.num_machines < 1 || p.num_jobs < 1 || p.ops_per_job < 1)
    throw std::invalid_argument("generate_instance: counts must be >= 1");
  if (p.flex_min < 1 || p.flex_min > p.flex_max || p.flex_max > p.num_machines)
    throw std::invalid_argument("generate_instance: invalid flexibility range");
  if (p.p_min < 1 || p.p_min > p.p_max)
    throw std::invalid_argument("generate_instance: invalid processing-time range");

  Rng rng(p.seed);
  Instance inst;
  inst.num_machines = p.num_machines;
  inst.seed = p.seed;
  inst.jobs.resize(static_cast<size_t>(p.num_jobs));
  std::vector<MachineId> pool(static_cast<size_t>(p.num_machines));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < p.num_jobs; ++j) {
    Job& job = inst.jobs[static_cast<size_t>(j)];
    job.ops.resize(static_cast<size_t>(p.ops_per_job));
    for (int k = 0; k < p.ops_per_job; ++k) {
      Operation& op = job.ops[static_cast<size_t>(k)];
      op.job = j;
      op.pos = k;
      int flex = static_cast<int>(rng.uniform_int(p.flex_min, p.flex_max));
      // partial Fisher-Yates: draw `flex` machines without replacement
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < flex; ++i) {
        int64_t r = rng.uniform_int(i, p.num_machines - 1);
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(r)]);
      }
      op.options.resize(static_cast<size_t>(flex));
      for (int i = 0; i < flex; ++i) {
        op.options[static_cast<size_t>(i)].machine = pool[static_cast<size_t>(i)];
        op.options[static_cast<size_t>(i)].ptime = rng.uniform_int(p.p_min, p.p_max);
      }
    }
  }
  inst.finalize();
  return inst;
}

ParseError::ParseError(int line_no, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

namespace {

// One logical line of whitespace-separated integers.
struct TokenLine {
  int line_no = 0;
  std::vector<long long> tokens;
};

std::vector<TokenLine> tokenize_lines(std::istream& in) {
  std::vector<TokenLine> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    TokenLine tl;
    tl.line_no = line_no;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        tl.tokens.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(line_no, "expected an integer, got '" + tok + "'");
      }
    }
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  auto lines = tokenize_lines(in);
  if (lines.empty()) throw ParseError(1, "empty instance file");
  const TokenLine& head = lines[0];
  if (head.tokens.size() != 2)
    throw ParseError(head.line_no, "expected '<num_jobs> <num_machines>' header");
  long long num_jobs = head.tokens[0];
  long long num_machines = head.tokens[1];
  if (num_jobs < 1 || num_machines < 1)
    throw ParseError(head.line_no, "job and machine counts must be >= 1");

  Instance inst;
  inst.num_machines = static_cast<int>(num_machines);
  inst.jobs.resize(static_cast<size_t>(num_jobs));
  if (static_cast<long long>(lines.size()) - 1 < num_jobs)
    throw ParseError(lines.back().line_no, "fewer job lines than the declared job count");
  if (static_cast<long long>(lines.size()) - 1 > num_jobs)
    throw ParseError(lines[static_cast<size_t>(num_jobs) + 1].line_no,
                     "trailing content after the last job line");

  for (long long j = 0; j < num_jobs; ++j) {
    const TokenLine& tl = lines[static_cast<size_t>(j) + 1];
    const auto& t = tl.tokens;
    size_t i = 0;
    auto take = [&](const char* what) {
      if (i >= t.size()) throw ParseError(tl.line_no, std::string("unexpected end of line, wanted ") + what);
      return t[i++];
    };
    long long n_ops = take("operation count");
    if (n_ops < 1) throw ParseError(tl.line_no, "job operation count must be >= 1");
    Job& job = inst.jobs[static_cast<size_t>(j)];
    job.ops.resize(static_cast<size_t>(n_ops));
    for (long long k = 0; k < n_ops; ++k) {
      Operation& op = job.ops[static_cast<size_t>(k)];
      op.job = static_cast<JobId>(j);
      op.pos = static_cast<int>(k);
      long long n_opt = take("option count");
      if (n_opt < 1) throw ParseError(tl.line_no, "option count must be >= 1");
      op.options.resize(static_cast<size_t>(n_opt));
      for (long long q = 0; q < n_opt; ++q) {
        long long m = take("machine id");
        long long pt = take("processing time");
        if (m < 1 || m > num_machines)
          throw ParseError(tl.line_no, "machine id " + std::to_string(m) + " out of range [1, " +
                                           std::to_string(num_machines) + "]");
        if (pt < 1) throw ParseError(tl.line_no, "processing time must be >= 1");
        op.options[static_cast<size_t>(q)] = {static_cast<MachineId>(m - 1), pt};
      }
    }
    if (i != t.size()) throw ParseError(tl.line_no, "trailing tokens after the last operation");
  }
  try {
    inst.finalize();
  } catch (const std::invalid_argument& e) {
    throw ParseError(lines[0].line_no, e.what());
  }
  return inst;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.num_jobs() << ' ' << inst.num_machines << '\n';
  for (const Job& job : inst.jobs) {
    out << job.ops.size();
    for (const Operation& op : job.ops) {
      out << ' ' << op.options.size();
      for (const MachineOption& mo : op.options) out << ' ' << (mo.machine + 1) << ' ' << mo.ptime;
    }
    out << '\n';
  }
  return out.str();
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return parse_instance(in);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << serialize_instance(inst);
}

}  // namespace graphrho
