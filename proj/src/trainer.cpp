#include "graphrho/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphrho/binio.hpp"
#include "graphrho/cpm.hpp"
#include "graphrho/rng.hpp"

namespace graphrho {

// ---------------------------------------------------------------------------
// supervision data collection
// ---------------------------------------------------------------------------

namespace {

SolveResult collect_solve(const Subproblem& sub, const SubsolverConfig& cfg, uint64_t seed) {
  if (cfg.kind == SubsolverConfig::Kind::exact) return solve_exact(sub, cfg.exact_node_limit);
  HeuristicParams p = cfg.heuristic;
  p.seed = seed;
  return solve_heuristic(sub, p);
}

// Record waiting for the next window's solve (LabelOracle::next_window).
struct PendingRecord {
  LabeledGraph record;                 // y_fix empty until finalized
  std::vector<OpId> candidates;        // per candidate row
  std::vector<MachineId> prev_machine;
};

std::vector<LabeledGraph> collect_one(const Instance& inst, const CollectConfig& cfg) {
  RhoConfig rc = cfg.rho;
  rc.policy = Policy::default_rho;
  rc.validate();

  std::vector<LabeledGraph> out;
  RhoState state = RhoState::create(inst);
  std::optional<PendingRecord> pending;

  auto finalize_pending = [&](const std::unordered_map<OpId, int>* window_index,
                              const SolveResult* res) {
    if (!pending) return;
    PendingRecord& p = *pending;
    p.record.y_fix.resize(p.candidates.size());
    for (size_t c = 0; c < p.candidates.size(); ++c) {
      OpId o = p.candidates[c];
      MachineId oracle_machine = -1;
      if (window_index && res) {
        auto it = window_index->find(o);
        if (it != window_index->end())
          oracle_machine = res->assignment[static_cast<size_t>(it->second)].machine;
      }
      if (oracle_machine < 0) oracle_machine = state.committed[static_cast<size_t>(o)].machine;
      p.record.y_fix[c] = (oracle_machine == p.prev_machine[c]) ? 1 : 0;
    }
    out.push_back(std::move(p.record));
    pending.reset();
  };

  while (state.committed_count < inst.total_ops()) {
    Subproblem sub = build_window(state, inst, rc.window_w, rc.window_rule);
    std::vector<OpId> overlap;
    for (OpId o : sub.ops)
      if (state.prev.has(o)) overlap.push_back(o);

    std::optional<HeteroGraph> graph;
    if (!overlap.empty()) graph = encode(sub, state.prev, rc.window_w);

    uint64_t window_seed = mix_seed(rc.seed, static_cast<uint64_t>(state.iteration));
    SolveResult res = collect_solve(sub, rc.subsolver, window_seed);

    std::unordered_map<OpId, int> window_index;
    for (int i = 0; i < sub.size(); ++i) window_index[sub.ops[static_cast<size_t>(i)]] = i;

    finalize_pending(&window_index, &res);

    DisjunctiveGraph fg =
        build_fragment_graph(inst, sub.ops, res.assignment, sub.job_ready, sub.machine_ready);
    SlackReport rep = compute_slack(fg);

    if (graph) {
      LabeledGraph lg;
      lg.instance_seed = inst.seed;
      lg.iter = state.iteration;
      lg.y_crit.resize(graph->candidate_rows.size());
      std::vector<OpId> candidates;
      std::vector<MachineId> prev_machines;
      for (size_t c = 0; c < graph->candidate_rows.size(); ++c) {
        OpId o = graph->window_ops[static_cast<size_t>(graph->candidate_rows[c])];
        candidates.push_back(o);
        prev_machines.push_back(state.prev.assign.at(o).machine);
        // node order in the fragment graph equals window order
        lg.y_crit[c] = rep.per_node[static_cast<size_t>(window_index.at(o))].critical ? 1 : 0;
      }
      lg.graph = std::move(*graph);
      if (cfg.oracle == LabelOracle::current_window) {
        lg.y_fix.resize(candidates.size());
        for (size_t c = 0; c < candidates.size(); ++c) {
          MachineId oracle_machine =
              res.assignment[static_cast<size_t>(window_index.at(candidates[c]))].machine;
          lg.y_fix[c] = (oracle_machine == prev_machines[c]) ? 1 : 0;
        }
        out.push_back(std::move(lg));
      } else {
        pending = PendingRecord{std::move(lg), std::move(candidates), std::move(prev_machines)};
      }
    }

    PrevContext next_prev;
    for (int i = 0; i < fg.size(); ++i)
      next_prev.slack[fg.ops[static_cast<size_t>(i)]] = rep.per_node[static_cast<size_t>(i)];
    next_prev.prev_makespan = rep.makespan;
    for (int i = 0; i < sub.size(); ++i)
      next_prev.assign[sub.ops[static_cast<size_t>(i)]] = res.assignment[static_cast<size_t>(i)];

    commit_step(state, inst, sub, res, rc.step_s);
    state.prev = std::move(next_prev);
    state.prev_window = sub.ops;
    ++state.iteration;
  }
  finalize_pending(nullptr, nullptr);
  return out;
}

}  // namespace

std::vector<LabeledGraph> collect_dataset(const std::vector<Instance>& instances,
                                          const CollectConfig& cfg) {
  std::vector<std::vector<LabeledGraph>> per_instance(instances.size());
  const int n = static_cast<int>(instances.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel && n > 1)
  for (int i = 0; i < n; ++i)
    per_instance[static_cast<size_t>(i)] = collect_one(instances[static_cast<size_t>(i)], cfg);

  std::vector<LabeledGraph> out;
  for (auto& v : per_instance)
    for (auto& lg : v) out.push_back(std::move(lg));
  return out;
}

// ---------------------------------------------------------------------------
// loss
// ---------------------------------------------------------------------------

LossResult bce_loss(std::span<const double> yhat_fix, std::span<const double> yhat_crit,
                    std::span<const uint8_t> y_fix, std::span<const uint8_t> y_crit,
                    double lambda) {
  const size_t n = yhat_fix.size();
  if (n == 0 || yhat_crit.size() != n || y_fix.size() != n || y_crit.size() != n)
    throw std::invalid_argument("bce_loss: vector sizes mismatch or empty");
  if (lambda < 0) throw std::invalid_argument("bce_loss: lambda must be >= 0");

  constexpr double kEps = 1e-7;
  LossResult out;
  out.d_yfix.resize(n);
  out.d_ycrit.resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    double pf = std::clamp(yhat_fix[i], kEps, 1.0 - kEps);
    double pc = std::clamp(yhat_crit[i], kEps, 1.0 - kEps);
    double yf = y_fix[i] ? 1.0 : 0.0;
    double yc = y_crit[i] ? 1.0 : 0.0;
    out.l_fix -= (yf * std::log(pf) + (1.0 - yf) * std::log(1.0 - pf)) * inv_n;
    out.l_crit -= (yc * std::log(pc) + (1.0 - yc) * std::log(1.0 - pc)) * inv_n;
    out.d_yfix[i] = (-yf / pf + (1.0 - yf) / (1.0 - pf)) * inv_n;
    out.d_ycrit[i] = lambda * (-yc / pc + (1.0 - yc) / (1.0 - pc)) * inv_n;
  }
  out.total = out.l_fix + lambda * out.l_crit;
  return out;
}

// ---------------------------------------------------------------------------
// batch gradient (OpenMP kernel with a serial reference path)
// ---------------------------------------------------------------------------

BatchGrad batch_loss_grad(const std::vector<LabeledGraph>& data, std::span<const int> batch,
                          const ModelParams& params, double lambda, uint64_t dropout_seed,
                          bool training, bool parallel) {
  const int b = static_cast<int>(batch.size());
  if (b == 0) throw std::invalid_argument("batch_loss_grad: empty batch");
  std::vector<std::vector<double>> grads(static_cast<size_t>(b));
  std::vector<std::array<double, 3>> losses(static_cast<size_t>(b));

#pragma omp parallel for schedule(static) if (parallel && b > 1)
  for (int i = 0; i < b; ++i) {
    const LabeledGraph& lg = data[static_cast<size_t>(batch[static_cast<size_t>(i)])];
    ForwardTape tape;
    ForwardResult fr = gnn_forward(lg.graph, params, training,
                                   mix_seed(dropout_seed, static_cast<uint64_t>(batch[static_cast<size_t>(i)])),
                                   &tape);
    LossResult lr = bce_loss(fr.y_fix, fr.y_crit, lg.y_fix, lg.y_crit, lambda);
    grads[static_cast<size_t>(i)] = gnn_backward(lg.graph, params, tape, lr.d_yfix, lr.d_ycrit);
    losses[static_cast<size_t>(i)] = {lr.l_fix, lr.l_crit, lr.total};
  }

  // fixed-order reduction keeps the result bitwise identical at any thread count
  BatchGrad out;
  out.grad.assign(params.layout.total(), 0.0);
  const double inv = 1.0 / static_cast<double>(b);
  for (int i = 0; i < b; ++i) {
    const auto& g = grads[static_cast<size_t>(i)];
    for (size_t k = 0; k < g.size(); ++k) out.grad[k] += inv * g[k];
    out.l_fix += inv * losses[static_cast<size_t>(i)][0];
    out.l_crit += inv * losses[static_cast<size_t>(i)][1];
    out.l_total += inv * losses[static_cast<size_t>(i)][2];
  }
  return out;
}

// ---------------------------------------------------------------------------
// training loop
// ---------------------------------------------------------------------------

double cosine_lr(double lr0, int64_t step, int64_t total_steps) {
  if (total_steps <= 1) return step == 0 ? lr0 : 0.0;
  double x = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  return lr0 * 0.5 * (1.0 + std::cos(x * 3.14159265358979323846));
}

namespace {

struct AdamState {
  std::vector<double> m, v;
  int64_t t = 0;

  explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::vector<double>& p, const std::vector<double>& g, double lr, double wd) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++t;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
    }
  }
};

struct ValScore {
  double l_total = 0;
  std::optional<double> auc_fix, auc_crit;
};

ValScore validate_model(const ModelParams& params, const std::vector<LabeledGraph>& data,
                        std::span<const int> idx, double lambda) {
  ValScore out;
  std::vector<double> sf, sc;
  std::vector<uint8_t> lf, lc;
  double loss_sum = 0;
  for (int i : idx) {
    const LabeledGraph& lg = data[static_cast<size_t>(i)];
    ForwardResult fr = gnn_forward(lg.graph, params, /*training=*/false, 0, nullptr);
    LossResult lr = bce_loss(fr.y_fix, fr.y_crit, lg.y_fix, lg.y_crit, lambda);
    loss_sum += lr.total;
    sf.insert(sf.end(), fr.y_fix.begin(), fr.y_fix.end());
    sc.insert(sc.end(), fr.y_crit.begin(), fr.y_crit.end());
    lf.insert(lf.end(), lg.y_fix.begin(), lg.y_fix.end());
    lc.insert(lc.end(), lg.y_crit.begin(), lg.y_crit.end());
  }
  out.l_total = loss_sum / static_cast<double>(idx.size());
  out.auc_fix = auc_score(sf, lf);
  out.auc_crit = auc_score(sc, lc);
  return out;
}

}  // namespace

TrainResult train(const std::vector<LabeledGraph>& dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.lr <= 0) throw std::invalid_argument("train: lr must be > 0");
  if (cfg.lambda < 0) throw std::invalid_argument("train: lambda must be >= 0");
  cfg.model.validate();
  for (const auto& lg : dataset)
    if (lg.y_fix.size() != lg.graph.candidate_rows.size() ||
        lg.y_crit.size() != lg.graph.candidate_rows.size() || lg.y_fix.empty())
      throw std::invalid_argument("train: labels misaligned with candidates");

  const int n = static_cast<int>(dataset.size());
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng split_rng(mix_seed(cfg.seed, 0x5911));
  split_rng.shuffle(idx);
  const int val_n = n / 10;
  std::vector<int> val_idx(idx.begin(), idx.begin() + val_n);
  std::vector<int> train_idx(idx.begin() + val_n, idx.end());
  if (val_idx.empty()) val_idx = train_idx;  // tiny datasets validate on train

  ModelParams params = ModelParams::init(cfg.model, mix_seed(cfg.seed, 0x1217));
  AdamState adam(params.data.size());

  const int batch = std::max(1, cfg.batch_size);
  const int64_t steps_per_epoch =
      (static_cast<int64_t>(train_idx.size()) + batch - 1) / batch;
  const int64_t total_steps = steps_per_epoch * cfg.epochs;

  TrainResult result{ModelParams(cfg.model), {}, -1};
  double best_val = std::numeric_limits<double>::infinity();
  int64_t step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng epoch_rng(mix_seed(cfg.seed, 0xE000 + static_cast<uint64_t>(epoch)));
    epoch_rng.shuffle(train_idx);
    uint64_t drop_seed = mix_seed(cfg.seed, 0xD600 + static_cast<uint64_t>(epoch));

    double ep_fix = 0, ep_crit = 0, ep_total = 0;
    double lr_first = cfg.cosine ? cosine_lr(cfg.lr, step, total_steps) : cfg.lr;
    int64_t samples = 0;
    for (size_t ofs = 0; ofs < train_idx.size(); ofs += static_cast<size_t>(batch)) {
      size_t len = std::min(static_cast<size_t>(batch), train_idx.size() - ofs);
      std::span<const int> chunk(train_idx.data() + ofs, len);
      BatchGrad bg =
          batch_loss_grad(dataset, chunk, params, cfg.lambda, drop_seed, true, cfg.parallel);
      if (!std::isfinite(bg.l_total))
        throw std::runtime_error("train: diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch));
      double lr = cfg.cosine ? cosine_lr(cfg.lr, step, total_steps) : cfg.lr;
      adam.step(params.data, bg.grad, lr, cfg.weight_decay);
      ++step;
      ep_fix += bg.l_fix * static_cast<double>(len);
      ep_crit += bg.l_crit * static_cast<double>(len);
      ep_total += bg.l_total * static_cast<double>(len);
      samples += static_cast<int64_t>(len);
    }

    ValScore val = validate_model(params, dataset, val_idx, cfg.lambda);
    EpochLog log;
    log.epoch = epoch;
    log.l_fix = ep_fix / static_cast<double>(samples);
    log.l_crit = ep_crit / static_cast<double>(samples);
    log.l_total = ep_total / static_cast<double>(samples);
    log.val_l_total = val.l_total;
    log.val_auc_fix = val.auc_fix;
    log.val_auc_crit = val.auc_crit;
    log.lr = lr_first;
    result.log.push_back(log);

    if (val.l_total < best_val) {
      best_val = val.l_total;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  if (result.best_epoch < 0) {
    result.params = params;
    result.best_epoch = cfg.epochs - 1;
  }
  return result;
}

std::string training_log_csv(const std::vector<EpochLog>& log) {
  std::ostringstream out;
  out << "epoch,l_fix,l_crit,l_total,val_auc_fix,val_auc_crit,lr\n";
  for (const auto& e : log) {
    out << e.epoch << ',' << e.l_fix << ',' << e.l_crit << ',' << e.l_total << ',';
    if (e.val_auc_fix) out << *e.val_auc_fix;
    out << ',';
    if (e.val_auc_crit) out << *e.val_auc_crit;
    out << ',' << e.lr << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

std::optional<double> auc_score(std::span<const double> scores, std::span<const uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
  size_t pos = 0;
  for (uint8_t l : labels) pos += l ? 1 : 0;
  size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) return std::nullopt;

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);  // 1-based average rank
    for (size_t q = i; q <= j; ++q)
      if (labels[order[q]]) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  double auc = (rank_sum_pos - static_cast<double>(pos) * (static_cast<double>(pos) + 1.0) / 2.0) /
               (static_cast<double>(pos) * static_cast<double>(neg));
  return auc;
}

EvalMetrics evaluate(const ModelParams& model, const std::vector<LabeledGraph>& dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  std::vector<double> sf, sc;
  std::vector<uint8_t> lf, lc;
  for (const auto& lg : dataset) {
    ForwardResult fr = gnn_forward(lg.graph, model, false, 0, nullptr);
    sf.insert(sf.end(), fr.y_fix.begin(), fr.y_fix.end());
    sc.insert(sc.end(), fr.y_crit.begin(), fr.y_crit.end());
    lf.insert(lf.end(), lg.y_fix.begin(), lg.y_fix.end());
    lc.insert(lc.end(), lg.y_crit.begin(), lg.y_crit.end());
  }
  auto head = [](const std::vector<double>& s, const std::vector<uint8_t>& l) {
    HeadMetrics m;
    m.auc = auc_score(s, l);
    size_t correct = 0, pos = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      correct += ((s[i] >= 0.5) == (l[i] != 0)) ? 1 : 0;
      pos += l[i] ? 1 : 0;
    }
    m.accuracy_at_half = s.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(s.size());
    m.positive_rate = s.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(s.size());
    return m;
  };
  EvalMetrics out;
  out.fix = head(sf, lf);
  out.crit = head(sc, lc);
  out.candidates = sf.size();
  return out;
}

// ---------------------------------------------------------------------------
// dataset container
// ---------------------------------------------------------------------------

namespace {
constexpr char kDatasetMagic[8] = {'G', 'R', 'H', 'O', '-', 'D', 'S', '1'};

void put_matrix(std::string& buf, const Matrix& m) {
  binio::put<int32_t>(buf, m.rows);
  binio::put<int32_t>(buf, m.cols);
  buf.append(reinterpret_cast<const char*>(m.a.data()), m.a.size() * sizeof(double));
}

Matrix take_matrix(const std::string& buf, size_t& pos) {
  int32_t rows = binio::take<int32_t>(buf, pos);
  int32_t cols = binio::take<int32_t>(buf, pos);
  if (rows < 0 || cols < 0) throw std::runtime_error("dataset load error: bad matrix shape");
  Matrix m(rows, cols);
  size_t bytes = m.a.size() * sizeof(double);
  if (pos + bytes > buf.size()) throw std::runtime_error("dataset load error: truncated stream");
  std::memcpy(m.a.data(), buf.data() + pos, bytes);
  pos += bytes;
  return m;
}

template <typename T>
void put_vec(std::string& buf, const std::vector<T>& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  binio::put<uint64_t>(buf, v.size());
  buf.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

template <typename T>
std::vector<T> take_vec(const std::string& buf, size_t& pos) {
  auto n = binio::take<uint64_t>(buf, pos);
  size_t bytes = static_cast<size_t>(n) * sizeof(T);
  if (pos + bytes > buf.size()) throw std::runtime_error("dataset load error: truncated stream");
  std::vector<T> v(static_cast<size_t>(n));
  std::memcpy(v.data(), buf.data() + pos, bytes);
  pos += bytes;
  return v;
}

}  // namespace

void save_dataset_file(const std::vector<LabeledGraph>& data, const std::string& path) {
  using namespace binio;
  std::string payload;
  put_str(payload, kSchemaTag);
  put<uint64_t>(payload, data.size());
  for (const auto& lg : data) {
    put<uint64_t>(payload, lg.instance_seed);
    put<int32_t>(payload, lg.iter);
    put_matrix(payload, lg.graph.op_x);
    put_matrix(payload, lg.graph.ma_x);
    for (int r = 0; r < kNumRelations; ++r) {
      const EdgeSet& e = lg.graph.edges[static_cast<size_t>(r)];
      put_vec(payload, e.src);
      put_vec(payload, e.dst);
      put<uint64_t>(payload, e.feat.size());
      for (const auto& f : e.feat) {
        put<double>(payload, f[0]);
        put<double>(payload, f[1]);
      }
    }
    put_vec(payload, lg.graph.window_ops);
    put_vec(payload, lg.graph.op_machine_row);
    put_vec(payload, lg.graph.candidate_rows);
    put_vec(payload, lg.y_fix);
    put_vec(payload, lg.y_crit);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  write_framed(out, kDatasetMagic, payload);
}

std::vector<LabeledGraph> load_dataset_file(const std::string& path) {
  using namespace binio;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string payload = read_framed(in, kDatasetMagic, "dataset");
  size_t pos = 0;
  std::string schema = take_str(payload, pos);
  if (schema != kSchemaTag)
    throw std::runtime_error("dataset load error: schema tag '" + schema + "' unsupported");
  auto count = take<uint64_t>(payload, pos);
  std::vector<LabeledGraph> data;
  data.reserve(static_cast<size_t>(count));
  for (uint64_t i = 0; i < count; ++i) {
    LabeledGraph lg;
    lg.instance_seed = take<uint64_t>(payload, pos);
    lg.iter = take<int32_t>(payload, pos);
    lg.graph.op_x = take_matrix(payload, pos);
    lg.graph.ma_x = take_matrix(payload, pos);
    for (int r = 0; r < kNumRelations; ++r) {
      EdgeSet& e = lg.graph.edges[static_cast<size_t>(r)];
      e.src = take_vec<int32_t>(payload, pos);
      e.dst = take_vec<int32_t>(payload, pos);
      auto nf = take<uint64_t>(payload, pos);
      if (nf != e.src.size() || e.dst.size() != e.src.size())
        throw std::runtime_error("dataset load error: edge arrays misaligned");
      e.feat.resize(static_cast<size_t>(nf));
      for (auto& f : e.feat) {
        f[0] = take<double>(payload, pos);
        f[1] = take<double>(payload, pos);
      }
    }
    lg.graph.window_ops = take_vec<OpId>(payload, pos);
    lg.graph.op_machine_row = take_vec<int32_t>(payload, pos);
    lg.graph.candidate_rows = take_vec<int32_t>(payload, pos);
    lg.y_fix = take_vec<uint8_t>(payload, pos);
    lg.y_crit = take_vec<uint8_t>(payload, pos);
    if (lg.y_fix.size() != lg.graph.candidate_rows.size() ||
        lg.y_crit.size() != lg.graph.candidate_rows.size())
      throw std::runtime_error("dataset load error: labels misaligned with candidates");
    data.push_back(std::move(lg));
  }
  return data;
}

}  // namespace graphrho
