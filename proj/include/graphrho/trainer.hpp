#pragma once

#include <optional>

#include "graphrho/rho.hpp"

namespace graphrho {

struct LabeledGraph {
  HeteroGraph graph;
  std::vector<uint8_t> y_fix;   // aligned with graph.candidate_rows
  std::vector<uint8_t> y_crit;
  uint64_t instance_seed = 0;
  int iter = 0;
};

enum class LabelOracle { current_window, next_window };

struct CollectConfig {
  RhoConfig rho;  // policy forced to default; labels never use a model
  LabelOracle oracle = LabelOracle::current_window;
  bool parallel = true;  // across instances
};

// Runs default RHO per instance; at every iteration with a non-empty overlap
// emits one LabeledGraph: fix labels compare the previous machine assignment
// against the lookahead oracle solve (the unfixed solve of the current window
// by default, the next window's under LabelOracle::next_window), criticality
// labels come from zero slack in the window's default local schedule.
std::vector<LabeledGraph> collect_dataset(const std::vector<Instance>& instances,
                                          const CollectConfig& cfg);

struct LossResult {
  double total = 0, l_fix = 0, l_crit = 0;
  std::vector<double> d_yfix;  // dL_total / dyhat_fix, per candidate
  std::vector<double> d_ycrit;
};

// Mean binary cross-entropies over the candidates; total = fix + lambda*crit.
// Predictions are clamped to [1e-7, 1-1e-7] before the logs.
LossResult bce_loss(std::span<const double> yhat_fix, std::span<const double> yhat_crit,
                    std::span<const uint8_t> y_fix, std::span<const uint8_t> y_crit, double lambda);

struct TrainConfig {
  double lambda = 0.5;
  double lr = 1e-4;
  int epochs = 200;
  int batch_size = 64;
  double weight_decay = 0.01;
  uint64_t seed = 0;
  bool cosine = true;  // cosine decay to zero over all optimizer steps
  GnnConfig model;     // dropout lives here
  bool parallel = true;  // across graphs in a batch
};

struct EpochLog {
  int epoch = 0;
  double l_fix = 0, l_crit = 0, l_total = 0;
  double val_l_total = 0;
  std::optional<double> val_auc_fix, val_auc_crit;
  double lr = 0;
};

struct TrainResult {
  ModelParams params;  // best validation checkpoint
  std::vector<EpochLog> log;
  int best_epoch = -1;
};

// Mini-batch AdamW (beta1=0.9, beta2=0.999, eps=1e-8, decoupled weight decay)
// with an optional cosine schedule. Deterministic for a fixed
// (dataset, config) regardless of thread count; aborts on divergence.
TrainResult train(const std::vector<LabeledGraph>& dataset, const TrainConfig& cfg);

// CSV: epoch,l_fix,l_crit,l_total,val_auc_fix,val_auc_crit,lr
std::string training_log_csv(const std::vector<EpochLog>& log);

double cosine_lr(double lr0, int64_t step, int64_t total_steps);

struct HeadMetrics {
  std::optional<double> auc;  // absent for single-class data
  double accuracy_at_half = 0;
  double positive_rate = 0;
};

struct EvalMetrics {
  HeadMetrics fix, crit;
  size_t candidates = 0;
};

EvalMetrics evaluate(const ModelParams& model, const std::vector<LabeledGraph>& dataset);

// Rank-statistic AUC with average ranks on ties; nullopt when single-class.
std::optional<double> auc_score(std::span<const double> scores, std::span<const uint8_t> labels);

// Mean loss and gradient over a batch of graphs; per-graph gradients are
// reduced in batch order, so the parallel path is bitwise identical to the
// serial reference.
struct BatchGrad {
  std::vector<double> grad;
  double l_fix = 0, l_crit = 0, l_total = 0;
};

BatchGrad batch_loss_grad(const std::vector<LabeledGraph>& data, std::span<const int> batch,
                          const ModelParams& params, double lambda, uint64_t dropout_seed,
                          bool training, bool parallel);

// Dataset container: magic, schema tag, records, checksum. Bit-exact
// round-trip; truncation or checksum mismatch throws.
void save_dataset_file(const std::vector<LabeledGraph>& data, const std::string& path);
std::vector<LabeledGraph> load_dataset_file(const std::string& path);

}  // namespace graphrho
