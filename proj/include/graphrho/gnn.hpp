#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphrho/hetgraph.hpp"
#include "graphrho/mat.hpp"

namespace graphrho {

enum class HiddenAct : int32_t { relu = 0, sigmoid = 1 };

struct GnnConfig {
  int d = 64;      // hidden width
  int layers = 2;  // stacked message-passing layers
  int heads = 4;   // attention heads; d must be divisible
  double dropout = 0.1;
  HiddenAct hidden_act = HiddenAct::relu;
  std::string schema = kSchemaTag;

  int head_dim() const { return d / heads; }
  void validate() const;

  bool operator==(const GnnConfig&) const = default;
};

// Names, shapes, and flat offsets of every learnable tensor. The declared
// order is the serialization order.
class ParamLayout {
 public:
  struct TensorSpec {
    std::string name;
    int rows = 0;
    int cols = 0;
    size_t offset = 0;
    size_t count() const { return static_cast<size_t>(rows) * static_cast<size_t>(cols); }
  };

  explicit ParamLayout(const GnnConfig& cfg);

  size_t total() const { return total_; }
  const std::vector<TensorSpec>& tensors() const { return tensors_; }
  const TensorSpec& spec(const std::string& name) const;

  MatView view(std::span<const double> data, const std::string& name) const;
  MatViewMut view(std::span<double> data, const std::string& name) const;

 private:
  std::vector<TensorSpec> tensors_;
  std::unordered_map<std::string, size_t> index_;
  size_t total_ = 0;
};

// All learnable tensors as one flat vector plus the layout to address them.
struct ModelParams {
  GnnConfig cfg;
  ParamLayout layout;
  std::vector<double> data;

  explicit ModelParams(const GnnConfig& c) : cfg(c), layout(c), data(layout.total(), 0.0) {}

  MatView view(const std::string& name) const { return layout.view(data, name); }

  // Uniform init scaled by fan-in for weights, zeros for biases, ones for
  // layer-norm gains; all randomness from `seed`.
  static ModelParams init(const GnnConfig& cfg, uint64_t seed);
};

// Per-(relation, target) attention weights plus every intermediate needed to
// replay the forward pass in reverse.
struct RelationTape {
  Matrix q, k, v;  // projections (targets x d / sources x d)
  // per target row: head-major attention weights, size heads * |neighbors|
  std::vector<std::vector<double>> alpha;
  Matrix msg;  // targets x d
};

struct LayerTape {
  Matrix ho_in, hm_in;
  std::array<RelationTape, kNumRelations> rel;
  Matrix concat;                       // ops x 4d
  Matrix op_u1, op_a1, op_drop_mask;   // fusion MLP intermediates
  Matrix op_ln_y;                      // normalized pre-gain activations
  std::vector<double> op_ln_rstd;
  Matrix ho_out;

  RelationTape ma_rel;  // reverse pass over reversed assignment edges
  Matrix ma_u1, ma_a1, ma_drop_mask;
  Matrix ma_ln_y;
  std::vector<double> ma_ln_rstd;
  Matrix hm_out;
};

struct HeadTape {
  Matrix u1, a1, drop_mask;  // candidates x d
  std::vector<double> logit;
  std::vector<double> y;
};

struct ForwardTape {
  bool training = false;
  uint64_t dropout_seed = 0;
  Matrix ho0, hm0;  // post input projection
  std::vector<LayerTape> layers;
  std::vector<double> z_global;  // 2d
  Matrix h_final;                // candidates x 4d
  HeadTape fix, crit;
};

struct ForwardResult {
  std::vector<double> y_fix;   // per candidate row, in candidate_rows order
  std::vector<double> y_crit;
};

// L attention layers with reverse machine updates, mean pooling per node
// type, and the two sigmoid heads. Dropout is active only when training;
// given a fixed dropout_seed the call is a pure function of (g, params).
// Passing a tape is required for backward. Throws on schema mismatch.
ForwardResult gnn_forward(const HeteroGraph& g, const ModelParams& params, bool training,
                          uint64_t dropout_seed, ForwardTape* tape);

// Exact reverse-mode gradients of a scalar loss with dL/dy^fix and dL/dy^crit
// given per candidate (gradients w.r.t. the sigmoid outputs). Returns a flat
// vector in ParamLayout order.
std::vector<double> gnn_backward(const HeteroGraph& g, const ModelParams& params,
                                 const ForwardTape& tape, std::span<const double> dy_fix,
                                 std::span<const double> dy_crit);

// Self-describing binary container: magic, schema tag, hyperparameters, flat
// parameters in layout order, FNV-1a checksum. Round-trips bit-exactly;
// truncation, checksum or schema mismatch throw std::runtime_error.
void serialize_model(const ModelParams& params, std::ostream& out);
ModelParams deserialize_model(std::istream& in);
void save_model_file(const ModelParams& params, const std::string& path);
ModelParams load_model_file(const std::string& path);

}  // namespace graphrho
