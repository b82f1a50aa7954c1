#include "graphrho/gnn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "graphrho/binio.hpp"
#include "graphrho/rng.hpp"

namespace graphrho {

void GnnConfig::validate() const {
  if (d < 1 || layers < 1 || heads < 1) throw std::invalid_argument("gnn config: sizes must be >= 1");
  if (d % heads != 0) throw std::invalid_argument("gnn config: d must be divisible by heads");
  if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("gnn config: dropout in [0,1)");
  if (schema.empty()) throw std::invalid_argument("gnn config: empty schema tag");
}

// ---------------------------------------------------------------------------
// parameter layout
// ---------------------------------------------------------------------------

ParamLayout::ParamLayout(const GnnConfig& cfg) {
  cfg.validate();
  const int d = cfg.d;
  auto add = [&](std::string name, int rows, int cols) {
    index_[name] = tensors_.size();
    tensors_.push_back({std::move(name), rows, cols, total_});
    total_ += static_cast<size_t>(rows) * static_cast<size_t>(cols);
  };

  add("in_op.w", d, kOpFeatureDim);
  add("in_op.b", d, 1);
  add("in_ma.w", d, kMaFeatureDim);
  add("in_ma.b", d, 1);
  for (int l = 0; l < cfg.layers; ++l) {
    std::string lp = "l" + std::to_string(l) + ".";
    for (int r = 0; r < kNumRelations; ++r) {
      std::string rp = lp + "r" + std::to_string(r) + ".";
      add(rp + "wq", d, d);
      add(rp + "wk", d, d);
      add(rp + "wv", d, d);
      add(rp + "we", cfg.heads, kEdgeFeatureDim);
    }
    add(lp + "op_mlp.w1", d, kNumRelations * d);
    add(lp + "op_mlp.b1", d, 1);
    add(lp + "op_mlp.w2", d, d);
    add(lp + "op_mlp.b2", d, 1);
    add(lp + "op_ln.g", d, 1);
    add(lp + "op_ln.b", d, 1);
    add(lp + "ma.wq", d, d);
    add(lp + "ma.wk", d, d);
    add(lp + "ma.wv", d, d);
    add(lp + "ma.we", cfg.heads, kEdgeFeatureDim);
    add(lp + "ma_mlp.w1", d, d);
    add(lp + "ma_mlp.b1", d, 1);
    add(lp + "ma_mlp.w2", d, d);
    add(lp + "ma_mlp.b2", d, 1);
    add(lp + "ma_ln.g", d, 1);
    add(lp + "ma_ln.b", d, 1);
  }
  for (const char* head : {"head_fix.", "head_crit."}) {
    add(std::string(head) + "w1", d, 4 * d);
    add(std::string(head) + "b1", d, 1);
    add(std::string(head) + "w2", 1, d);
    add(std::string(head) + "b2", 1, 1);
  }
}

const ParamLayout::TensorSpec& ParamLayout::spec(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::logic_error("unknown tensor: " + name);
  return tensors_[it->second];
}

MatView ParamLayout::view(std::span<const double> data, const std::string& name) const {
  const TensorSpec& s = spec(name);
  return {data.data() + s.offset, s.rows, s.cols};
}

MatViewMut ParamLayout::view(std::span<double> data, const std::string& name) const {
  const TensorSpec& s = spec(name);
  return {data.data() + s.offset, s.rows, s.cols};
}

ModelParams ModelParams::init(const GnnConfig& cfg, uint64_t seed) {
  ModelParams p(cfg);
  Rng rng(mix_seed(seed, 0x1417));
  for (const auto& t : p.layout.tensors()) {
    double* dst = p.data.data() + t.offset;
    if (t.cols == 1) {
      double v = t.name.find("ln.g") != std::string::npos ? 1.0 : 0.0;
      std::fill(dst, dst + t.count(), v);
    } else {
      double scale = 1.0 / std::sqrt(static_cast<double>(t.cols));
      for (size_t i = 0; i < t.count(); ++i) dst[i] = rng.uniform_sym(scale);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// forward
// ---------------------------------------------------------------------------

namespace {

// Per target row: list of (source row, edge index).
using NbList = std::vector<std::vector<std::pair<int32_t, int32_t>>>;

struct Adjacency {
  std::array<NbList, kNumRelations> op_nb;
  NbList ma_nb;  // reversed assignment edges
};

Adjacency build_adjacency(const HeteroGraph& g) {
  Adjacency adj;
  for (int r = 0; r < kNumRelations; ++r) adj.op_nb[static_cast<size_t>(r)].resize(static_cast<size_t>(g.num_ops()));
  adj.ma_nb.resize(static_cast<size_t>(g.num_machines()));
  for (int r : {kRelAssign, kRelAlternative}) {
    const EdgeSet& e = g.edges[static_cast<size_t>(r)];
    for (size_t i = 0; i < e.size(); ++i)
      adj.op_nb[static_cast<size_t>(r)][static_cast<size_t>(e.src[i])].push_back(
          {e.dst[i], static_cast<int32_t>(i)});
  }
  for (int r : {kRelPrecedence, kRelMachineOrder}) {
    const EdgeSet& e = g.edges[static_cast<size_t>(r)];
    for (size_t i = 0; i < e.size(); ++i)
      adj.op_nb[static_cast<size_t>(r)][static_cast<size_t>(e.dst[i])].push_back(
          {e.src[i], static_cast<int32_t>(i)});
  }
  const EdgeSet& assign = g.edges[kRelAssign];
  for (size_t i = 0; i < assign.size(); ++i)
    adj.ma_nb[static_cast<size_t>(assign.dst[i])].push_back({assign.src[i], static_cast<int32_t>(i)});
  return adj;
}

double activate(double u, HiddenAct act) {
  return act == HiddenAct::relu ? (u > 0 ? u : 0.0) : 1.0 / (1.0 + std::exp(-u));
}

double activate_grad(double u, double a, HiddenAct act) {
  return act == HiddenAct::relu ? (u > 0 ? 1.0 : 0.0) : a * (1.0 - a);
}

// H (n x in) * W^T (in x out) -> (n x out), rows independent
Matrix project(const Matrix& h, MatView w) {
  Matrix out(h.rows, w.rows);
#pragma omp parallel for if (h.rows >= 128)
  for (int r = 0; r < h.rows; ++r) matvec(w, h.row(r), nullptr, out.row(r));
  return out;
}

void project_backward(const Matrix& h, MatView w, const Matrix& dout, Matrix* dh, MatViewMut dw) {
  for (int r = 0; r < h.rows; ++r)
    matvec_backward(w, h.row(r), dout.row(r), dw, dh ? dh->row(r) : nullptr, nullptr);
}

constexpr double kLnEps = 1e-5;

void layer_norm_row(const double* x, const double* g, const double* b, int d, double* y_out,
                    double* out, double* rstd_out) {
  double mean = 0;
  for (int i = 0; i < d; ++i) mean += x[i];
  mean /= d;
  double var = 0;
  for (int i = 0; i < d; ++i) var += (x[i] - mean) * (x[i] - mean);
  var /= d;
  double rstd = 1.0 / std::sqrt(var + kLnEps);
  for (int i = 0; i < d; ++i) {
    y_out[i] = (x[i] - mean) * rstd;
    out[i] = y_out[i] * g[i] + b[i];
  }
  *rstd_out = rstd;
}

// dx for y = (x - mean)*rstd, out = y*g + b
void layer_norm_backward_row(const double* dout, const double* y, double rstd, const double* g,
                             int d, double* dx, double* dg, double* db) {
  double mean_dy = 0, mean_dyy = 0;
  for (int i = 0; i < d; ++i) {
    double dy = dout[i] * g[i];
    mean_dy += dy;
    mean_dyy += dy * y[i];
    dg[i] += dout[i] * y[i];
    db[i] += dout[i];
  }
  mean_dy /= d;
  mean_dyy /= d;
  for (int i = 0; i < d; ++i) {
    double dy = dout[i] * g[i];
    dx[i] += rstd * (dy - mean_dy - y[i] * mean_dyy);
  }
}

struct LayerParams {
  MatView wq[kNumRelations], wk[kNumRelations], wv[kNumRelations], we[kNumRelations];
  MatView op_w1, op_b1, op_w2, op_b2, op_ln_g, op_ln_b;
  MatView ma_wq, ma_wk, ma_wv, ma_we;
  MatView ma_w1, ma_b1, ma_w2, ma_b2, ma_ln_g, ma_ln_b;
};

LayerParams layer_params(const ModelParams& p, int l) {
  std::string lp = "l" + std::to_string(l) + ".";
  LayerParams out;
  for (int r = 0; r < kNumRelations; ++r) {
    std::string rp = lp + "r" + std::to_string(r) + ".";
    out.wq[r] = p.view(rp + "wq");
    out.wk[r] = p.view(rp + "wk");
    out.wv[r] = p.view(rp + "wv");
    out.we[r] = p.view(rp + "we");
  }
  out.op_w1 = p.view(lp + "op_mlp.w1");
  out.op_b1 = p.view(lp + "op_mlp.b1");
  out.op_w2 = p.view(lp + "op_mlp.w2");
  out.op_b2 = p.view(lp + "op_mlp.b2");
  out.op_ln_g = p.view(lp + "op_ln.g");
  out.op_ln_b = p.view(lp + "op_ln.b");
  out.ma_wq = p.view(lp + "ma.wq");
  out.ma_wk = p.view(lp + "ma.wk");
  out.ma_wv = p.view(lp + "ma.wv");
  out.ma_we = p.view(lp + "ma.we");
  out.ma_w1 = p.view(lp + "ma_mlp.w1");
  out.ma_b1 = p.view(lp + "ma_mlp.b1");
  out.ma_w2 = p.view(lp + "ma_mlp.w2");
  out.ma_b2 = p.view(lp + "ma_mlp.b2");
  out.ma_ln_g = p.view(lp + "ma_ln.g");
  out.ma_ln_b = p.view(lp + "ma_ln.b");
  return out;
}

// Edge-feature-aware scaled dot-product attention for one relation.
// q: targets x d, k/v: sources x d. Fills tape.alpha and tape.msg.
void attention_forward(const NbList& nb, const EdgeSet& edges, const Matrix& q, const Matrix& k,
                       const Matrix& v, MatView we, int heads, RelationTape& tape) {
  const int dk = q.cols / heads;
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
  tape.msg = Matrix(q.rows, q.cols);
  tape.alpha.assign(static_cast<size_t>(q.rows), {});
#pragma omp parallel for if (q.rows >= 128) schedule(static)
  for (int t = 0; t < q.rows; ++t) {
    const auto& list = nb[static_cast<size_t>(t)];
    if (list.empty()) continue;  // zero message for this relation slot
    const int m = static_cast<int>(list.size());
    auto& alpha = tape.alpha[static_cast<size_t>(t)];
    alpha.resize(static_cast<size_t>(heads) * static_cast<size_t>(m));
    std::vector<double> score(static_cast<size_t>(m));
    for (int h = 0; h < heads; ++h) {
      const double* qh = q.row(t) + h * dk;
      double smax = -1e300;
      for (int j = 0; j < m; ++j) {
        auto [u, e] = list[static_cast<size_t>(j)];
        double s = dot(qh, k.row(u) + h * dk, dk) * inv_sqrt_dk +
                   dot(we.row(h), edges.feat[static_cast<size_t>(e)].data(), kEdgeFeatureDim);
        score[static_cast<size_t>(j)] = s;
        smax = std::max(smax, s);
      }
      double z = 0;
      for (int j = 0; j < m; ++j) {
        double a = std::exp(score[static_cast<size_t>(j)] - smax);
        alpha[static_cast<size_t>(h * m + j)] = a;
        z += a;
      }
      double* msg = tape.msg.row(t) + h * dk;
      for (int j = 0; j < m; ++j) {
        double a = alpha[static_cast<size_t>(h * m + j)] / z;
        alpha[static_cast<size_t>(h * m + j)] = a;
        axpy(a, v.row(list[static_cast<size_t>(j)].first) + h * dk, msg, dk);
      }
    }
  }
}

// Reverse of attention_forward. dmsg: targets x d. Accumulates into dq, dk,
// dv (same shapes as q/k/v) and dwe.
void attention_backward(const NbList& nb, const EdgeSet& edges, const Matrix& q, const Matrix& k,
                        const Matrix& v, const RelationTape& tape, const Matrix& dmsg, int heads,
                        Matrix& dq, Matrix& dk_m, Matrix& dv, MatViewMut dwe) {
  const int dk = q.cols / heads;
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
  for (int t = 0; t < q.rows; ++t) {
    const auto& list = nb[static_cast<size_t>(t)];
    if (list.empty()) continue;
    const int m = static_cast<int>(list.size());
    const auto& alpha = tape.alpha[static_cast<size_t>(t)];
    std::vector<double> dalpha(static_cast<size_t>(m));
    for (int h = 0; h < heads; ++h) {
      const double* dmh = dmsg.row(t) + h * dk;
      const double* qh = q.row(t) + h * dk;
      // dv and dalpha
      double dot_ad = 0;
      for (int j = 0; j < m; ++j) {
        auto [u, e] = list[static_cast<size_t>(j)];
        double a = alpha[static_cast<size_t>(h * m + j)];
        axpy(a, dmh, dv.row(u) + h * dk, dk);
        double da = dot(dmh, v.row(u) + h * dk, dk);
        dalpha[static_cast<size_t>(j)] = da;
        dot_ad += a * da;
      }
      // softmax backward + score backward
      for (int j = 0; j < m; ++j) {
        auto [u, e] = list[static_cast<size_t>(j)];
        double a = alpha[static_cast<size_t>(h * m + j)];
        double ds = a * (dalpha[static_cast<size_t>(j)] - dot_ad);
        if (ds == 0.0) continue;
        axpy(ds * inv_sqrt_dk, k.row(u) + h * dk, dq.row(t) + h * dk, dk);
        axpy(ds * inv_sqrt_dk, qh, dk_m.row(u) + h * dk, dk);
        axpy(ds, edges.feat[static_cast<size_t>(list[static_cast<size_t>(j)].second)].data(),
             dwe.row(h), kEdgeFeatureDim);
      }
    }
  }
}

// out_row = w2 * drop(act(w1 * in_row + b1)) + b2, rows independent.
// a1 stores the pre-dropout activation so backward can use act'.
void mlp_forward(const Matrix& in, MatView w1, MatView b1, MatView w2, MatView b2, HiddenAct act,
                 const Matrix& drop_mask, Matrix& u1, Matrix& a1, Matrix& out) {
  const int n = in.rows;
  u1 = Matrix(n, w1.rows);
  a1 = Matrix(n, w1.rows);
  out = Matrix(n, w2.rows);
#pragma omp parallel for if (n >= 128) schedule(static)
  for (int r = 0; r < n; ++r) {
    matvec(w1, in.row(r), b1.p, u1.row(r));
    std::vector<double> dropped(static_cast<size_t>(w1.rows));
    for (int i = 0; i < w1.rows; ++i) {
      a1(r, i) = activate(u1(r, i), act);
      dropped[static_cast<size_t>(i)] = a1(r, i) * drop_mask(r, i);
    }
    matvec(w2, dropped.data(), b2.p, out.row(r));
  }
}

struct MlpGrads {
  MatViewMut w1, b1, w2, b2;
};

void mlp_backward(const Matrix& in, MatView w1, MatView w2, HiddenAct act, const Matrix& drop_mask,
                  const Matrix& u1, const Matrix& a1, const Matrix& dout, Matrix& din,
                  MlpGrads grads) {
  const int n = in.rows;
  std::vector<double> dropped(static_cast<size_t>(w1.rows));
  std::vector<double> da1(static_cast<size_t>(w1.rows));
  std::vector<double> du1(static_cast<size_t>(w1.rows));
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < w1.rows; ++i) dropped[static_cast<size_t>(i)] = a1(r, i) * drop_mask(r, i);
    std::fill(da1.begin(), da1.end(), 0.0);
    matvec_backward(w2, dropped.data(), dout.row(r), grads.w2, da1.data(), grads.b2.p);
    for (int i = 0; i < w1.rows; ++i) {
      double g = da1[static_cast<size_t>(i)] * drop_mask(r, i);
      du1[static_cast<size_t>(i)] = g * activate_grad(u1(r, i), a1(r, i), act);
    }
    matvec_backward(w1, in.row(r), du1.data(), grads.w1, din.row(r), grads.b1.p);
  }
}

Matrix make_dropout_mask(int rows, int cols, double p, bool training, Rng& rng) {
  Matrix m(rows, cols);
  if (!training || p <= 0.0) {
    std::fill(m.a.begin(), m.a.end(), 1.0);
    return m;
  }
  const double keep_scale = 1.0 / (1.0 - p);
  for (double& v : m.a) v = rng.uniform_real() < p ? 0.0 : keep_scale;
  return m;
}

}  // namespace

ForwardResult gnn_forward(const HeteroGraph& g, const ModelParams& params, bool training,
                          uint64_t dropout_seed, ForwardTape* tape) {
  if (g.schema != params.cfg.schema)
    throw std::runtime_error("model error: graph schema '" + g.schema +
                             "' does not match model schema '" + params.cfg.schema + "'");
  const GnnConfig& cfg = params.cfg;
  const int d = cfg.d;
  const int n_op = g.num_ops();
  const int n_ma = g.num_machines();
  const int n_cand = static_cast<int>(g.candidate_rows.size());

  ForwardTape local;
  ForwardTape& tp = tape ? *tape : local;
  tp = ForwardTape{};
  tp.training = training;
  tp.dropout_seed = dropout_seed;

  Adjacency adj = build_adjacency(g);
  Rng drop_rng(mix_seed(dropout_seed, 0xD509));

  // input projections
  tp.ho0 = Matrix(n_op, d);
  {
    MatView w = params.view("in_op.w"), b = params.view("in_op.b");
    for (int r = 0; r < n_op; ++r) matvec(w, g.op_x.row(r), b.p, tp.ho0.row(r));
  }
  tp.hm0 = Matrix(n_ma, d);
  {
    MatView w = params.view("in_ma.w"), b = params.view("in_ma.b");
    for (int r = 0; r < n_ma; ++r) matvec(w, g.ma_x.row(r), b.p, tp.hm0.row(r));
  }

  const Matrix* ho = &tp.ho0;
  const Matrix* hm = &tp.hm0;
  tp.layers.resize(static_cast<size_t>(cfg.layers));
  for (int l = 0; l < cfg.layers; ++l) {
    LayerTape& lt = tp.layers[static_cast<size_t>(l)];
    LayerParams lp = layer_params(params, l);
    lt.ho_in = *ho;
    lt.hm_in = *hm;

    // four relation-specific attention passes into a concatenated message
    lt.concat = Matrix(n_op, kNumRelations * d);
    for (int r = 0; r < kNumRelations; ++r) {
      RelationTape& rt = lt.rel[static_cast<size_t>(r)];
      const bool machine_source = (r == kRelAssign || r == kRelAlternative);
      const Matrix& src = machine_source ? lt.hm_in : lt.ho_in;
      rt.q = project(lt.ho_in, lp.wq[r]);
      rt.k = project(src, lp.wk[r]);
      rt.v = project(src, lp.wv[r]);
      attention_forward(adj.op_nb[static_cast<size_t>(r)], g.edges[static_cast<size_t>(r)], rt.q,
                        rt.k, rt.v, lp.we[r], cfg.heads, rt);
      for (int t = 0; t < n_op; ++t)
        std::memcpy(lt.concat.row(t) + r * d, rt.msg.row(t), sizeof(double) * static_cast<size_t>(d));
    }

    // residual fusion MLP + layer norm
    lt.op_drop_mask = make_dropout_mask(n_op, d, cfg.dropout, training, drop_rng);
    Matrix op_mlp_out;
    mlp_forward(lt.concat, lp.op_w1, lp.op_b1, lp.op_w2, lp.op_b2, cfg.hidden_act,
                lt.op_drop_mask, lt.op_u1, lt.op_a1, op_mlp_out);
    lt.ho_out = Matrix(n_op, d);
    lt.op_ln_y = Matrix(n_op, d);
    lt.op_ln_rstd.resize(static_cast<size_t>(n_op));
    for (int t = 0; t < n_op; ++t) {
      std::vector<double> pre(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) pre[static_cast<size_t>(i)] = lt.ho_in(t, i) + op_mlp_out(t, i);
      layer_norm_row(pre.data(), lp.op_ln_g.p, lp.op_ln_b.p, d, lt.op_ln_y.row(t), lt.ho_out.row(t),
                     &lt.op_ln_rstd[static_cast<size_t>(t)]);
    }

    // reverse pass: machines attend over their assigned ops (updated states)
    RelationTape& mt = lt.ma_rel;
    mt.q = project(lt.hm_in, lp.ma_wq);
    mt.k = project(lt.ho_out, lp.ma_wk);
    mt.v = project(lt.ho_out, lp.ma_wv);
    attention_forward(adj.ma_nb, g.edges[kRelAssign], mt.q, mt.k, mt.v, lp.ma_we, cfg.heads, mt);

    lt.ma_drop_mask = make_dropout_mask(n_ma, d, cfg.dropout, training, drop_rng);
    Matrix ma_mlp_out;
    mlp_forward(mt.msg, lp.ma_w1, lp.ma_b1, lp.ma_w2, lp.ma_b2, cfg.hidden_act, lt.ma_drop_mask,
                lt.ma_u1, lt.ma_a1, ma_mlp_out);
    lt.hm_out = Matrix(n_ma, d);
    lt.ma_ln_y = Matrix(n_ma, d);
    lt.ma_ln_rstd.resize(static_cast<size_t>(n_ma));
    for (int t = 0; t < n_ma; ++t) {
      std::vector<double> pre(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) pre[static_cast<size_t>(i)] = lt.hm_in(t, i) + ma_mlp_out(t, i);
      layer_norm_row(pre.data(), lp.ma_ln_g.p, lp.ma_ln_b.p, d, lt.ma_ln_y.row(t), lt.hm_out.row(t),
                     &lt.ma_ln_rstd[static_cast<size_t>(t)]);
    }

    ho = &lt.ho_out;
    hm = &lt.hm_out;
  }

  // global context: per-type mean pooling
  tp.z_global.assign(static_cast<size_t>(2 * d), 0.0);
  for (int t = 0; t < n_op; ++t) axpy(1.0 / n_op, ho->row(t), tp.z_global.data(), d);
  for (int t = 0; t < n_ma; ++t) axpy(1.0 / n_ma, hm->row(t), tp.z_global.data() + d, d);

  // final representation per candidate: [h_v ; z_global ; h_machine]
  tp.h_final = Matrix(n_cand, 4 * d);
  for (int c = 0; c < n_cand; ++c) {
    int v = g.candidate_rows[static_cast<size_t>(c)];
    int u = g.op_machine_row[static_cast<size_t>(v)];
    double* row = tp.h_final.row(c);
    std::memcpy(row, ho->row(v), sizeof(double) * static_cast<size_t>(d));
    std::memcpy(row + d, tp.z_global.data(), sizeof(double) * static_cast<size_t>(2 * d));
    std::memcpy(row + 3 * d, hm->row(u), sizeof(double) * static_cast<size_t>(d));
  }

  ForwardResult out;
  for (HeadTape* ht : {&tp.fix, &tp.crit}) {
    const bool is_fix = (ht == &tp.fix);
    const std::string hp = is_fix ? "head_fix." : "head_crit.";
    MatView w1 = params.view(hp + "w1"), b1 = params.view(hp + "b1");
    MatView w2 = params.view(hp + "w2"), b2 = params.view(hp + "b2");
    ht->drop_mask = make_dropout_mask(n_cand, d, cfg.dropout, training, drop_rng);
    Matrix logits;
    mlp_forward(tp.h_final, w1, b1, w2, b2, cfg.hidden_act, ht->drop_mask, ht->u1, ht->a1, logits);
    ht->logit.resize(static_cast<size_t>(n_cand));
    ht->y.resize(static_cast<size_t>(n_cand));
    for (int c = 0; c < n_cand; ++c) {
      ht->logit[static_cast<size_t>(c)] = logits(c, 0);
      ht->y[static_cast<size_t>(c)] = 1.0 / (1.0 + std::exp(-logits(c, 0)));
    }
    (is_fix ? out.y_fix : out.y_crit) = ht->y;
  }
  return out;
}

std::vector<double> gnn_backward(const HeteroGraph& g, const ModelParams& params,
                                 const ForwardTape& tape, std::span<const double> dy_fix,
                                 std::span<const double> dy_crit) {
  const GnnConfig& cfg = params.cfg;
  const int d = cfg.d;
  const int n_op = g.num_ops();
  const int n_ma = g.num_machines();
  const int n_cand = static_cast<int>(g.candidate_rows.size());
  if (static_cast<int>(dy_fix.size()) != n_cand || static_cast<int>(dy_crit.size()) != n_cand)
    throw std::invalid_argument("gnn_backward: gradient size mismatch");

  std::vector<double> grad(params.layout.total(), 0.0);
  auto gview = [&](const std::string& name) { return params.layout.view(std::span<double>(grad), name); };

  Adjacency adj = build_adjacency(g);
  Matrix dho(n_op, d), dhm(n_ma, d);
  Matrix dh_final(n_cand, 4 * d);

  // heads
  for (const HeadTape* ht : {&tape.fix, &tape.crit}) {
    const bool is_fix = (ht == &tape.fix);
    const std::string hp = is_fix ? "head_fix." : "head_crit.";
    std::span<const double> dy = is_fix ? dy_fix : dy_crit;
    MatView w1 = params.view(hp + "w1");
    MatView w2 = params.view(hp + "w2");
    Matrix dlogit(n_cand, 1);
    for (int c = 0; c < n_cand; ++c) {
      double y = ht->y[static_cast<size_t>(c)];
      dlogit(c, 0) = dy[static_cast<size_t>(c)] * y * (1.0 - y);
    }
    Matrix dfin(n_cand, 4 * d);
    mlp_backward(tape.h_final, w1, w2, cfg.hidden_act, ht->drop_mask, ht->u1, ht->a1, dlogit, dfin,
                 {gview(hp + "w1"), gview(hp + "b1"), gview(hp + "w2"), gview(hp + "b2")});
    for (int c = 0; c < n_cand; ++c) axpy(1.0, dfin.row(c), dh_final.row(c), 4 * d);
  }

  // split final representation gradients
  std::vector<double> dz(static_cast<size_t>(2 * d), 0.0);
  for (int c = 0; c < n_cand; ++c) {
    int v = g.candidate_rows[static_cast<size_t>(c)];
    int u = g.op_machine_row[static_cast<size_t>(v)];
    const double* row = dh_final.row(c);
    axpy(1.0, row, dho.row(v), d);
    axpy(1.0, row + d, dz.data(), 2 * d);
    axpy(1.0, row + 3 * d, dhm.row(u), d);
  }
  // pooling backward
  for (int t = 0; t < n_op; ++t) axpy(1.0 / n_op, dz.data(), dho.row(t), d);
  for (int t = 0; t < n_ma; ++t) axpy(1.0 / n_ma, dz.data() + d, dhm.row(t), d);

  // layers in reverse
  for (int l = cfg.layers - 1; l >= 0; --l) {
    const LayerTape& lt = tape.layers[static_cast<size_t>(l)];
    LayerParams lp = layer_params(params, l);
    std::string lpfx = "l" + std::to_string(l) + ".";

    // ---- machine update backward (it ran after the op update) ----
    Matrix dhm_in(n_ma, d);  // gradient into hm_in
    Matrix dmsg_ma(n_ma, d);
    {
      // layer norm + residual
      Matrix dpre(n_ma, d);
      {
        MatViewMut dg = gview(lpfx + "ma_ln.g"), db = gview(lpfx + "ma_ln.b");
        for (int t = 0; t < n_ma; ++t)
          layer_norm_backward_row(dhm.row(t), lt.ma_ln_y.row(t),
                                  lt.ma_ln_rstd[static_cast<size_t>(t)], lp.ma_ln_g.p, d,
                                  dpre.row(t), dg.p, db.p);
      }
      for (int t = 0; t < n_ma; ++t) axpy(1.0, dpre.row(t), dhm_in.row(t), d);
      mlp_backward(lt.ma_rel.msg, lp.ma_w1, lp.ma_w2, cfg.hidden_act, lt.ma_drop_mask, lt.ma_u1,
                   lt.ma_a1, dpre, dmsg_ma,
                   {gview(lpfx + "ma_mlp.w1"), gview(lpfx + "ma_mlp.b1"), gview(lpfx + "ma_mlp.w2"),
                    gview(lpfx + "ma_mlp.b2")});
    }
    Matrix dq_ma(n_ma, d), dk_ma(n_op, d), dv_ma(n_op, d);
    attention_backward(adj.ma_nb, g.edges[kRelAssign], lt.ma_rel.q, lt.ma_rel.k, lt.ma_rel.v,
                       lt.ma_rel, dmsg_ma, cfg.heads, dq_ma, dk_ma, dv_ma, gview(lpfx + "ma.we"));
    project_backward(lt.hm_in, lp.ma_wq, dq_ma, &dhm_in, gview(lpfx + "ma.wq"));
    // k/v source is ho_out: gradients flow into the op-side output
    Matrix dho_out = dho;  // copy: gradient from next layer/pooling
    project_backward(lt.ho_out, lp.ma_wk, dk_ma, &dho_out, gview(lpfx + "ma.wk"));
    project_backward(lt.ho_out, lp.ma_wv, dv_ma, &dho_out, gview(lpfx + "ma.wv"));

    // ---- op update backward ----
    Matrix dho_in(n_op, d);
    Matrix dconcat(n_op, kNumRelations * d);
    {
      Matrix dpre(n_op, d);
      {
        MatViewMut dg = gview(lpfx + "op_ln.g"), db = gview(lpfx + "op_ln.b");
        for (int t = 0; t < n_op; ++t)
          layer_norm_backward_row(dho_out.row(t), lt.op_ln_y.row(t),
                                  lt.op_ln_rstd[static_cast<size_t>(t)], lp.op_ln_g.p, d,
                                  dpre.row(t), dg.p, db.p);
      }
      for (int t = 0; t < n_op; ++t) axpy(1.0, dpre.row(t), dho_in.row(t), d);
      mlp_backward(lt.concat, lp.op_w1, lp.op_w2, cfg.hidden_act, lt.op_drop_mask, lt.op_u1,
                   lt.op_a1, dpre, dconcat,
                   {gview(lpfx + "op_mlp.w1"), gview(lpfx + "op_mlp.b1"),
                    gview(lpfx + "op_mlp.w2"), gview(lpfx + "op_mlp.b2")});
    }

    Matrix dhm_from_rel(n_ma, d);
    for (int r = 0; r < kNumRelations; ++r) {
      const RelationTape& rt = lt.rel[static_cast<size_t>(r)];
      const bool machine_source = (r == kRelAssign || r == kRelAlternative);
      Matrix dmsg(n_op, d);
      for (int t = 0; t < n_op; ++t)
        std::memcpy(dmsg.row(t), dconcat.row(t) + r * d, sizeof(double) * static_cast<size_t>(d));
      const int n_src = machine_source ? n_ma : n_op;
      Matrix dq(n_op, d), dk(n_src, d), dv(n_src, d);
      std::string rp = lpfx + "r" + std::to_string(r) + ".";
      attention_backward(adj.op_nb[static_cast<size_t>(r)], g.edges[static_cast<size_t>(r)], rt.q,
                         rt.k, rt.v, rt, dmsg, cfg.heads, dq, dk, dv, gview(rp + "we"));
      project_backward(lt.ho_in, lp.wq[r], dq, &dho_in, gview(rp + "wq"));
      const Matrix& src = machine_source ? lt.hm_in : lt.ho_in;
      Matrix& dsrc = machine_source ? dhm_from_rel : dho_in;
      project_backward(src, lp.wk[r], dk, &dsrc, gview(rp + "wk"));
      project_backward(src, lp.wv[r], dv, &dsrc, gview(rp + "wv"));
    }

    // hand gradients to the previous layer
    dho = std::move(dho_in);
    dhm = std::move(dhm_in);
    for (int t = 0; t < n_ma; ++t) axpy(1.0, dhm_from_rel.row(t), dhm.row(t), d);
  }

  // input projections
  {
    MatView w = params.view("in_op.w");
    MatViewMut dw = gview("in_op.w"), db = gview("in_op.b");
    for (int r = 0; r < n_op; ++r) matvec_backward(w, g.op_x.row(r), dho.row(r), dw, nullptr, db.p);
  }
  {
    MatView w = params.view("in_ma.w");
    MatViewMut dw = gview("in_ma.w"), db = gview("in_ma.b");
    for (int r = 0; r < n_ma; ++r) matvec_backward(w, g.ma_x.row(r), dhm.row(r), dw, nullptr, db.p);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {
constexpr char kModelMagic[8] = {'G', 'R', 'H', 'O', '-', 'M', '0', '1'};
}

void serialize_model(const ModelParams& params, std::ostream& out) {
  using namespace binio;
  std::string payload;
  put_str(payload, params.cfg.schema);
  put<int32_t>(payload, params.cfg.d);
  put<int32_t>(payload, params.cfg.layers);
  put<int32_t>(payload, params.cfg.heads);
  put<int32_t>(payload, static_cast<int32_t>(params.cfg.hidden_act));
  put<double>(payload, params.cfg.dropout);
  put<int32_t>(payload, kOpFeatureDim);
  put<int32_t>(payload, kMaFeatureDim);
  put<int32_t>(payload, kEdgeFeatureDim);
  put<uint64_t>(payload, params.data.size());
  payload.append(reinterpret_cast<const char*>(params.data.data()),
                 params.data.size() * sizeof(double));
  write_framed(out, kModelMagic, payload);
}

ModelParams deserialize_model(std::istream& in) {
  using namespace binio;
  std::string payload = read_framed(in, kModelMagic, "model");
  size_t pos = 0;
  GnnConfig cfg;
  cfg.schema = take_str(payload, pos);
  cfg.d = take<int32_t>(payload, pos);
  cfg.layers = take<int32_t>(payload, pos);
  cfg.heads = take<int32_t>(payload, pos);
  cfg.hidden_act = static_cast<HiddenAct>(take<int32_t>(payload, pos));
  cfg.dropout = take<double>(payload, pos);
  if (take<int32_t>(payload, pos) != kOpFeatureDim || take<int32_t>(payload, pos) != kMaFeatureDim ||
      take<int32_t>(payload, pos) != kEdgeFeatureDim)
    throw std::runtime_error("model load error: feature dimensions mismatch");
  if (cfg.schema != kSchemaTag)
    throw std::runtime_error("model load error: schema tag '" + cfg.schema +
                             "' not supported by this encoder (" + kSchemaTag + ")");
  auto count = take<uint64_t>(payload, pos);
  ModelParams params(cfg);
  if (count != params.data.size())
    throw std::runtime_error("model load error: parameter count mismatch");
  if (pos + count * sizeof(double) > payload.size())
    throw std::runtime_error("model load error: truncated stream");
  std::memcpy(params.data.data(), payload.data() + pos, count * sizeof(double));
  return params;
}

void save_model_file(const ModelParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  serialize_model(params, out);
}

ModelParams load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return deserialize_model(in);
}

}  // namespace graphrho
