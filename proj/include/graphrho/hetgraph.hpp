#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "graphrho/cpm.hpp"
#include "graphrho/mat.hpp"
#include "graphrho/subproblem.hpp"

namespace graphrho {

inline constexpr int kOpFeatureDim = 15;
inline constexpr int kMaFeatureDim = 11;
inline constexpr int kEdgeFeatureDim = 2;
inline constexpr const char* kSchemaTag = "hg-v1";

// The four edge relations. r1/r2 run op -> machine, r3/r4 op -> op.
enum Relation : int {
  kRelAssign = 0,    // current tentative machine assignment
  kRelAlternative,   // other compatible machines
  kRelPrecedence,    // within-job consecutive pairs inside the window
  kRelMachineOrder,  // consecutive pairs on a machine under the previous local schedule
  kNumRelations,
};

const char* relation_name(int r);

struct EdgeSet {
  std::vector<int32_t> src;
  std::vector<int32_t> dst;
  std::vector<std::array<double, kEdgeFeatureDim>> feat;

  size_t size() const { return src.size(); }
  void add(int32_t s, int32_t d, double f0, double f1) {
    src.push_back(s);
    dst.push_back(d);
    feat.push_back({f0, f1});
  }
};

struct HeteroGraph {
  Matrix op_x;  // N_op x 15
  Matrix ma_x;  // N_ma x 11
  std::array<EdgeSet, kNumRelations> edges;
  std::vector<OpId> window_ops;         // op row -> global op id
  std::vector<int32_t> op_machine_row;  // op row -> its assigned machine row
  std::vector<int32_t> candidate_rows;  // overlap ops (prediction targets)
  std::string schema = kSchemaTag;

  int num_ops() const { return op_x.rows; }
  int num_machines() const { return ma_x.rows; }
};

// State carried over from the previous rolling iteration. All fields may be
// empty on the first window (then there is no overlap and no r4 edges).
struct PrevContext {
  // global op id -> previous local assignment; must cover every overlap op
  std::unordered_map<OpId, Assignment> assign;
  std::unordered_set<OpId> fixed_last_iter;
  std::unordered_map<OpId, SlackEntry> slack;  // CPM over the previous fragment
  Time prev_makespan = 0;

  bool has(OpId o) const { return assign.count(o) > 0; }
};

// Maps (subproblem, previous-iteration state) to the typed graph. The
// tentative assignment behind r1 is the previous machine for overlap ops and
// a deterministic greedy completion for new ops; start-time features come
// from the induced tentative dispatch. Throws std::invalid_argument when an
// op that was in the previous window is missing from `prev.assign`.
HeteroGraph encode(const Subproblem& sub, const PrevContext& prev, int window_cap);

struct FeatureSchema {
  std::string tag;
  std::array<const char*, kOpFeatureDim> op_features;
  std::array<const char*, kMaFeatureDim> ma_features;
  std::array<std::array<const char*, kEdgeFeatureDim>, kNumRelations> edge_features;
};

// The frozen feature layout; serialized models embed `tag` and refuse to run
// against a different one.
const FeatureSchema& feature_schema();

// Line-oriented debug dump: nodes with features, then edges per relation.
void dump_graph(const HeteroGraph& g, std::ostream& out);

}  // namespace graphrho
