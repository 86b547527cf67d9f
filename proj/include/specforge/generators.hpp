#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specforge/dataset.hpp"
#include "specforge/spec.hpp"

namespace specforge {

// ---------------------------------------------------------------------------
// Grid

inline constexpr double kDefaultCellCap = 1e7;

// Uniform beta-per-axis partition of a bounding box. Cell edges are shared
// exactly between neighbours, and the last edge equals the box maximum.
// A constant axis (x_min == x_max) collapses to one slab.
class GridLayout {
 public:
  GridLayout(std::vector<double> x_min, std::vector<double> x_max, int beta);

  std::size_t dim() const { return x_min_.size(); }
  int beta() const { return beta_; }
  int cells_along(std::size_t axis) const { return cells_[axis]; }
  // Product of cells_along over all axes, as a double to survive overflow.
  double cell_count() const;

  // Edge p of axis j, p in [0, cells_along(j)].
  double edge(std::size_t axis, int p) const;

  // Row-major cell index, axis 0 outermost.
  Hyperrectangle cell_box(std::uint64_t index) const;
  std::vector<int> cell_coords(std::uint64_t index) const;

  // Indices of every cell whose closed box contains the point, ascending.
  // Points on shared faces belong to each adjacent cell.
  std::vector<std::uint64_t> cells_containing(std::span<const double> point) const;

 private:
  std::vector<double> x_min_;
  std::vector<double> x_max_;
  std::vector<double> step_;
  std::vector<int> cells_;
  int beta_;
};

// One spec per non-empty cell, in cell index order. Throws CellCapExceeded
// before any work if the layout has more than `cell_cap` cells.
SpecSet gen_grid(const Dataset& gen, int beta, TaskKind task,
                 double cell_cap = kDefaultCellCap);

// Straight transcription of the nested-cell loop: enumerates every cell and
// scans the whole dataset per cell. Kept for testing gen_grid.
SpecSet gen_grid_serial(const Dataset& gen, int beta, TaskKind task,
                        double cell_cap = kDefaultCellCap);

// ---------------------------------------------------------------------------
// Clustering

struct ClusterParams {
  int k = 30;
  int max_iters = 300;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> assignment;    // length N
  std::vector<double> centroids;  // k x dim, row-major
  std::size_t dim = 0;
  double inertia = 0.0;
  int iterations = 0;
};

// Lloyd's algorithm from k-means++ seeding. `features` is row-major N x dim.
KMeansResult kmeans(std::span<const double> features, std::size_t dim,
                    const ClusterParams& params);

// One spec per cluster; the box spans the extremes of the cluster members
// and its output is extracted from every generation point inside it.
SpecSet gen_cluster(const Dataset& gen, const ClusterParams& params,
                    TaskKind task);

// ---------------------------------------------------------------------------
// Decision tree

struct TreeParams {
  std::optional<int> max_depth;  // nullopt = unlimited
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  // Recorded in metadata only: the exhaustive split search is deterministic
  // (ties go to the lowest feature, then the lowest threshold).
  std::uint64_t seed = 0;
};

struct TreeNode {
  // Internal nodes: feature >= 0 and both children set.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  // Leaves: training rows that reached this node.
  std::vector<std::size_t> rows;

  bool is_leaf() const { return feature < 0; }
};

// CART tree: left branch is x[feature] <= threshold. Splits maximise Gini
// decrease (classification) or weighted variance decrease (regression).
class DecisionTree {
 public:
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int root() const { return 0; }
  std::size_t leaf_count() const;
  int depth() const;
  // Leaf index reached by `x`.
  int leaf_for(std::span<const double> x) const;

 private:
  friend DecisionTree train_tree(const Dataset&, const TreeParams&);
  std::vector<TreeNode> nodes_;
};

DecisionTree train_tree(const Dataset& gen, const TreeParams& params);

struct LeafBox {
  int node = -1;
  Hyperrectangle box;
};

// Leaf boxes in depth-first (left first) order. Sides never constrained on
// the root-to-leaf path stay infinite.
std::vector<LeafBox> leaf_boxes(const DecisionTree& tree, std::size_t dim);

SpecSet gen_tree(const Dataset& gen, const TreeParams& params, TaskKind task);

// ---------------------------------------------------------------------------
// Hand-written throughput rules over 4-step windows of bin indices.

// Least-squares line through (0,x0)..(3,x3) evaluated at 4, rounded to the
// nearest bin (ties to even) and clamped to [0, bins-1].
int trend_prediction(std::span<const int> window, int bins);

SpecSet gen_human_throughput(int bins);

}  // namespace specforge
