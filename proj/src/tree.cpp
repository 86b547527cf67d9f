#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "specforge/generators.hpp"

namespace specforge {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = -1.0;
};

// Impurity summary of a label multiset: Gini for classes, variance for
// regression. Both are "weighted" by count when comparing children.
class LabelStats {
 public:
  LabelStats(TaskKind task, int classes) : task_(task), counts_(classes, 0) {}

  void add(double y) {
    ++n_;
    if (task_ == TaskKind::Classification) {
      ++counts_[static_cast<std::size_t>(y)];
    } else {
      sum_ += y;
      sum_sq_ += y * y;
    }
  }
  void remove(double y) {
    --n_;
    if (task_ == TaskKind::Classification) {
      --counts_[static_cast<std::size_t>(y)];
    } else {
      sum_ -= y;
      sum_sq_ -= y * y;
    }
  }
  std::size_t size() const { return n_; }

  // n * impurity, so children can be compared without dividing by parent n.
  double weighted_impurity() const {
    if (n_ == 0) return 0.0;
    const double n = static_cast<double>(n_);
    if (task_ == TaskKind::Classification) {
      double s = 0.0;
      for (std::size_t c : counts_) {
        const double p = static_cast<double>(c) / n;
        s += p * p;
      }
      return n * (1.0 - s);
    }
    return std::max(0.0, sum_sq_ - sum_ * sum_ / n);
  }

 private:
  TaskKind task_;
  std::vector<std::size_t> counts_;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t n_ = 0;
};

bool is_pure(const Dataset& data, const std::vector<std::size_t>& rows) {
  const double first = data.label(rows.front());
  return std::all_of(rows.begin(), rows.end(),
                     [&](std::size_t i) { return data.label(i) == first; });
}

double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  // Adjacent doubles can round the midpoint up to b, which would send b left.
  return m < b ? m : a;
}

Split best_split_on_feature(const Dataset& data,
                            const std::vector<std::size_t>& rows, int feature,
                            int classes, const TreeParams& params) {
  std::vector<std::size_t> order = rows;
  const auto f = static_cast<std::size_t>(feature);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.row(a)[f] < data.row(b)[f];
  });

  LabelStats left(data.task(), classes);
  LabelStats right(data.task(), classes);
  for (std::size_t i : order) right.add(data.label(i));
  const double parent = right.weighted_impurity();
  const double n = static_cast<double>(order.size());
  const auto min_leaf = static_cast<std::size_t>(params.min_samples_leaf);

  Split best;
  for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
    const double y = data.label(order[pos]);
    left.add(y);
    right.remove(y);
    const double a = data.row(order[pos])[f];
    const double b = data.row(order[pos + 1])[f];
    if (!(a < b)) continue;
    if (left.size() < min_leaf || right.size() < min_leaf) continue;
    const double gain =
        (parent - left.weighted_impurity() - right.weighted_impurity()) / n;
    if (gain > best.gain) {
      best = Split{feature, midpoint(a, b), gain};
    }
  }
  return best;
}

}  // namespace

DecisionTree train_tree(const Dataset& gen, const TreeParams& params) {
  if (params.min_samples_leaf < 1) {
    throw std::invalid_argument("min_samples_leaf must be >= 1");
  }
  if (params.min_samples_split < 2 ||
      params.min_samples_split < params.min_samples_leaf + 1) {
    throw std::invalid_argument(
        "min_samples_split must be >= 2 and > min_samples_leaf");
  }
  if (params.max_depth && *params.max_depth < 0) {
    throw std::invalid_argument("max_depth must be >= 0");
  }
  const int classes =
      gen.task() == TaskKind::Classification ? gen.num_classes() : 0;
  const int features = static_cast<int>(gen.cols());

  DecisionTree tree;
  auto& nodes = tree.nodes_;
  TreeNode root;
  root.rows.resize(gen.rows());
  std::iota(root.rows.begin(), root.rows.end(), std::size_t{0});
  nodes.push_back(std::move(root));

  // Explicit work list: an unlimited-depth tree can be as deep as N.
  std::vector<int> pending{0};
  while (!pending.empty()) {
    const int id = pending.back();
    pending.pop_back();
    const auto node_rows = nodes[static_cast<std::size_t>(id)].rows;
    const int depth = nodes[static_cast<std::size_t>(id)].depth;

    if (node_rows.size() < static_cast<std::size_t>(params.min_samples_split) ||
        (params.max_depth && depth >= *params.max_depth) ||
        is_pure(gen, node_rows)) {
      continue;
    }

    std::vector<Split> per_feature(static_cast<std::size_t>(features));
#pragma omp parallel for schedule(dynamic, 1) if (node_rows.size() > 2048)
    for (int f = 0; f < features; ++f) {
      per_feature[static_cast<std::size_t>(f)] =
          best_split_on_feature(gen, node_rows, f, classes, params);
    }
    Split best;
    for (const auto& s : per_feature) {
      if (s.feature >= 0 && s.gain > best.gain) best = s;
    }
    if (best.feature < 0) continue;

    TreeNode left;
    TreeNode right;
    left.depth = right.depth = depth + 1;
    const auto bf = static_cast<std::size_t>(best.feature);
    for (std::size_t i : node_rows) {
      (gen.row(i)[bf] <= best.threshold ? left.rows : right.rows).push_back(i);
    }
    const int left_id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(left));
    nodes.push_back(std::move(right));
    auto& parent = nodes[static_cast<std::size_t>(id)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = left_id;
    parent.right = left_id + 1;
    parent.rows.clear();
    parent.rows.shrink_to_fit();
    pending.push_back(left_id + 1);
    pending.push_back(left_id);
  }
  return tree;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

int DecisionTree::leaf_for(std::span<const double> x) const {
  int id = 0;
  while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
    const auto& n = nodes_[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return id;
}

std::vector<LeafBox> leaf_boxes(const DecisionTree& tree, std::size_t dim) {
  struct Frame {
    int node;
    std::vector<double> lo;
    std::vector<double> hi;
  };
  std::vector<LeafBox> out;
  std::vector<Frame> stack;
  stack.push_back({tree.root(), std::vector<double>(dim, -INFINITY),
                   std::vector<double>(dim, INFINITY)});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const auto& n = tree.nodes()[static_cast<std::size_t>(fr.node)];
    if (n.is_leaf()) {
      out.push_back({fr.node, Hyperrectangle(std::move(fr.lo), std::move(fr.hi))});
      continue;
    }
    const auto f = static_cast<std::size_t>(n.feature);
    Frame right{n.right, fr.lo, fr.hi};
    right.lo[f] = std::max(right.lo[f], n.threshold);
    Frame left{n.left, std::move(fr.lo), std::move(fr.hi)};
    left.hi[f] = std::min(left.hi[f], n.threshold);
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return out;
}

SpecSet gen_tree(const Dataset& gen, const TreeParams& params, TaskKind task) {
  if (task != gen.task()) {
    throw std::invalid_argument("task kind differs from the dataset's");
  }
  const DecisionTree tree = train_tree(gen, params);
  const auto boxes = leaf_boxes(tree, gen.cols());

  std::vector<std::optional<Specification>> found(boxes.size());
  const auto nb = static_cast<std::ptrdiff_t>(boxes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto& leaf = boxes[static_cast<std::size_t>(b)];
    if (auto spec = extract_specification(leaf.box, gen, task)) {
      spec->provenance = "tree:leaf:" + std::to_string(leaf.node);
      found[static_cast<std::size_t>(b)] = std::move(*spec);
    }
  }

  SpecSet set;
  set.task = task;
  set.feature_dim = gen.cols();
  set.generator = "tree";
  set.params = {{"max_depth", params.max_depth ? nlohmann::json(*params.max_depth)
                                               : nlohmann::json(nullptr)},
                {"min_samples_leaf", params.min_samples_leaf},
                {"min_samples_split", params.min_samples_split},
                {"criterion", task == TaskKind::Classification ? "gini" : "variance"},
                {"seed", params.seed},
                {"leaves", tree.leaf_count()}};
  for (auto& spec : found) {
    if (spec) set.specs.push_back(std::move(*spec));
  }
  return set;
}

}  // namespace specforge
