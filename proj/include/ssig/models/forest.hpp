#pragma once

// Random forest with Gini splits, bootstrap sampling, and per-split feature
// subsampling of floor(sqrt(d)) features.
//
// Reproducibility contract: tree t uses mt19937_64 seeded with
// derive_seed(seed, t); its bootstrap is n successive `rng() % n` draws over
// row positions, then each split draws its feature subset from the same
// generator by partial Fisher-Yates. Row order therefore matters and callers
// fix it by sorting sessions by id.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

struct ForestNode {
  int feature = -1;        // -1 for leaves
  double threshold = 0.0;  // goes left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int leaf_class = -1;
};

struct ForestTree {
  std::vector<ForestNode> nodes;
};

struct ForestModel {
  int n_trees = 100;
  int max_depth = 0;  // 0 = unlimited
  std::uint64_t seed = 1;
  std::vector<ForestTree> trees;
};

namespace forest_detail {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gini = std::numeric_limits<double>::infinity();
};

inline double gini_impurity(std::size_t n0, std::size_t n1) {
  const double n = static_cast<double>(n0 + n1);
  if (n == 0.0) return 0.0;
  const double p0 = static_cast<double>(n0) / n;
  const double p1 = static_cast<double>(n1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

// Best midpoint threshold for one feature over the node's samples, by
// weighted Gini of the children; returns an infinite-gini split when the
// feature is constant on the node.
inline Split best_split_for_feature(const DenseMatrix& x, std::span<const int> y,
                                    std::span<const std::size_t> idx, int feature) {
  struct Pair {
    double v;
    int label;
  };
  std::vector<Pair> pairs;
  pairs.reserve(idx.size());
  for (const std::size_t r : idx) pairs.push_back({x.at(r, static_cast<std::size_t>(feature)), y[r]});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.v < b.v; });
  Split best;
  best.feature = feature;
  std::size_t left0 = 0, left1 = 0;
  std::size_t total0 = 0, total1 = 0;
  for (const Pair& p : pairs) (p.label == 0 ? total0 : total1) += 1;
  const auto n = static_cast<double>(pairs.size());
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    (pairs[i].label == 0 ? left0 : left1) += 1;
    if (pairs[i].v == pairs[i + 1].v) continue;
    const double threshold = pairs[i].v + (pairs[i + 1].v - pairs[i].v) / 2.0;
    const std::size_t nl = i + 1, nr = pairs.size() - nl;
    const double g = (static_cast<double>(nl) * gini_impurity(left0, left1) +
                      static_cast<double>(nr) * gini_impurity(total0 - left0, total1 - left1)) /
                     n;
    if (g < best.gini) {
      best.gini = g;
      best.threshold = threshold;
    }
  }
  return best;
}

// Partial Fisher-Yates draw of m feature indices out of d.
inline std::vector<int> draw_features(Rng& rng, std::size_t d, std::size_t m) {
  std::vector<int> all(d);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, d - i));
    std::swap(all[i], all[j]);
  }
  all.resize(m);
  return all;
}

inline int grow_node(ForestTree& tree, const DenseMatrix& x, std::span<const int> y,
                     std::vector<std::size_t>& idx, int depth, int max_depth, Rng& rng) {
  std::size_t n0 = 0, n1 = 0;
  for (const std::size_t r : idx) (y[r] == 0 ? n0 : n1) += 1;
  const auto make_leaf = [&]() {
    ForestNode leaf;
    leaf.leaf_class = n1 > n0 ? 1 : 0;  // tie goes to class 0
    tree.nodes.push_back(leaf);
    return static_cast<int>(tree.nodes.size() - 1);
  };
  if (n0 == 0 || n1 == 0 || idx.size() < 2 || (max_depth > 0 && depth >= max_depth))
    return make_leaf();

  const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols)))));
  const auto features = draw_features(rng, x.cols, m);
  Split best;
  for (const int f : features) {
    const Split s = best_split_for_feature(x, y, idx, f);
    if (s.gini < best.gini) best = s;
  }
  if (best.feature < 0 || !std::isfinite(best.gini)) return make_leaf();

  std::vector<std::size_t> left_idx, right_idx;
  for (const std::size_t r : idx) {
    if (x.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold)
      left_idx.push_back(r);
    else
      right_idx.push_back(r);
  }
  if (left_idx.empty() || right_idx.empty()) return make_leaf();

  ForestNode node;
  node.feature = best.feature;
  node.threshold = best.threshold;
  tree.nodes.push_back(node);
  const auto self = static_cast<int>(tree.nodes.size() - 1);
  const int l = grow_node(tree, x, y, left_idx, depth + 1, max_depth, rng);
  const int r = grow_node(tree, x, y, right_idx, depth + 1, max_depth, rng);
  tree.nodes[static_cast<std::size_t>(self)].left = l;
  tree.nodes[static_cast<std::size_t>(self)].right = r;
  return self;
}

}  // namespace forest_detail

inline ForestModel train_random_forest(const DenseMatrix& x, std::span<const int> y, int n_trees,
                                       int max_depth, std::uint64_t seed) {
  ForestModel m;
  m.n_trees = n_trees;
  m.max_depth = max_depth;
  m.seed = seed;
  m.trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> idx(x.rows);
    for (auto& v : idx) v = static_cast<std::size_t>(uniform_below(rng, x.rows));
    ForestTree tree;
    forest_detail::grow_node(tree, x, y, idx, 0, max_depth, rng);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

inline int tree_predict(const ForestTree& tree, std::span<const double> row) {
  // the root is the first node grown
  int cur = 0;
  while (tree.nodes[static_cast<std::size_t>(cur)].leaf_class < 0) {
    const ForestNode& n = tree.nodes[static_cast<std::size_t>(cur)];
    cur = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[static_cast<std::size_t>(cur)].leaf_class;
}

// Fraction of trees voting class 1.
inline double forest_score(const ForestModel& m, std::span<const double> row) {
  int votes = 0;
  for (const ForestTree& t : m.trees) votes += tree_predict(t, row);
  return static_cast<double>(votes) / static_cast<double>(m.trees.size());
}

}  // namespace ssig
