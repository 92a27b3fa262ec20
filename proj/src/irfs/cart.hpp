#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irfs/dataset.hpp"

namespace irfs {

struct TreeConfig {
  std::optional<int> max_depth;  // unlimited when empty
  int min_samples_split = 2;
  int min_samples_leaf = 1;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> class_counts;

  bool is_leaf() const { return feature < 0; }
  /// Majority class; ties resolve to the smaller id.
  int majority() const;
};

/// Gini CART classifier. Nodes are stored in preorder with the root at 0.
struct TreeModel {
  std::vector<TreeNode> nodes;
  std::vector<double> importances;  // one entry per dataset feature
  std::vector<std::size_t> trained_features;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;

  std::size_t split_count() const;
  int depth() const;
  /// Features used by at least one split, ascending.
  std::vector<std::size_t> used_features() const;
};

/// Greedy exact-split training on the listed features. Splits maximize the
/// Gini decrease; ties go to the lower feature index, then the lower
/// threshold. Rows with value <= threshold go left. A node becomes a leaf
/// when pure, at a config limit, or when no feature varies inside it.
TreeModel fit(const Dataset& train, std::span<const std::size_t> features, const TreeConfig& cfg = {});

/// Routes one full-width row (num_features values) to its leaf class.
int predict_row(const TreeModel& model, std::span<const double> row);

std::vector<int> predict(const TreeModel& model, const Dataset& rows);

/// Fraction of test labels predicted correctly by a tree fit on the listed
/// features of train.
double evaluate_accuracy(const Dataset& train, const Dataset& test, std::span<const std::size_t> features,
                         const TreeConfig& cfg = {});

/// One line per node: depth, feature, threshold, class counts.
std::string dump(const TreeModel& model);

}  // namespace irfs
