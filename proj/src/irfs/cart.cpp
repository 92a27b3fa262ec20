#include "irfs/cart.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "irfs/errors.hpp"

namespace irfs {
namespace {

__extension__ typedef __int128 wide_int;

// Candidate split quality sum_c(l_c^2)/n_l + sum_c(r_c^2)/n_r kept as an exact
// fraction so equal gains compare equal and tie-breaking stays total.
struct SplitScore {
  wide_int num = 0;
  wide_int den = 1;

  bool greater_than(const SplitScore& o) const { return num * o.den > o.num * den; }
};

SplitScore score_of(std::size_t sum_sq_left, std::size_t n_left, std::size_t sum_sq_right, std::size_t n_right) {
  SplitScore s;
  s.num = static_cast<wide_int>(sum_sq_left) * static_cast<wide_int>(n_right) +
          static_cast<wide_int>(sum_sq_right) * static_cast<wide_int>(n_left);
  s.den = static_cast<wide_int>(n_left) * static_cast<wide_int>(n_right);
  return s;
}

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return (mid < hi) ? mid : lo;
}

struct Builder {
  const Dataset& data;
  const TreeConfig& cfg;
  std::vector<std::size_t> features;
  // sorted[k] holds sample rows ordered by feature features[k]; a node owns
  // the same [begin, end) range in every array.
  std::vector<std::vector<std::size_t>> sorted;
  std::vector<char> goes_left;
  std::vector<std::size_t> scratch;
  TreeModel model;
  double total = 0.0;

  struct Best {
    bool found = false;
    std::size_t feature_slot = 0;
    double threshold = 0.0;
    std::size_t n_left = 0;
    SplitScore score;
    std::size_t sum_sq_left = 0;
    std::size_t sum_sq_right = 0;
  };

  Builder(const Dataset& d, std::span<const std::size_t> feats, const TreeConfig& c) : data(d), cfg(c) {
    features.assign(feats.begin(), feats.end());
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    const std::size_t n = d.num_samples;
    sorted.resize(features.size());
    for (std::size_t k = 0; k < features.size(); ++k) {
      const auto col = d.column(features[k]);
      auto& order = sorted[k];
      order.resize(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    }
    goes_left.assign(n, 0);
    scratch.resize(n);
    total = static_cast<double>(n);
    model.num_features = d.num_features;
    model.num_classes = d.num_classes;
    model.trained_features = features;
    model.importances.assign(d.num_features, 0.0);
  }

  std::vector<std::size_t> count_classes(std::size_t begin, std::size_t end) const {
    std::vector<std::size_t> counts(data.num_classes, 0);
    for (std::size_t i = begin; i < end; ++i) ++counts[static_cast<std::size_t>(data.labels[sorted[0][i]])];
    return counts;
  }

  Best find_split(std::size_t begin, std::size_t end, const std::vector<std::size_t>& counts) const {
    const std::size_t n = end - begin;
    const auto min_leaf = static_cast<std::size_t>(cfg.min_samples_leaf);
    std::size_t parent_sum_sq = 0;
    for (std::size_t c : counts) parent_sum_sq += c * c;

    Best best;
    std::vector<std::size_t> left(data.num_classes);
    for (std::size_t k = 0; k < features.size(); ++k) {
      const auto col = data.column(features[k]);
      const auto& order = sorted[k];
      std::fill(left.begin(), left.end(), 0);
      std::size_t sum_sq_left = 0;
      std::size_t sum_sq_right = parent_sum_sq;
      for (std::size_t i = begin; i + 1 < end; ++i) {
        const auto y = static_cast<std::size_t>(data.labels[order[i]]);
        const std::size_t right_y = counts[y] - left[y];
        sum_sq_left += 2 * left[y] + 1;
        sum_sq_right -= 2 * right_y - 1;
        ++left[y];
        const double lo = col[order[i]];
        const double hi = col[order[i + 1]];
        if (!(lo < hi)) continue;
        const std::size_t n_left = i + 1 - begin;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const SplitScore s = score_of(sum_sq_left, n_left, sum_sq_right, n_right);
        if (!best.found || s.greater_than(best.score)) {
          best.found = true;
          best.feature_slot = k;
          best.threshold = midpoint(lo, hi);
          best.n_left = n_left;
          best.score = s;
          best.sum_sq_left = sum_sq_left;
          best.sum_sq_right = sum_sq_right;
        }
      }
    }
    // A zero-decrease split is still taken (XOR-like nodes need it); the
    // exact score can never fall below the parent's.
    return best;
  }

  void partition(std::size_t begin, std::size_t end, const Best& best) {
    const auto col = data.column(features[best.feature_slot]);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t row = sorted[best.feature_slot][i];
      goes_left[row] = col[row] <= best.threshold ? 1 : 0;
    }
    for (auto& order : sorted) {
      std::size_t l = begin;
      std::size_t r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t row = order[i];
        if (goes_left[row]) {
          order[l++] = row;
        } else {
          scratch[r++] = row;
        }
      }
      std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(r),
                order.begin() + static_cast<std::ptrdiff_t>(l));
    }
  }

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    TreeNode node;
    node.depth = depth;
    node.samples = end - begin;
    node.class_counts = count_classes(begin, end);

    const std::size_t n = end - begin;
    const bool pure = std::count_if(node.class_counts.begin(), node.class_counts.end(),
                                    [](std::size_t c) { return c > 0; }) <= 1;
    const bool depth_capped = cfg.max_depth && depth >= *cfg.max_depth;
    if (pure || depth_capped || n < static_cast<std::size_t>(cfg.min_samples_split)) {
      model.nodes[static_cast<std::size_t>(id)] = std::move(node);
      return id;
    }
    const Best best = find_split(begin, end, node.class_counts);
    if (!best.found) {
      model.nodes[static_cast<std::size_t>(id)] = std::move(node);
      return id;
    }

    std::size_t parent_sum_sq = 0;
    for (std::size_t c : node.class_counts) parent_sum_sq += c * c;
    const double n_left = static_cast<double>(best.n_left);
    const double n_right = static_cast<double>(n - best.n_left);
    const double decrease = static_cast<double>(best.sum_sq_left) / n_left +
                            static_cast<double>(best.sum_sq_right) / n_right -
                            static_cast<double>(parent_sum_sq) / static_cast<double>(n);
    model.importances[features[best.feature_slot]] += decrease / total;

    node.feature = static_cast<int>(features[best.feature_slot]);
    node.threshold = best.threshold;
    model.nodes[static_cast<std::size_t>(id)] = node;

    partition(begin, end, best);
    const int left = grow(begin, begin + best.n_left, depth + 1);
    const int right = grow(begin + best.n_left, end, depth + 1);
    model.nodes[static_cast<std::size_t>(id)].left = left;
    model.nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }
};

}  // namespace

void TreeConfig::validate() const {
  if (max_depth && *max_depth < 1) throw ConfigError("max_depth must be positive");
  if (min_samples_split < 1 || min_samples_leaf < 1) throw ConfigError("sample limits must be positive");
  if (min_samples_leaf > min_samples_split) throw ConfigError("min_samples_leaf exceeds min_samples_split");
}

int TreeNode::majority() const {
  std::size_t best = 0;
  for (std::size_t c = 1; c < class_counts.size(); ++c) {
    if (class_counts[c] > class_counts[best]) best = c;
  }
  return static_cast<int>(best);
}

std::size_t TreeModel::split_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

int TreeModel::depth() const {
  int d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::vector<std::size_t> TreeModel::used_features() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes) {
    if (!n.is_leaf()) out.push_back(static_cast<std::size_t>(n.feature));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TreeModel fit(const Dataset& train, std::span<const std::size_t> features, const TreeConfig& cfg) {
  cfg.validate();
  if (features.empty()) throw EmptyFeatureSet("tree fit needs at least one feature");
  if (train.num_samples < 1) throw EmptyInput("tree fit needs samples");
  for (std::size_t f : features) {
    if (f >= train.num_features) throw IndexOutOfRange("feature index " + std::to_string(f) + " out of range");
  }
  Builder b(train, features, cfg);
  b.grow(0, train.num_samples, 0);

  double sum = 0.0;
  for (double v : b.model.importances) sum += v;
  if (sum > 0.0) {
    for (double& v : b.model.importances) v /= sum;
  } else {
    std::fill(b.model.importances.begin(), b.model.importances.end(), 0.0);
  }
  return std::move(b.model);
}

int predict_row(const TreeModel& model, std::span<const double> row) {
  if (row.size() != model.num_features) throw ShapeMismatch("row width differs from the trained dataset");
  std::size_t at = 0;
  while (!model.nodes[at].is_leaf()) {
    const auto& n = model.nodes[at];
    at = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return model.nodes[at].majority();
}

std::vector<int> predict(const TreeModel& model, const Dataset& rows) {
  if (rows.num_features != model.num_features) throw ShapeMismatch("dataset width differs from the trained dataset");
  std::vector<int> out(rows.num_samples);
  for (std::size_t i = 0; i < rows.num_samples; ++i) {
    std::size_t at = 0;
    while (!model.nodes[at].is_leaf()) {
      const auto& n = model.nodes[at];
      at = static_cast<std::size_t>(rows.at(i, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right);
    }
    out[i] = model.nodes[at].majority();
  }
  return out;
}

double evaluate_accuracy(const Dataset& train, const Dataset& test, std::span<const std::size_t> features,
                         const TreeConfig& cfg) {
  if (features.empty()) throw EmptyFeatureSet("accuracy of an empty feature set is undefined");
  if (test.num_samples == 0) throw EmptyInput("empty test set");
  const TreeModel model = fit(train, features, cfg);
  const auto predicted = predict(model, test);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.num_samples; ++i) correct += predicted[i] == test.labels[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(test.num_samples);
}

std::string dump(const TreeModel& model) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& n : model.nodes) {
    out << n.depth << ' ' << n.feature << ' ' << (n.is_leaf() ? 0.0 : n.threshold);
    for (std::size_t c : n.class_counts) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

}  // namespace irfs
