#include <gtest/gtest.h>

#include <numeric>

#include "irfs/cart.hpp"
#include "irfs/errors.hpp"
#include "irfs/rng.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace irfs {
namespace {

// Bypasses dataset validation so degenerate label sets can be fit.
Dataset raw(const std::vector<std::vector<double>>& cols, std::vector<int> labels, std::size_t classes) {
  Dataset d;
  d.num_features = cols.size();
  d.num_samples = labels.size();
  d.num_classes = classes;
  for (const auto& c : cols) d.values.insert(d.values.end(), c.begin(), c.end());
  for (std::size_t j = 0; j < cols.size(); ++j) d.feature_names.push_back("f" + std::to_string(j));
  d.labels = std::move(labels);
  return d;
}

double train_accuracy(const TreeModel& m, const Dataset& d) {
  const auto p = predict(m, d);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.num_samples; ++i) ok += p[i] == d.labels[i];
  return static_cast<double>(ok) / static_cast<double>(d.num_samples);
}

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t features, std::size_t classes, int levels) {
  std::vector<std::vector<double>> cols(features, std::vector<double>(n));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : cols) c[i] = static_cast<double>(rng.uniform_index(static_cast<std::size_t>(levels)));
    labels[i] = static_cast<int>(rng.uniform_index(classes));
  }
  return raw(cols, labels, classes);
}

TEST(CartFit, SingleThresholdSeparable) {
  const Dataset d = raw({{1, 2, 3, 4}, {7, 7, 7, 7}}, {0, 0, 1, 1}, 2);
  const std::vector<std::size_t> f0{0};
  const TreeModel m = fit(d, f0);
  ASSERT_EQ(m.split_count(), 1u);
  EXPECT_EQ(m.nodes[0].feature, 0);
  EXPECT_EQ(m.nodes[0].threshold, 2.5);
  EXPECT_EQ(train_accuracy(m, d), 1.0);
  EXPECT_EQ(m.importances[0], 1.0);
  EXPECT_EQ(m.importances[1], 0.0);
}

TEST(CartFit, PureLabelsGiveRootLeaf) {
  const Dataset d = raw({{1, 2, 3}, {3, 1, 2}}, {1, 1, 1}, 2);
  const std::vector<std::size_t> both{0, 1};
  const TreeModel m = fit(d, both);
  EXPECT_EQ(m.nodes.size(), 1u);
  EXPECT_EQ(m.split_count(), 0u);
  EXPECT_EQ(m.importances, (std::vector<double>{0.0, 0.0}));
}

TEST(CartFit, XorOnFourPoints) {
  const Dataset d = raw({{0, 0, 1, 1}, {0, 1, 0, 1}}, {0, 1, 1, 0}, 2);
  const std::vector<std::size_t> both{0, 1};
  const TreeModel m = fit(d, both);
  EXPECT_EQ(m.depth(), 2);
  EXPECT_EQ(train_accuracy(m, d), 1.0);
  // Every root split of balanced XOR has zero Gini decrease: the root (f0, by
  // the index tie rule) earns no importance and f1 carries all of it.
  EXPECT_EQ(m.nodes[0].feature, 0);
  EXPECT_EQ(m.importances[0], 0.0);
  EXPECT_EQ(m.importances[1], 1.0);
  // hand enumeration: the two depth-1 children each split on f1 at 0.5
  EXPECT_EQ(m.nodes[1].feature, 1);
  EXPECT_EQ(m.nodes[1].threshold, 0.5);
}

TEST(CartFit, IdenticalRowsWithMixedLabelsGiveMajorityLeaf) {
  const Dataset d = raw({{1, 1, 1}, {2, 2, 2}}, {0, 1, 1}, 2);
  const std::vector<std::size_t> both{0, 1};
  const TreeModel m = fit(d, both);
  EXPECT_EQ(m.split_count(), 0u);
  EXPECT_EQ(m.nodes[0].majority(), 1);
}

TEST(CartFit, Errors) {
  const Dataset d = raw({{1, 2}, {3, 4}}, {0, 1}, 2);
  EXPECT_THROW(fit(d, std::vector<std::size_t>{}), EmptyFeatureSet);
  EXPECT_THROW(fit(d, std::vector<std::size_t>{5}), IndexOutOfRange);
  TreeConfig bad;
  bad.min_samples_leaf = 3;
  EXPECT_THROW(fit(d, std::vector<std::size_t>{0}, bad), ConfigError);
}

TEST(CartPredict, BoundaryValueGoesLeft) {
  const Dataset d = raw({{1, 2, 3, 4}, {0, 0, 0, 0}}, {0, 0, 1, 1}, 2);
  const TreeModel m = fit(d, std::vector<std::size_t>{0});
  EXPECT_EQ(predict_row(m, std::vector<double>{2.5, 0.0}), 0);
  EXPECT_EQ(predict_row(m, std::vector<double>{2.5000001, 0.0}), 1);
  EXPECT_THROW(predict_row(m, std::vector<double>{2.5}), ShapeMismatch);
}

TEST(CartPredict, MajorityTieGoesToSmallerClass) {
  TreeNode leaf;
  leaf.class_counts = {0, 2, 2};
  EXPECT_EQ(leaf.majority(), 1);
}

TEST(CartPredict, AgreesWithRecursiveWalk) {
  Rng rng(21);
  const Dataset train = random_dataset(rng, 60, 4, 3, 6);
  const TreeModel m = fit(train, std::vector<std::size_t>{0, 1, 2, 3});
  const Dataset probe = random_dataset(rng, 100, 4, 3, 8);
  const auto p = predict(m, probe);
  for (std::size_t i = 0; i < probe.num_samples; ++i) EXPECT_EQ(p[i], testing::walk_predict(m, probe, i));
}

TEST(CartFit, MatchesExhaustiveOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(36);
    const std::size_t nf = 1 + rng.uniform_index(6);
    const Dataset d = random_dataset(rng, n, nf, 2 + rng.uniform_index(2), 2 + static_cast<int>(rng.uniform_index(6)));
    std::vector<std::size_t> feats(nf);
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    TreeConfig cfg;
    if (trial % 3 == 1) cfg.max_depth = 2;
    if (trial % 4 == 2) {
      cfg.min_samples_leaf = 2;
      cfg.min_samples_split = 4;
    }
    const TreeModel m = fit(d, feats, cfg);
    const auto oracle = testing::oracle_tree(d, feats, cfg);
    ASSERT_EQ(m.nodes.size(), oracle.size()) << "trial " << trial;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      EXPECT_EQ(m.nodes[k].feature, oracle[k].feature);
      EXPECT_EQ(m.nodes[k].threshold, oracle[k].threshold);
      EXPECT_EQ(m.nodes[k].left, oracle[k].left);
      EXPECT_EQ(m.nodes[k].class_counts, oracle[k].counts);
    }
  }
}

TEST(CartFit, ConfigLimitsRespected) {
  Rng rng(4);
  const Dataset d = random_dataset(rng, 80, 3, 2, 20);
  TreeConfig cfg;
  cfg.max_depth = 3;
  cfg.min_samples_leaf = 5;
  cfg.min_samples_split = 10;
  const TreeModel m = fit(d, std::vector<std::size_t>{0, 1, 2}, cfg);
  EXPECT_LE(m.depth(), 3);
  for (const auto& n : m.nodes) {
    EXPECT_GE(n.samples, 5u);
    if (!n.is_leaf()) EXPECT_GE(n.samples, 10u);
  }
}

TEST(CartProperties, DeterminismNormalizationPerfectFitAndRestriction) {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    // continuous features: no duplicate rows, so an unlimited tree fits perfectly
    const std::size_t n = 20 + rng.uniform_index(80);
    std::vector<std::vector<double>> cols(5, std::vector<double>(n));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : cols) c[i] = rng.normal();
      labels[i] = static_cast<int>(rng.uniform_index(3));
    }
    const Dataset d = raw(cols, labels, 3);
    const std::vector<std::size_t> all{0, 1, 2, 3, 4};
    const TreeModel a = fit(d, all);
    const TreeModel b = fit(d, all);
    EXPECT_EQ(dump(a), dump(b));
    EXPECT_EQ(a.importances, b.importances);
    EXPECT_EQ(train_accuracy(a, d), 1.0);

    const double sum = std::accumulate(a.importances.begin(), a.importances.end(), 0.0);
    EXPECT_NEAR(sum, a.split_count() ? 1.0 : 0.0, 1e-9);
    for (double v : a.importances) EXPECT_GE(v, 0.0);

    for (const auto& node : a.nodes) {
      if (node.is_leaf()) continue;
      const auto col = d.column(static_cast<std::size_t>(node.feature));
      bool below = false, above = false;
      for (double v : col) {
        below |= v < node.threshold;
        above |= v > node.threshold;
      }
      EXPECT_TRUE(below && above);
    }

    const TreeModel restricted = fit(d, a.used_features());
    EXPECT_EQ(predict(restricted, d), predict(a, d));
  }
}

TEST(EvaluateAccuracy, SeparableDataScoresOne) {
  const Dataset d = testing::thresholded_copy_dataset(300, 4, 2, 5);
  const auto [train, test] = split(d, {0.8, 1});
  EXPECT_EQ(evaluate_accuracy(train, test, std::vector<std::size_t>{0, 1, 2, 3}), 1.0);
  EXPECT_THROW(evaluate_accuracy(train, test, std::vector<std::size_t>{}), EmptyFeatureSet);
}

TEST(EvaluateAccuracy, PermutedTestLabelsNearChance) {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = testing::thresholded_copy_dataset(400, 3, 0, 100 + seed);
    auto [train, test] = split(d, {0.5, seed});
    Rng rng(seed);
    rng.shuffle(test.labels);
    // independent labels: assign balanced random classes
    for (int& y : test.labels) y = static_cast<int>(rng.uniform_index(2));
    total += evaluate_accuracy(train, test, std::vector<std::size_t>{0, 1, 2});
  }
  EXPECT_NEAR(total / 10.0, 0.5, 0.1);
}

TEST(EvaluateAccuracy, ConstantFeatureGivesMajorityFraction) {
  std::vector<int> train_labels{0, 0, 0, 1, 1, 0, 0, 1, 0, 0};
  std::vector<int> test_labels{0, 1, 0, 0, 1};
  const Dataset train = raw({std::vector<double>(10, 2.0), std::vector<double>(10, 1.0)}, train_labels, 2);
  const Dataset test = raw({std::vector<double>(5, 2.0), std::vector<double>(5, 1.0)}, test_labels, 2);
  EXPECT_DOUBLE_EQ(evaluate_accuracy(train, test, std::vector<std::size_t>{0}), 3.0 / 5.0);
}

}  // namespace
}  // namespace irfs
