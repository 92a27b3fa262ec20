#include "irfs/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "irfs/errors.hpp"

namespace irfs {
namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw RangeError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

std::size_t default_baseline_k(std::size_t num_features) { return std::max<std::size_t>(1, num_features / 2); }

std::vector<std::size_t> kbest_select(const Dataset& train, std::size_t k, const BinningSpec& bins) {
  check_k(k, train.num_features);
  const auto relevance = mi_relevance_all(train, bins);
  std::vector<std::size_t> order(train.num_features);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (relevance[a] != relevance[b]) return relevance[a] > relevance[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> dtrfe_select(const Dataset& train, std::size_t k, const TreeConfig& cfg) {
  check_k(k, train.num_features);
  std::vector<std::size_t> remaining(train.num_features);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  while (remaining.size() > k) {
    const TreeModel model = fit(train, remaining, cfg);
    // weakest importance; among equals the higher index goes first
    std::size_t drop = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      if (model.importances[remaining[i]] <= model.importances[remaining[drop]]) drop = i;
    }
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return remaining;
}

std::vector<std::size_t> mrmr_select(const Dataset& train, std::size_t k, const BinningSpec& bins) {
  check_k(k, train.num_features);
  const std::size_t n = train.num_features;
  std::vector<std::vector<int>> binned(n);
  std::vector<double> relevance(n);
  for (std::size_t f = 0; f < n; ++f) {
    binned[f] = discretize(train.column(f), bins);
    relevance[f] = mutual_info(binned[f], train.labels);
  }
  std::vector<std::size_t> picked;
  std::vector<bool> used(n, false);
  std::vector<double> redundancy_sum(n, 0.0);
  while (picked.size() < k) {
    std::size_t best = n;
    double best_score = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
      if (used[f]) continue;
      const double score =
          picked.empty() ? relevance[f] : relevance[f] - redundancy_sum[f] / static_cast<double>(picked.size());
      if (best == n || score > best_score) {
        best = f;
        best_score = score;
      }
    }
    used[best] = true;
    picked.push_back(best);
    for (std::size_t f = 0; f < n; ++f) {
      if (!used[f]) redundancy_sum[f] += mutual_info(binned[f], binned[best]);
    }
  }
  return picked;
}

BestAccTracker run_marlfs(Environment env, IrfsOptions options, std::size_t steps) {
  options.plan = TeachingPlan{};
  IrfsLoop loop(std::move(env), std::move(options));
  BestAccTracker tracker;
  for (std::size_t t = 0; t < steps; ++t) tracker.push(loop.step().accuracy);
  return tracker;
}

}  // namespace irfs
