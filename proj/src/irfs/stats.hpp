#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace irfs {

struct Dataset;

/// Seven descriptive statistics of one column. std is the population value;
/// quantiles interpolate linearly between order statistics.
struct ColumnStats {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;

  static constexpr std::size_t kCount = 7;
  std::array<double, kCount> as_array() const { return {mean, std, min, q25, median, q75, max}; }
};

ColumnStats describe(std::span<const double> column);

/// Quantile of already sorted data at position q * (n - 1).
double quantile_sorted(std::span<const double> sorted, double q);

/// Pearson correlation clamped to [-1, 1]; 0 when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct BinningSpec {
  int num_bins = 10;
};

/// Quantile-edge binning. Duplicate edges collapse, and the resulting ids are
/// renumbered densely in ascending value order.
std::vector<int> discretize(std::span<const double> column, const BinningSpec& spec = {});

/// Plug-in mutual information in nats between two dense id vectors.
double mutual_info(std::span<const int> x, std::span<const int> y);

/// Plug-in entropy in nats.
double entropy(std::span<const int> x);

/// MI between each listed feature (discretized) and the class labels.
std::map<std::size_t, double> mi_relevance(const Dataset& d, std::span<const std::size_t> features,
                                           const BinningSpec& bins = {});

/// Scores for every feature, indexed by feature.
std::vector<double> mi_relevance_all(const Dataset& d, const BinningSpec& bins = {});

}  // namespace irfs
