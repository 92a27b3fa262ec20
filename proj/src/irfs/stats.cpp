#include "irfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "irfs/dataset.hpp"
#include "irfs/errors.hpp"

namespace irfs {
namespace {

// Dense contingency counts over ids in [0, kx) x [0, ky).
struct Contingency {
  std::size_t kx = 0;
  std::size_t ky = 0;
  std::vector<std::size_t> joint;
  std::vector<std::size_t> px;
  std::vector<std::size_t> py;
};

std::size_t id_range(std::span<const int> ids) {
  int hi = -1;
  for (int v : ids) {
    if (v < 0) throw RangeError("class/bin ids must be non-negative");
    hi = std::max(hi, v);
  }
  return static_cast<std::size_t>(hi + 1);
}

Contingency count(std::span<const int> x, std::span<const int> y) {
  Contingency c;
  c.kx = id_range(x);
  c.ky = id_range(y);
  c.joint.assign(c.kx * c.ky, 0);
  c.px.assign(c.kx, 0);
  c.py.assign(c.ky, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto a = static_cast<std::size_t>(x[i]);
    const auto b = static_cast<std::size_t>(y[i]);
    ++c.joint[a * c.ky + b];
    ++c.px[a];
    ++c.py[b];
  }
  return c;
}

// Sorting the terms makes the sum independent of argument order, which keeps
// MI(x, y) and MI(y, x) bitwise equal.
double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyInput("quantile of empty input");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ColumnStats describe(std::span<const double> column) {
  if (column.empty()) throw EmptyInput("describe of empty column");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  ColumnStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q25 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q75 = quantile_sorted(sorted, 0.75);
  if (s.min == s.max) {
    s.mean = s.min;
    s.std = 0.0;
    return s;
  }
  const double n = static_cast<double>(column.size());
  double sum = 0.0;
  for (double v : column) sum += v;
  s.mean = std::clamp(sum / n, s.min, s.max);
  double ss = 0.0;
  for (double v : column) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("pearson inputs differ in length");
  if (x.size() < 2) throw EmptyInput("pearson needs at least 2 samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  const bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (x_const || y_const || sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<int> discretize(std::span<const double> column, const BinningSpec& spec) {
  if (column.empty()) throw EmptyInput("discretize of empty column");
  if (spec.num_bins < 2) throw ConfigError("num_bins must be at least 2");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(spec.num_bins - 1));
  for (int b = 1; b < spec.num_bins; ++b) {
    edges.push_back(quantile_sorted(sorted, static_cast<double>(b) / spec.num_bins));
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // value <= edge stays in the lower bin
  std::vector<int> raw(column.size());
  std::vector<bool> used(edges.size() + 1, false);
  for (std::size_t i = 0; i < column.size(); ++i) {
    const auto bin = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), column[i]) - edges.begin());
    raw[i] = static_cast<int>(bin);
    used[bin] = true;
  }
  std::vector<int> dense(used.size(), 0);
  int next = 0;
  for (std::size_t b = 0; b < used.size(); ++b) {
    if (used[b]) dense[b] = next++;
  }
  for (int& v : raw) v = dense[static_cast<std::size_t>(v)];
  return raw;
}

double mutual_info(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) throw LengthMismatch("mutual_info inputs differ in length");
  if (x.empty()) return 0.0;
  const Contingency c = count(x, y);
  const double n = static_cast<double>(x.size());
  std::vector<double> terms;
  for (std::size_t a = 0; a < c.kx; ++a) {
    for (std::size_t b = 0; b < c.ky; ++b) {
      const std::size_t nab = c.joint[a * c.ky + b];
      if (nab == 0) continue;
      const double pab = static_cast<double>(nab) / n;
      const double ratio = (static_cast<double>(nab) * n) /
                           (static_cast<double>(c.px[a]) * static_cast<double>(c.py[b]));
      terms.push_back(pab * std::log(ratio));
    }
  }
  return std::max(0.0, ordered_sum(terms));
}

double entropy(std::span<const int> x) {
  if (x.empty()) return 0.0;
  std::vector<std::size_t> counts(id_range(x), 0);
  for (int v : x) ++counts[static_cast<std::size_t>(v)];
  const double n = static_cast<double>(x.size());
  std::vector<double> terms;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    terms.push_back(-p * std::log(p));
  }
  return ordered_sum(terms);
}

std::map<std::size_t, double> mi_relevance(const Dataset& d, std::span<const std::size_t> features,
                                           const BinningSpec& bins) {
  std::map<std::size_t, double> scores;
  for (std::size_t f : features) {
    if (f >= d.num_features) throw IndexOutOfRange("feature index " + std::to_string(f) + " out of range");
    scores[f] = mutual_info(discretize(d.column(f), bins), d.labels);
  }
  return scores;
}

std::vector<double> mi_relevance_all(const Dataset& d, const BinningSpec& bins) {
  std::vector<double> scores(d.num_features);
  for (std::size_t f = 0; f < d.num_features; ++f) {
    scores[f] = mutual_info(discretize(d.column(f), bins), d.labels);
  }
  return scores;
}

}  // namespace irfs
