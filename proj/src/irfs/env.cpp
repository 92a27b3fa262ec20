#include "irfs/env.hpp"

#include <algorithm>
#include <cmath>

#include "irfs/errors.hpp"
#include "irfs/rng.hpp"

namespace irfs {
namespace {

std::vector<double> pool(const std::vector<std::array<double, ColumnStats::kCount>>& rows) {
  std::vector<double> out(kStateDim, 0.0);
  if (rows.empty()) return out;
  std::vector<double> column(rows.size());
  for (std::size_t k = 0; k < ColumnStats::kCount; ++k) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][k];
    const auto s = describe(column).as_array();
    std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(k * ColumnStats::kCount));
  }
  return out;
}

void check_indices(std::span<const std::size_t> selected, std::size_t n) {
  for (std::size_t f : selected) {
    if (f >= n) throw IndexOutOfRange("selected feature " + std::to_string(f) + " out of range");
  }
}

}  // namespace

std::vector<std::size_t> selected_indices(const ActionVector& actions) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i]) out.push_back(i);
  }
  return out;
}

StateEncoder::StateEncoder(const Dataset& train, EncoderKind kind, std::uint64_t seed)
    : kind_(kind), num_features_(train.num_features) {
  const auto z = standardized_values(train);
  const std::size_t n = train.num_samples;
  column_stats_.reserve(num_features_);
  for (std::size_t j = 0; j < num_features_; ++j) {
    column_stats_.push_back(describe(std::span<const double>(z.data() + j * n, n)));
  }
  if (kind_ == EncoderKind::Graph) {
    abs_corr_.assign(num_features_ * num_features_, 0.0);
    for (std::size_t a = 0; a < num_features_; ++a) {
      abs_corr_[a * num_features_ + a] = 1.0;
      for (std::size_t b = a + 1; b < num_features_; ++b) {
        const double r = std::abs(pearson(train.column(a), train.column(b)));
        abs_corr_[a * num_features_ + b] = r;
        abs_corr_[b * num_features_ + a] = r;
      }
    }
    Rng rng(derive_seed(seed, 0x67636e));
    const double bound = 1.0 / std::sqrt(static_cast<double>(ColumnStats::kCount));
    projection_.resize(ColumnStats::kCount * ColumnStats::kCount);
    for (double& w : projection_) w = rng.uniform(-bound, bound);
  }
}

std::vector<double> StateEncoder::encode(std::span<const std::size_t> selected) const {
  check_indices(selected, num_features_);
  // Sorted so floating-point sums do not depend on the caller's ordering.
  std::vector<std::size_t> order(selected.begin(), selected.end());
  std::sort(order.begin(), order.end());
  if (kind_ == EncoderKind::Graph) return encode_graph(order);
  std::vector<std::array<double, ColumnStats::kCount>> rows;
  rows.reserve(order.size());
  for (std::size_t f : order) rows.push_back(column_stats_[f].as_array());
  return pool(rows);
}

std::vector<double> StateEncoder::encode_graph(std::span<const std::size_t> selected) const {
  constexpr std::size_t K = ColumnStats::kCount;
  std::vector<std::array<double, K>> rows(selected.size());
  for (std::size_t a = 0; a < selected.size(); ++a) {
    std::array<double, K> mixed{};
    double degree = 0.0;
    for (std::size_t b = 0; b < selected.size(); ++b) {
      const double w = abs_corr_[selected[a] * num_features_ + selected[b]];
      degree += w;
      const auto x = column_stats_[selected[b]].as_array();
      for (std::size_t k = 0; k < K; ++k) mixed[k] += w * x[k];
    }
    for (std::size_t k = 0; k < K; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < K; ++i) v += projection_[i * K + k] * mixed[i] / degree;
      rows[a][k] = std::tanh(v);
    }
  }
  return pool(rows);
}

std::vector<double> encode_state(const Dataset& train, std::span<const std::size_t> selected) {
  return StateEncoder(train).encode(selected);
}

std::vector<double> compute_reward(double accuracy, const ActionVector& advised_actions) {
  std::vector<double> rewards(advised_actions.size(), 0.0);
  const auto selectors = static_cast<std::size_t>(std::count_if(
      advised_actions.begin(), advised_actions.end(), [](std::uint8_t a) { return a != 0; }));
  if (selectors == 0) return rewards;
  const double share = accuracy / static_cast<double>(selectors);
  for (std::size_t i = 0; i < advised_actions.size(); ++i) {
    if (advised_actions[i]) rewards[i] = share;
  }
  return rewards;
}

const char* to_string(AdviceSource source) {
  switch (source) {
    case AdviceSource::Trainer1:
      return "trainer1";
    case AdviceSource::Trainer2:
      return "trainer2";
    case AdviceSource::None:
      break;
  }
  return "none";
}

std::size_t StepRecord::selected_count() const {
  return static_cast<std::size_t>(
      std::count_if(advised_actions.begin(), advised_actions.end(), [](std::uint8_t a) { return a != 0; }));
}

void BestAccTracker::push(double accuracy) {
  trace_.push_back(accuracy);
  running_.push_back(running_.empty() ? accuracy : std::max(running_.back(), accuracy));
}

double BestAccTracker::best_acc(std::size_t start, std::size_t window) const {
  if (start >= trace_.size() || window >= trace_.size() - start) {
    throw RangeError("best_acc window [" + std::to_string(start) + ", " + std::to_string(start + window) +
                     "] exceeds the " + std::to_string(trace_.size()) + "-step trace");
  }
  if (start == 0) return running_[window];
  const auto first = trace_.begin() + static_cast<std::ptrdiff_t>(start);
  return *std::max_element(first, first + static_cast<std::ptrdiff_t>(window) + 1);
}

double BestAccTracker::running_best(std::size_t t) const {
  if (t >= running_.size()) throw RangeError("step beyond the recorded trace");
  return running_[t];
}

Environment::Environment(Dataset train, Dataset test, TreeConfig tree, EncoderKind encoder,
                         std::uint64_t encoder_seed)
    : train_(std::move(train)),
      test_(std::move(test)),
      tree_(tree),
      encoder_(train_, encoder, encoder_seed),
      state_(kStateDim, 0.0) {
  tree_.validate();
  if (train_.num_features != test_.num_features) throw ShapeMismatch("train/test feature counts differ");
}

double Environment::accuracy(const ActionVector& actions) {
  if (actions.size() != train_.num_features) throw LengthMismatch("action vector length differs from N");
  const auto selected = selected_indices(actions);
  if (selected.empty()) return 0.0;
  std::string key(actions.begin(), actions.end());
  if (const auto it = accuracy_cache_.find(key); it != accuracy_cache_.end()) return it->second;
  const double acc = evaluate_accuracy(train_, test_, selected, tree_);
  accuracy_cache_.emplace(std::move(key), acc);
  return acc;
}

StepRecord Environment::step(std::vector<Agent>& agents, const LearnConfig& learn, const ActionVector& actions) {
  if (agents.size() != train_.num_features) throw LengthMismatch("agent count differs from N");
  StepRecord rec;
  rec.step = steps_;
  rec.advised_actions = actions;
  rec.accuracy = accuracy(actions);
  rec.state_before = state_;
  rec.state_after = encoder_.encode(selected_indices(actions));
  rec.rewards = compute_reward(rec.accuracy, actions);

  for (std::size_t i = 0; i < agents.size(); ++i) {
    remember_and_learn(agents[i], Transition{rec.state_before, actions[i] ? kSelect : kDeselect, rec.rewards[i],
                                             rec.state_after},
                       learn);
  }
  state_ = rec.state_after;
  ++steps_;
  return rec;
}

}  // namespace irfs
