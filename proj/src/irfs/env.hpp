#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "irfs/cart.hpp"
#include "irfs/dataset.hpp"
#include "irfs/qpolicy.hpp"
#include "irfs/stats.hpp"

namespace irfs {

inline constexpr std::size_t kStateDim = ColumnStats::kCount * ColumnStats::kCount;

/// One byte per agent, 1 = select.
using ActionVector = std::vector<std::uint8_t>;

std::vector<std::size_t> selected_indices(const ActionVector& actions);

enum class EncoderKind {
  MetaStats,  // two-level descriptive statistics (default)
  Graph,      // one |Pearson|-weighted propagation step, then the same pooling
};

/// Encodes a selected feature subset as a fixed 49-value vector.
///
/// Each selected column (z-scored on the training split) contributes its 7
/// ColumnStats; the resulting |S| x 7 matrix is summarized column by column
/// with ColumnStats again. Entry [7 * k + j] is statistic j taken across the
/// selected features of per-column statistic k. The empty set encodes to 0.
class StateEncoder {
 public:
  explicit StateEncoder(const Dataset& train, EncoderKind kind = EncoderKind::MetaStats, std::uint64_t seed = 0);

  std::vector<double> encode(std::span<const std::size_t> selected) const;
  EncoderKind kind() const { return kind_; }

 private:
  std::vector<double> encode_graph(std::span<const std::size_t> selected) const;

  EncoderKind kind_;
  std::size_t num_features_;
  std::vector<ColumnStats> column_stats_;
  std::vector<double> abs_corr_;    // graph variant: N x N |pearson|
  std::vector<double> projection_;  // graph variant: 7 x 7
};

std::vector<double> encode_state(const Dataset& train, std::span<const std::size_t> selected);

/// Accuracy split equally among the agents that select; nobody selecting
/// yields all-zero rewards.
std::vector<double> compute_reward(double accuracy, const ActionVector& advised_actions);

enum class AdviceSource { Trainer1, Trainer2, None };

const char* to_string(AdviceSource source);

struct StepRecord {
  std::size_t step = 0;
  ActionVector prev_actions;
  ActionVector initial_actions;
  ActionVector advised_actions;  // the actions actually taken
  std::vector<double> state_before;
  std::vector<double> state_after;
  std::vector<double> rewards;
  double accuracy = 0.0;
  AdviceSource advice_source = AdviceSource::None;
  std::vector<std::size_t> flipped_agents;

  std::size_t selected_count() const;
};

/// Accuracy trace with best-so-far queries.
class BestAccTracker {
 public:
  void push(double accuracy);
  std::size_t size() const { return trace_.size(); }
  const std::vector<double>& trace() const { return trace_; }
  /// Max over steps start..start+window inclusive.
  double best_acc(std::size_t start, std::size_t window) const;
  /// Max over steps 0..t inclusive.
  double running_best(std::size_t t) const;

 private:
  std::vector<double> trace_;
  std::vector<double> running_;
};

/// Feature-selection environment: evaluates subsets with a freshly fit
/// decision tree, encodes states and feeds agent memories.
class Environment {
 public:
  Environment(Dataset train, Dataset test, TreeConfig tree = {}, EncoderKind encoder = EncoderKind::MetaStats,
              std::uint64_t encoder_seed = 0);

  const Dataset& train() const { return train_; }
  const Dataset& test() const { return test_; }
  const TreeConfig& tree_config() const { return tree_; }
  const StateEncoder& encoder() const { return encoder_; }
  std::size_t num_features() const { return train_.num_features; }

  const std::vector<double>& state() const { return state_; }
  std::size_t steps_taken() const { return steps_; }

  /// Test accuracy of a tree fit on the selected features; 0 when nothing is
  /// selected. Results are memoized per exact subset.
  double accuracy(const ActionVector& actions);

  /// Applies the joint action: evaluates, encodes, rewards, stores one
  /// transition per agent and runs one training step per agent whose memory
  /// holds a full batch. Fills the environment-side fields of the record.
  StepRecord step(std::vector<Agent>& agents, const LearnConfig& learn, const ActionVector& actions);

 private:
  Dataset train_;
  Dataset test_;
  TreeConfig tree_;
  StateEncoder encoder_;
  std::vector<double> state_;
  std::size_t steps_ = 0;
  std::unordered_map<std::string, double> accuracy_cache_;
};

}  // namespace irfs
