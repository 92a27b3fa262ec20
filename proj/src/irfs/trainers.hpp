#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irfs/cart.hpp"
#include "irfs/env.hpp"
#include "irfs/qpolicy.hpp"
#include "irfs/stats.hpp"

namespace irfs {

/// Participated features (selected at t-1) split by the policies' initial
/// decision: assertive ones keep selecting, hesitant ones want to deselect.
/// All index lists are ascending.
struct RoleSplit {
  std::vector<std::size_t> participated;
  std::vector<std::size_t> assertive;
  std::vector<std::size_t> hesitant;
};

RoleSplit classify_roles(const ActionVector& prev_actions, const ActionVector& initial_actions);

/// floor(m/2 + n)
std::size_t kbest_k(std::size_t assertive_count, std::size_t hesitant_count);

/// Agents whose initial action is flipped; always a subset of the hesitant set.
struct Advice {
  std::vector<std::size_t> flip_set;
};

/// KBest trainer: rank the participated features by MI with the label, take
/// the top kbest_k and flip the hesitant ones among them.
Advice advise_kbest(const Dataset& train, const RoleSplit& roles, const BinningSpec& bins = {});

/// Same as above with precomputed per-feature relevance (indexed by feature).
Advice advise_kbest(std::span<const double> relevance, const RoleSplit& roles);

/// Decision-tree trainer: fit on the participated features and flip every
/// hesitant feature whose importance exceeds the median assertive importance
/// (0 when there are no assertive features).
Advice advise_dtree(const Dataset& train, const RoleSplit& roles, const TreeConfig& cfg = {});

/// Same rule from a ready importance vector (indexed by feature).
Advice advise_from_importances(std::span<const double> importances, const RoleSplit& roles);

ActionVector apply_advice(const ActionVector& initial_actions, const Advice& advice);

/// Hybrid Teaching phases: [0, T) trainer1, [T, 2T) trainer2, then none.
struct TeachingSchedule {
  std::size_t transfer = 1;  // T
  std::size_t total = 1;     // L

  /// Rejects T = 0. Returns false when 2T > L (allowed, but worth a warning).
  bool validate() const;
};

AdviceSource advice_source(const TeachingSchedule& schedule, std::size_t t);

enum class TrainerKind { KBest, DecisionTree };

const char* to_string(TrainerKind kind);

/// Which trainer teaches in each phase. An empty slot means no advice in
/// that phase; both empty is the MARLFS configuration.
struct TeachingPlan {
  std::optional<TrainerKind> trainer1;
  std::optional<TrainerKind> trainer2;

  bool advice_enabled() const { return trainer1.has_value() || trainer2.has_value(); }
};

struct IrfsOptions {
  TeachingSchedule schedule;
  TeachingPlan plan;
  LearnConfig learn;
  BinningSpec bins;
  TreeConfig trainer_tree;
  std::uint64_t seed = 0;
};

/// The interactive multi-agent exploration loop.
class IrfsLoop {
 public:
  IrfsLoop(Environment env, IrfsOptions options);

  /// One step: argmax initial actions, role split against the previous
  /// actions, trainer advice for the current phase (or an epsilon-greedy
  /// draw in the unadvised phase), then the environment transition.
  StepRecord step();

  std::size_t next_step() const { return t_; }
  const ActionVector& previous_actions() const { return prev_actions_; }
  Environment& environment() { return env_; }
  const Environment& environment() const { return env_; }
  std::vector<Agent>& agents() { return agents_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const IrfsOptions& options() const { return options_; }

  /// Phase for step t under this loop's plan.
  AdviceSource phase(std::size_t t) const;

 private:
  Advice advise(TrainerKind kind, const RoleSplit& roles);

  Environment env_;
  IrfsOptions options_;
  std::vector<Agent> agents_;
  ActionVector prev_actions_;
  std::size_t t_ = 0;
  std::vector<double> relevance_;  // lazily computed MI scores over the training split
  std::unordered_map<std::string, std::vector<double>> importance_cache_;
};

}  // namespace irfs
