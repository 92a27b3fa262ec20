#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irfs/rng.hpp"

namespace irfs {

inline constexpr std::size_t kHiddenUnits = 128;
inline constexpr int kDeselect = 0;
inline constexpr int kSelect = 1;

struct LearnConfig {
  double gamma = 0.9;
  double epsilon = 0.9;  // probability of taking the greedy action
  std::size_t batch_size = 16;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t replay_capacity = 2000;

  void validate() const;
};

struct Transition {
  std::vector<double> state;
  int action = kDeselect;
  double reward = 0.0;
  std::vector<double> next_state;
};

/// Fixed-capacity FIFO experience memory.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 2000);

  void push(Transition t);
  /// Uniform draw without replacement.
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t insertions() const { return insertions_; }
  /// i-th oldest stored transition.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // oldest slot once full
  std::uint64_t insertions_ = 0;
};

struct QValues {
  double deselect = 0.0;
  double select = 0.0;

  double operator[](int action) const { return action == kSelect ? select : deselect; }
  double max() const { return select >= deselect ? select : deselect; }
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as PolicyNetwork::parameters()
};

/// Two-layer ReLU Q-network with two outputs (deselect, select) and its
/// Adam state. Parameters live in one flat vector laid out as
/// [W1 (state_dim x H, row-major) | b1 (H) | W2 (H x 2, row-major) | b2 (2)].
class PolicyNetwork {
 public:
  PolicyNetwork() = default;
  /// Uniform init in +-1/sqrt(fan_in) per layer.
  PolicyNetwork(std::size_t state_dim, std::uint64_t seed);

  static PolicyNetwork zeros(std::size_t state_dim);

  std::size_t state_dim() const { return state_dim_; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  std::span<double> w1() { return {params_.data(), state_dim_ * kHiddenUnits}; }
  std::span<double> b1() { return {params_.data() + b1_offset(), kHiddenUnits}; }
  std::span<double> w2() { return {params_.data() + w2_offset(), kHiddenUnits * 2}; }
  std::span<double> b2() { return {params_.data() + b2_offset(), 2}; }

  QValues forward(std::span<const double> state) const;

  /// argmax of forward; a tie picks select.
  int greedy_action(std::span<const double> state) const;

  /// Greedy with probability epsilon, otherwise a uniform random action.
  int act(std::span<const double> state, const LearnConfig& cfg, Rng& rng) const;

  /// Bootstrapped targets r + gamma * max_a Q(s', a), no terminal states.
  std::vector<double> targets(std::span<const Transition> batch, double gamma) const;

  /// Mean squared TD error against fixed targets and its gradient.
  LossGradient loss_gradient(std::span<const Transition> batch, std::span<const double> targets) const;

  double loss(std::span<const Transition> batch, std::span<const double> targets) const;

  /// One Adam step on the batch. Returns the pre-update loss. Throws
  /// NonFiniteLoss when the loss or any updated parameter is not finite.
  double train_step(std::span<const Transition> batch, const LearnConfig& cfg);

  std::uint64_t optimizer_steps() const { return adam_t_; }
  std::span<const double> adam_first_moment() const { return adam_m_; }
  std::span<const double> adam_second_moment() const { return adam_v_; }

  /// Restores parameters and optimizer state (checkpoint loading).
  void restore(std::vector<double> params, std::vector<double> m, std::vector<double> v, std::uint64_t steps);

 private:
  std::size_t b1_offset() const { return state_dim_ * kHiddenUnits; }
  std::size_t w2_offset() const { return b1_offset() + kHiddenUnits; }
  std::size_t b2_offset() const { return w2_offset() + kHiddenUnits * 2; }

  std::size_t state_dim_ = 0;
  std::vector<double> params_;
  std::vector<double> adam_m_;
  std::vector<double> adam_v_;
  std::uint64_t adam_t_ = 0;
};

/// One feature's decision maker: policy, replay memory, private random stream.
struct Agent {
  PolicyNetwork policy;
  ReplayBuffer memory;
  Rng rng;
};

/// Agents seeded per (seed, agent index).
std::vector<Agent> make_agents(std::size_t count, std::size_t state_dim, std::uint64_t seed, const LearnConfig& cfg);

/// Stores one transition and, once the memory holds a full batch, performs
/// one training step. Returns the loss or a negative value when no step ran.
double remember_and_learn(Agent& agent, Transition t, const LearnConfig& cfg);

/// JSON checkpoint of all agent networks (format "irfs-agents", version 1).
void save_agents(const std::string& path, const std::vector<Agent>& agents);
/// Loads parameters into existing agents; shapes must match.
void load_agents(const std::string& path, std::vector<Agent>& agents);

}  // namespace irfs
