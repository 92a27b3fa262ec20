#include "irfs/qpolicy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "irfs/errors.hpp"

namespace irfs {

void LearnConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (replay_capacity < batch_size) throw ConfigError("replay capacity below batch size");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity_, 4096));
}

void ReplayBuffer::push(Transition t) {
  ++insertions_;
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw IndexOutOfRange("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (batch_size > items_.size()) {
    throw InsufficientSamples("replay holds " + std::to_string(items_.size()) + " transitions, batch needs " +
                              std::to_string(batch_size));
  }
  // partial Fisher-Yates over slot ids
  std::vector<std::size_t> slots(items_.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j = i + rng.uniform_index(slots.size() - i);
    std::swap(slots[i], slots[j]);
    out.push_back(items_[slots[i]]);
  }
  return out;
}

PolicyNetwork::PolicyNetwork(std::size_t state_dim, std::uint64_t seed) : state_dim_(state_dim) {
  const std::size_t n = state_dim * kHiddenUnits + kHiddenUnits + kHiddenUnits * 2 + 2;
  params_.assign(n, 0.0);
  adam_m_.assign(n, 0.0);
  adam_v_.assign(n, 0.0);
  Rng rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(state_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(kHiddenUnits));
  for (std::size_t i = 0; i < w2_offset(); ++i) params_[i] = rng.uniform(-bound1, bound1);
  for (std::size_t i = w2_offset(); i < n; ++i) params_[i] = rng.uniform(-bound2, bound2);
}

PolicyNetwork PolicyNetwork::zeros(std::size_t state_dim) {
  PolicyNetwork net(state_dim, 0);
  std::fill(net.params_.begin(), net.params_.end(), 0.0);
  return net;
}

QValues PolicyNetwork::forward(std::span<const double> state) const {
  if (state.size() != state_dim_) {
    throw DimensionMismatch("state has " + std::to_string(state.size()) + " entries, network expects " +
                            std::to_string(state_dim_));
  }
  const double* w1 = params_.data();
  const double* b1 = params_.data() + b1_offset();
  const double* w2 = params_.data() + w2_offset();
  const double* b2 = params_.data() + b2_offset();
  double hidden[kHiddenUnits];
  std::copy(b1, b1 + kHiddenUnits, hidden);
  for (std::size_t i = 0; i < state_dim_; ++i) {
    const double s = state[i];
    if (s == 0.0) continue;
    const double* row = w1 + i * kHiddenUnits;
    for (std::size_t j = 0; j < kHiddenUnits; ++j) hidden[j] += row[j] * s;
  }
  QValues q{b2[0], b2[1]};
  for (std::size_t j = 0; j < kHiddenUnits; ++j) {
    const double h = hidden[j] > 0.0 ? hidden[j] : 0.0;
    q.deselect += w2[j * 2] * h;
    q.select += w2[j * 2 + 1] * h;
  }
  return q;
}

int PolicyNetwork::greedy_action(std::span<const double> state) const {
  const QValues q = forward(state);
  return q.select >= q.deselect ? kSelect : kDeselect;
}

int PolicyNetwork::act(std::span<const double> state, const LearnConfig& cfg, Rng& rng) const {
  if (rng.uniform01() < cfg.epsilon) return greedy_action(state);
  return static_cast<int>(rng.uniform_index(2));
}

std::vector<double> PolicyNetwork::targets(std::span<const Transition> batch, double gamma) const {
  std::vector<double> y;
  y.reserve(batch.size());
  for (const auto& t : batch) y.push_back(t.reward + gamma * forward(t.next_state).max());
  return y;
}

double PolicyNetwork::loss(std::span<const Transition> batch, std::span<const double> targets) const {
  if (batch.empty()) throw EmptyInput("empty training batch");
  double total = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double err = forward(batch[b].state)[batch[b].action] - targets[b];
    total += err * err;
  }
  return total / static_cast<double>(batch.size());
}

LossGradient PolicyNetwork::loss_gradient(std::span<const Transition> batch, std::span<const double> targets) const {
  if (batch.empty()) throw EmptyInput("empty training batch");
  if (targets.size() != batch.size()) throw LengthMismatch("target count differs from batch size");
  LossGradient out;
  out.gradient.assign(params_.size(), 0.0);
  const double* w1 = params_.data();
  const double* b1 = params_.data() + b1_offset();
  const double* w2 = params_.data() + w2_offset();
  const double* b2 = params_.data() + b2_offset();
  double* g_w1 = out.gradient.data();
  double* g_b1 = out.gradient.data() + b1_offset();
  double* g_w2 = out.gradient.data() + w2_offset();
  double* g_b2 = out.gradient.data() + b2_offset();
  const double scale = 2.0 / static_cast<double>(batch.size());

  double pre[kHiddenUnits];
  double d_pre[kHiddenUnits];
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& t = batch[b];
    if (t.state.size() != state_dim_) throw DimensionMismatch("transition state dimension mismatch");
    const auto a = static_cast<std::size_t>(t.action);
    std::copy(b1, b1 + kHiddenUnits, pre);
    for (std::size_t i = 0; i < state_dim_; ++i) {
      const double s = t.state[i];
      if (s == 0.0) continue;
      const double* row = w1 + i * kHiddenUnits;
      for (std::size_t j = 0; j < kHiddenUnits; ++j) pre[j] += row[j] * s;
    }
    double q = b2[a];
    for (std::size_t j = 0; j < kHiddenUnits; ++j) q += w2[j * 2 + a] * (pre[j] > 0.0 ? pre[j] : 0.0);

    const double err = q - targets[b];
    out.loss += err * err;
    const double d_q = scale * err;
    g_b2[a] += d_q;
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
      const bool active = pre[j] > 0.0;
      if (active) g_w2[j * 2 + a] += pre[j] * d_q;
      d_pre[j] = active ? w2[j * 2 + a] * d_q : 0.0;
      g_b1[j] += d_pre[j];
    }
    for (std::size_t i = 0; i < state_dim_; ++i) {
      const double s = t.state[i];
      if (s == 0.0) continue;
      double* row = g_w1 + i * kHiddenUnits;
      for (std::size_t j = 0; j < kHiddenUnits; ++j) row[j] += s * d_pre[j];
    }
  }
  out.loss /= static_cast<double>(batch.size());
  return out;
}

double PolicyNetwork::train_step(std::span<const Transition> batch, const LearnConfig& cfg) {
  const auto y = targets(batch, cfg.gamma);
  const LossGradient lg = loss_gradient(batch, y);
  if (!std::isfinite(lg.loss)) {
    throw NonFiniteLoss("non-finite TD loss after " + std::to_string(adam_t_) + " optimizer steps");
  }
  ++adam_t_;
  const double t = static_cast<double>(adam_t_);
  const double correction1 = 1.0 - std::pow(cfg.adam_beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.adam_beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const double g = lg.gradient[i];
    adam_m_[i] = cfg.adam_beta1 * adam_m_[i] + (1.0 - cfg.adam_beta1) * g;
    adam_v_[i] = cfg.adam_beta2 * adam_v_[i] + (1.0 - cfg.adam_beta2) * g * g;
    const double m_hat = adam_m_[i] / correction1;
    const double v_hat = adam_v_[i] / correction2;
    params_[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    if (!std::isfinite(params_[i])) {
      throw NonFiniteLoss("parameter " + std::to_string(i) + " became non-finite at optimizer step " +
                          std::to_string(adam_t_) + " (loss " + std::to_string(lg.loss) + ")");
    }
  }
  return lg.loss;
}

void PolicyNetwork::restore(std::vector<double> params, std::vector<double> m, std::vector<double> v,
                            std::uint64_t steps) {
  if (params.size() != params_.size() || m.size() != params_.size() || v.size() != params_.size()) {
    throw DimensionMismatch("checkpoint parameter count does not match the network");
  }
  params_ = std::move(params);
  adam_m_ = std::move(m);
  adam_v_ = std::move(v);
  adam_t_ = steps;
}

std::vector<Agent> make_agents(std::size_t count, std::size_t state_dim, std::uint64_t seed, const LearnConfig& cfg) {
  std::vector<Agent> agents;
  agents.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    agents.push_back(Agent{PolicyNetwork(state_dim, derive_seed(seed, 2 * i)), ReplayBuffer(cfg.replay_capacity),
                           Rng(derive_seed(seed, 2 * i + 1))});
  }
  return agents;
}

double remember_and_learn(Agent& agent, Transition t, const LearnConfig& cfg) {
  agent.memory.push(std::move(t));
  if (agent.memory.size() < cfg.batch_size) return -1.0;
  const auto batch = agent.memory.sample(cfg.batch_size, agent.rng);
  return agent.policy.train_step(batch, cfg);
}

void save_agents(const std::string& path, const std::vector<Agent>& agents) {
  nlohmann::json doc;
  doc["format"] = "irfs-agents";
  doc["version"] = 1;
  doc["hidden_units"] = kHiddenUnits;
  doc["state_dim"] = agents.empty() ? 0 : agents.front().policy.state_dim();
  auto& list = doc["agents"] = nlohmann::json::array();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& p = agents[i].policy;
    list.push_back({{"index", i},
                    {"parameters", std::vector<double>(p.parameters().begin(), p.parameters().end())},
                    {"adam_m", std::vector<double>(p.adam_first_moment().begin(), p.adam_first_moment().end())},
                    {"adam_v", std::vector<double>(p.adam_second_moment().begin(), p.adam_second_moment().end())},
                    {"adam_steps", p.optimizer_steps()}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint '" + path + "'");
  out << doc.dump() << '\n';
}

void load_agents(const std::string& path, std::vector<Agent>& agents) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed checkpoint '" + path + "': " + e.what());
  }
  if (doc.value("format", "") != "irfs-agents" || doc.value("version", 0) != 1) {
    throw IoError("'" + path + "' is not a version 1 agent checkpoint");
  }
  const auto& list = doc.at("agents");
  if (list.size() != agents.size()) {
    throw ConfigError("checkpoint holds " + std::to_string(list.size()) + " agents, run has " +
                      std::to_string(agents.size()));
  }
  for (const auto& entry : list) {
    const auto i = entry.at("index").get<std::size_t>();
    if (i >= agents.size()) throw ConfigError("checkpoint agent index out of range");
    agents[i].policy.restore(entry.at("parameters").get<std::vector<double>>(),
                             entry.at("adam_m").get<std::vector<double>>(),
                             entry.at("adam_v").get<std::vector<double>>(),
                             entry.at("adam_steps").get<std::uint64_t>());
  }
}

}  // namespace irfs
