#include "irfs/trainers.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

#include "irfs/errors.hpp"

namespace irfs {

RoleSplit classify_roles(const ActionVector& prev_actions, const ActionVector& initial_actions) {
  if (prev_actions.size() != initial_actions.size()) {
    throw LengthMismatch("previous and initial action vectors differ in length");
  }
  RoleSplit roles;
  for (std::size_t i = 0; i < prev_actions.size(); ++i) {
    if (!prev_actions[i]) continue;
    roles.participated.push_back(i);
    (initial_actions[i] ? roles.assertive : roles.hesitant).push_back(i);
  }
  return roles;
}

std::size_t kbest_k(std::size_t assertive_count, std::size_t hesitant_count) {
  return assertive_count / 2 + hesitant_count;
}

Advice advise_kbest(std::span<const double> relevance, const RoleSplit& roles) {
  Advice advice;
  const std::size_t k = std::min(kbest_k(roles.assertive.size(), roles.hesitant.size()), roles.participated.size());
  if (roles.participated.empty() || k == 0) return advice;
  std::vector<std::size_t> ranked = roles.participated;
  for (std::size_t f : ranked) {
    if (f >= relevance.size()) throw IndexOutOfRange("participated feature without a relevance score");
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (relevance[a] != relevance[b]) return relevance[a] > relevance[b];
    return a < b;
  });
  ranked.resize(k);
  std::sort(ranked.begin(), ranked.end());
  std::set_intersection(roles.hesitant.begin(), roles.hesitant.end(), ranked.begin(), ranked.end(),
                        std::back_inserter(advice.flip_set));
  return advice;
}

Advice advise_kbest(const Dataset& train, const RoleSplit& roles, const BinningSpec& bins) {
  if (roles.participated.empty()) return {};
  const auto scores = mi_relevance(train, roles.participated, bins);
  std::vector<double> relevance(train.num_features, 0.0);
  for (const auto& [f, s] : scores) relevance[f] = s;
  return advise_kbest(relevance, roles);
}

Advice advise_from_importances(std::span<const double> importances, const RoleSplit& roles) {
  Advice advice;
  if (roles.participated.empty()) return advice;
  double g = 0.0;
  if (!roles.assertive.empty()) {
    std::vector<double> imp;
    imp.reserve(roles.assertive.size());
    for (std::size_t f : roles.assertive) imp.push_back(importances[f]);
    std::sort(imp.begin(), imp.end());
    const std::size_t m = imp.size();
    g = (m % 2 == 1) ? imp[m / 2] : (imp[m / 2 - 1] + imp[m / 2]) / 2.0;
  }
  for (std::size_t f : roles.hesitant) {
    if (importances[f] > g) advice.flip_set.push_back(f);
  }
  return advice;
}

Advice advise_dtree(const Dataset& train, const RoleSplit& roles, const TreeConfig& cfg) {
  if (roles.participated.empty()) return {};
  const TreeModel model = fit(train, roles.participated, cfg);
  return advise_from_importances(model.importances, roles);
}

ActionVector apply_advice(const ActionVector& initial_actions, const Advice& advice) {
  ActionVector advised = initial_actions;
  for (std::size_t i : advice.flip_set) {
    if (i >= advised.size()) throw IndexOutOfRange("advised agent " + std::to_string(i) + " out of range");
    advised[i] = advised[i] ? 0 : 1;
  }
  return advised;
}

bool TeachingSchedule::validate() const {
  if (transfer == 0) throw ConfigError("transfer point T must be positive");
  if (total == 0) throw ConfigError("step count L must be positive");
  return 2 * transfer <= total;
}

AdviceSource advice_source(const TeachingSchedule& schedule, std::size_t t) {
  if (t < schedule.transfer) return AdviceSource::Trainer1;
  if (t < 2 * schedule.transfer) return AdviceSource::Trainer2;
  return AdviceSource::None;
}

const char* to_string(TrainerKind kind) {
  return kind == TrainerKind::KBest ? "kbest" : "dtree";
}

IrfsLoop::IrfsLoop(Environment env, IrfsOptions options)
    : env_(std::move(env)),
      options_(std::move(options)),
      agents_(make_agents(env_.num_features(), kStateDim, options_.seed, options_.learn)),
      prev_actions_(env_.num_features(), 1) {
  options_.learn.validate();
  options_.trainer_tree.validate();
  if (options_.plan.advice_enabled() && !options_.schedule.validate()) {
    std::cerr << "warning: 2T = " << 2 * options_.schedule.transfer << " exceeds L = " << options_.schedule.total
              << "; the unadvised phase is never reached\n";
  }
}

AdviceSource IrfsLoop::phase(std::size_t t) const {
  if (!options_.plan.advice_enabled()) return AdviceSource::None;
  const AdviceSource source = advice_source(options_.schedule, t);
  if (source == AdviceSource::Trainer1 && !options_.plan.trainer1) return AdviceSource::None;
  if (source == AdviceSource::Trainer2 && !options_.plan.trainer2) return AdviceSource::None;
  return source;
}

Advice IrfsLoop::advise(TrainerKind kind, const RoleSplit& roles) {
  if (kind == TrainerKind::KBest) {
    if (relevance_.empty()) relevance_ = mi_relevance_all(env_.train(), options_.bins);
    return advise_kbest(relevance_, roles);
  }
  if (roles.participated.empty()) return {};
  std::string key(env_.num_features(), '\0');
  for (std::size_t f : roles.participated) key[f] = 1;
  auto it = importance_cache_.find(key);
  if (it == importance_cache_.end()) {
    it = importance_cache_.emplace(std::move(key), fit(env_.train(), roles.participated, options_.trainer_tree).importances)
             .first;
  }
  return advise_from_importances(it->second, roles);
}

StepRecord IrfsLoop::step() {
  const auto& state = env_.state();
  ActionVector initial(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    initial[i] = static_cast<std::uint8_t>(agents_[i].policy.greedy_action(state));
  }
  const RoleSplit roles = classify_roles(prev_actions_, initial);
  const AdviceSource source = phase(t_);

  Advice advice;
  ActionVector actions;
  if (source == AdviceSource::None) {
    actions.resize(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      actions[i] = static_cast<std::uint8_t>(agents_[i].policy.act(state, options_.learn, agents_[i].rng));
    }
  } else {
    const TrainerKind kind = source == AdviceSource::Trainer1 ? *options_.plan.trainer1 : *options_.plan.trainer2;
    advice = advise(kind, roles);
    actions = apply_advice(initial, advice);
  }

  StepRecord rec = env_.step(agents_, options_.learn, actions);
  rec.step = t_;
  rec.prev_actions = prev_actions_;
  rec.initial_actions = std::move(initial);
  rec.advice_source = source;
  rec.flipped_agents = std::move(advice.flip_set);
  prev_actions_ = rec.advised_actions;
  ++t_;
  return rec;
}

}  // namespace irfs
