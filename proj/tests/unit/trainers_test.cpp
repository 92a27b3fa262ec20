#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "irfs/errors.hpp"
#include "irfs/rng.hpp"
#include "irfs/trainers.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace irfs {
namespace {

using Idx = std::vector<std::size_t>;

// Six features named by index; the label is (f3 > 0.5), f2 is a noisy copy
// of f3 and the rest is noise.
Dataset running_example_dataset() {
  Rng rng(2024);
  const std::size_t n = 400;
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : cols) c[i] = rng.uniform01();
    cols[2][i] = rng.uniform01() < 0.7 ? cols[3][i] : rng.uniform01();
    labels[i] = cols[3][i] > 0.5;
  }
  return make_dataset("running", cols, labels);
}

// prev selects {f2, f3, f5}; initial argmax keeps f2, drops f3 and f5
const ActionVector kPrev{0, 0, 1, 1, 0, 1};
const ActionVector kInitial{0, 0, 1, 0, 0, 0};

double oracle_mi(const Dataset& d, std::size_t j) {
  const auto x = discretize(d.column(j));
  return testing::table_mutual_info(testing::contingency_table(x, d.labels));
}

TEST(Roles, RunningExample) {
  const RoleSplit r = classify_roles(kPrev, kInitial);
  EXPECT_EQ(r.participated, (Idx{2, 3, 5}));
  EXPECT_EQ(r.assertive, (Idx{2}));
  EXPECT_EQ(r.hesitant, (Idx{3, 5}));
}

TEST(Roles, DegenerateCases) {
  const RoleSplit none = classify_roles(ActionVector(4, 0), ActionVector{1, 0, 1, 0});
  EXPECT_TRUE(none.participated.empty() && none.assertive.empty() && none.hesitant.empty());
  const RoleSplit all = classify_roles(ActionVector(4, 1), ActionVector(4, 1));
  EXPECT_EQ(all.assertive, (Idx{0, 1, 2, 3}));
  EXPECT_TRUE(all.hesitant.empty());
  EXPECT_THROW(classify_roles(ActionVector(3, 1), ActionVector(4, 1)), LengthMismatch);
}

TEST(KBestK, Values) {
  EXPECT_EQ(kbest_k(1, 2), 2u);
  EXPECT_EQ(kbest_k(0, 0), 0u);
  EXPECT_EQ(kbest_k(4, 3), 5u);
  EXPECT_EQ(kbest_k(3, 0), 1u);
}

TEST(KBestAdvice, RunningExample) {
  const Dataset d = running_example_dataset();
  // brute-force ranking f3 > f2 > f5
  EXPECT_GT(oracle_mi(d, 3), oracle_mi(d, 2));
  EXPECT_GT(oracle_mi(d, 2), oracle_mi(d, 5));
  const RoleSplit r = classify_roles(kPrev, kInitial);
  const Advice a = advise_kbest(d, r);
  EXPECT_EQ(a.flip_set, (Idx{3}));
  EXPECT_EQ(apply_advice(kInitial, a), (ActionVector{0, 0, 1, 1, 0, 0}));
}

TEST(KBestAdvice, NoHesitantMeansNoFlips) {
  const Dataset d = running_example_dataset();
  const RoleSplit r = classify_roles(kPrev, kPrev);
  EXPECT_TRUE(advise_kbest(d, r).flip_set.empty());
  EXPECT_TRUE(advise_kbest(d, classify_roles(ActionVector(6, 0), kInitial)).flip_set.empty());
}

TEST(KBestAdvice, HesitantCopiesOfLabelAllFlip) {
  // hesitant slots {1, 4} both hold the label-defining column; assertive {0, 5} are noise
  Rng rng(9);
  const std::size_t n = 300;
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : cols) c[i] = rng.uniform01();
    cols[4][i] = cols[1][i];
    labels[i] = cols[1][i] > 0.5;
  }
  const Dataset d = make_dataset("dup", cols, labels);
  const RoleSplit r = classify_roles(ActionVector{1, 1, 0, 0, 1, 1}, ActionVector{1, 0, 0, 0, 0, 1});
  EXPECT_EQ(kbest_k(r.assertive.size(), r.hesitant.size()), 3u);
  EXPECT_EQ(advise_kbest(d, r).flip_set, (Idx{1, 4}));
}

TEST(KBestAdvice, TiesGoToLowerIndex) {
  const std::vector<double> relevance{0.5, 0.5, 0.5, 0.5};
  // F_a = {0}, F_h = {1, 2, 3}: k = 3 -> top three by index are {0, 1, 2}
  const RoleSplit r = classify_roles(ActionVector(4, 1), ActionVector{1, 0, 0, 0});
  EXPECT_EQ(advise_kbest(relevance, r).flip_set, (Idx{1, 2}));
}

TEST(DTreeAdvice, MedianRuleFromImportances) {
  const RoleSplit r = classify_roles(kPrev, kInitial);
  const std::vector<double> imp{0, 0, 0.2, 0.7, 0, 0.1};
  EXPECT_EQ(advise_from_importances(imp, r).flip_set, (Idx{3}));
  // strict inequality: a hesitant importance equal to g does not flip
  const std::vector<double> tie{0, 0, 0.3, 0.3, 0, 0.4};
  EXPECT_EQ(advise_from_importances(tie, r).flip_set, (Idx{5}));
}

TEST(DTreeAdvice, EvenAssertiveCountUsesMidpoint) {
  // F_a = {0, 1, 2, 3} with importances 0.1, 0.2, 0.3, 0.4: g = 0.25
  const RoleSplit r = classify_roles(ActionVector(6, 1), ActionVector{1, 1, 1, 1, 0, 0});
  const std::vector<double> imp{0.1, 0.4, 0.2, 0.3, 0.25, 0.26};
  EXPECT_EQ(advise_from_importances(imp, r).flip_set, (Idx{5}));
}

TEST(DTreeAdvice, NoAssertiveMeansPositiveImportanceFlips) {
  const RoleSplit r = classify_roles(ActionVector{1, 1, 1}, ActionVector{0, 0, 0});
  const std::vector<double> imp{0.0, 0.6, 0.4};
  EXPECT_EQ(advise_from_importances(imp, r).flip_set, (Idx{1, 2}));
}

TEST(DTreeAdvice, FitOnParticipatedFeatures) {
  const Dataset d = running_example_dataset();
  const RoleSplit r = classify_roles(kPrev, kInitial);
  const TreeModel m = fit(d, r.participated);
  const Advice a = advise_dtree(d, r);
  EXPECT_EQ(a.flip_set, advise_from_importances(m.importances, r).flip_set);
  // f3 alone separates the labels, so the root is f3 and it outranks f2
  EXPECT_EQ(m.nodes[0].feature, 3);
  EXPECT_EQ(m.importances[3], 1.0);
  EXPECT_EQ(a.flip_set, (Idx{3}));
}

TEST(DTreeAdvice, NoiseAndLeafTreesDoNotFlip) {
  const RoleSplit r = classify_roles(kPrev, kInitial);
  EXPECT_TRUE(advise_from_importances(std::vector<double>{0, 0, 0.5, 0, 0, 0}, r).flip_set.empty());
  EXPECT_TRUE(advise_from_importances(std::vector<double>(6, 0.0), r).flip_set.empty());
  EXPECT_TRUE(advise_dtree(running_example_dataset(), classify_roles(ActionVector(6, 0), kInitial)).flip_set.empty());
}

TEST(ApplyAdvice, Cases) {
  EXPECT_EQ(apply_advice(kInitial, {}), kInitial);
  EXPECT_EQ(apply_advice(kInitial, {{3, 5}}), (ActionVector{0, 0, 1, 1, 0, 1}));
  EXPECT_THROW(apply_advice(kInitial, {{6}}), IndexOutOfRange);
}

TEST(Schedule, Phases) {
  const TeachingSchedule s{2, 10};
  EXPECT_EQ(advice_source(s, 0), AdviceSource::Trainer1);
  EXPECT_EQ(advice_source(s, 1), AdviceSource::Trainer1);
  EXPECT_EQ(advice_source(s, 2), AdviceSource::Trainer2);
  EXPECT_EQ(advice_source(s, 3), AdviceSource::Trainer2);
  EXPECT_EQ(advice_source(s, 4), AdviceSource::None);
  EXPECT_EQ(advice_source(s, 5), AdviceSource::None);
  EXPECT_TRUE(s.validate());
  EXPECT_FALSE((TeachingSchedule{6, 10}.validate()));
  EXPECT_THROW((TeachingSchedule{0, 10}.validate()), ConfigError);
}

IrfsOptions hybrid_options(std::size_t T, std::size_t L, std::uint64_t seed) {
  IrfsOptions o;
  o.schedule = {T, L};
  o.plan = {TrainerKind::KBest, TrainerKind::DecisionTree};
  o.seed = seed;
  return o;
}

Environment small_env(std::uint64_t seed) {
  const Dataset d = testing::majority_dataset(200, 8, {1, 4, 6}, seed);
  auto [train, test] = split(d, {0.9, seed});
  return Environment(std::move(train), std::move(test));
}

TEST(Loop, PhaseTraceOverThirtySteps) {
  IrfsLoop loop(small_env(1), hybrid_options(10, 30, 5));
  std::map<AdviceSource, int> counts;
  for (std::size_t t = 0; t < 30; ++t) {
    const StepRecord rec = loop.step();
    EXPECT_EQ(rec.step, t);
    EXPECT_EQ(rec.advice_source, t < 10 ? AdviceSource::Trainer1 : t < 20 ? AdviceSource::Trainer2 : AdviceSource::None);
    counts[rec.advice_source]++;
  }
  EXPECT_EQ(counts[AdviceSource::Trainer1], 10);
  EXPECT_EQ(counts[AdviceSource::Trainer2], 10);
  EXPECT_EQ(counts[AdviceSource::None], 10);
}

TEST(Loop, FirstStepStartsFromAllSelected) {
  IrfsLoop loop(small_env(2), hybrid_options(5, 20, 1));
  EXPECT_EQ(loop.previous_actions(), ActionVector(8, 1));
  const StepRecord rec = loop.step();
  EXPECT_EQ(rec.prev_actions, ActionVector(8, 1));
  EXPECT_EQ(loop.previous_actions(), rec.advised_actions);
}

TEST(Loop, AdviceInvariantsHoldEverywhere) {
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    IrfsLoop loop(small_env(10 + seed), hybrid_options(100, 250, seed));
    for (std::size_t t = 0; t < 250; ++t) {
      const StepRecord rec = loop.step();
      const RoleSplit r = classify_roles(rec.prev_actions, rec.initial_actions);
      // initial actions are the argmax policy decisions for the pre-step state
      ASSERT_EQ(r.assertive.size() + r.hesitant.size(), r.participated.size());
      for (std::size_t f : rec.flipped_agents) EXPECT_TRUE(std::binary_search(r.hesitant.begin(), r.hesitant.end(), f));
      EXPECT_LE(rec.flipped_agents.size(), r.hesitant.size());
      if (rec.advice_source == AdviceSource::None) {
        EXPECT_TRUE(rec.flipped_agents.empty());
        continue;
      }
      for (std::size_t i = 0; i < rec.initial_actions.size(); ++i) {
        EXPECT_GE(rec.advised_actions[i], rec.initial_actions[i]);
        const bool flipped = std::binary_search(rec.flipped_agents.begin(), rec.flipped_agents.end(), i);
        EXPECT_EQ(rec.advised_actions[i] != rec.initial_actions[i], flipped);
      }
    }
  }
}

TEST(Loop, InitialActionsAreArgmax) {
  IrfsLoop loop(small_env(3), hybrid_options(3, 12, 4));
  for (int t = 0; t < 12; ++t) {
    std::vector<int> expected;
    const auto state = loop.environment().state();
    for (const auto& a : loop.agents()) expected.push_back(a.policy.greedy_action(state));
    const StepRecord rec = loop.step();
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(rec.initial_actions[i], expected[i]);
  }
}

TEST(Loop, Deterministic) {
  IrfsLoop a(small_env(4), hybrid_options(20, 60, 8)), b(small_env(4), hybrid_options(20, 60, 8));
  for (int t = 0; t < 60; ++t) {
    const StepRecord x = a.step(), y = b.step();
    EXPECT_EQ(x.advised_actions, y.advised_actions);
    EXPECT_EQ(x.accuracy, y.accuracy);
    EXPECT_EQ(x.state_after, y.state_after);
  }
  for (std::size_t i = 0; i < a.agents().size(); ++i) {
    const auto p = a.agents()[i].policy.parameters(), q = b.agents()[i].policy.parameters();
    EXPECT_TRUE(std::equal(p.begin(), p.end(), q.begin()));
  }
}

TEST(Loop, SingleTrainerPlans) {
  IrfsOptions o = hybrid_options(4, 12, 1);
  o.plan = {TrainerKind::DecisionTree, TrainerKind::DecisionTree};
  IrfsLoop loop(small_env(5), o);
  for (int t = 0; t < 12; ++t) {
    const auto rec = loop.step();
    EXPECT_EQ(rec.advice_source, t < 4 ? AdviceSource::Trainer1 : t < 8 ? AdviceSource::Trainer2 : AdviceSource::None);
  }
  o.plan = {};
  IrfsLoop plain(small_env(5), o);
  for (int t = 0; t < 12; ++t) {
    const auto rec = plain.step();
    EXPECT_EQ(rec.advice_source, AdviceSource::None);
    EXPECT_TRUE(rec.flipped_agents.empty());
  }
}

}  // namespace
}  // namespace irfs
