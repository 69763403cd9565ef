#include <gtest/gtest.h>

#include <cmath>

#include "fbmb/trial.hpp"

using namespace fbmb;

namespace {

// Turns towards the arrow and steps forward once it points ahead.
struct OracleWalker {
  const Mapping& mapping;
  std::uint8_t operator()(std::uint8_t sensors) const {
    if (sensors & 0b0001) return mapping.option_for(Action::Forward);
    if (sensors & 0b0010) return mapping.option_for(Action::TurnRight);
    return mapping.option_for(Action::TurnLeft);
  }
};

TrialParams small_params() {
  TrialParams p;
  p.world = {32, 1.0 / 7.0, 16};
  p.steps = 256;
  return p;
}

}  // namespace

TEST(Trial, StationaryAgentScoresStepsOverOnePlusStartDistance) {
  const TrialParams params;  // 512 steps, start distance 32
  double log_w = 0.0;
  for (int m = 0; m < Mapping::kCount; ++m) {
    const Mapping mapping(m);
    Rng world(m);
    const TrialResult r = run_controller_trial(
        [&](std::uint8_t) { return mapping.option_for(Action::DoNothing); }, mapping, params, world);
    EXPECT_EQ(r.goal_reaches, 0);
    EXPECT_NEAR(r.score(params.goal_bonus), 512.0 / 33.0, 1e-9);
    EXPECT_EQ(r.actions.nothing, 512u);
    log_w += std::log(r.score(params.goal_bonus));
  }
  EXPECT_NEAR(log_w, 24.0 * std::log(512.0 / 33.0), 1e-9);
}

TEST(Trial, OracleWalkerReachesTheGoalRepeatedly) {
  const TrialParams params;
  int worst = 1 << 30;
  for (int m = 0; m < Mapping::kCount; ++m) {
    const Mapping mapping(m);
    Rng world(100 + m);
    const TrialResult r = run_controller_trial(OracleWalker{mapping}, mapping, params, world);
    worst = std::min(worst, r.goal_reaches);
    EXPECT_LE(r.shaped_score, params.steps);
  }
  // at most two turns precede each forward move, so a goal costs at most 96 steps
  EXPECT_GE(worst, 512 / 96);
}

TEST(Trial, ActionCountsCoverEveryStepAndScoreIsBounded) {
  Rng grng(3);
  const TrialParams params = small_params();
  for (int trial = 0; trial < 10; ++trial) {
    const Brain brain = Brain::build(random_genome(5000, 12, grng));
    const FitnessResult f = fitness(brain, params, {7, 0, static_cast<std::uint64_t>(trial)});
    ASSERT_EQ(f.trials.size(), 24u);
    for (const TrialResult& t : f.trials) {
      EXPECT_EQ(t.actions.total(), static_cast<std::uint64_t>(params.steps));
      EXPECT_LE(t.shaped_score, params.steps);
      EXPECT_GT(t.shaped_score, 0.0);
    }
    double log_w = 0.0;
    for (const TrialResult& t : f.trials) log_w += std::log(t.score(params.goal_bonus));
    EXPECT_NEAR(f.log_w, log_w, 1e-9);
  }
}

TEST(Trial, WorldStreamAloneFixesTheWorlds) {
  // two different controllers on the same world stream see the same start
  const TrialParams params = small_params();
  const Mapping mapping(5);
  std::vector<TraceStep> a, b;
  Rng wa(42), wb(42);
  run_controller_trial([](std::uint8_t) { return std::uint8_t{0}; }, mapping, params, wa, &a);
  run_controller_trial([](std::uint8_t) { return std::uint8_t{3}; }, mapping, params, wb, &b);
  EXPECT_EQ(a.front().sensors, b.front().sensors);
}

TEST(Fitness, IsDeterministicAndIndependentOfEvaluationOrder) {
  Rng grng(8);
  const Brain brain = Brain::build(random_genome(5000, 12, grng));
  const TrialParams params = small_params();
  const EvaluationKey key{11, 2, 3};
  const FitnessResult a = fitness(brain, params, key);
  const FitnessResult b = fitness(brain, params, key);
  EXPECT_EQ(a.log_w, b.log_w);
  for (int m = Mapping::kCount - 1; m >= 0; --m) {
    const TrialResult r = evaluate_mapping(brain, m, params, key);
    EXPECT_EQ(r.shaped_score, a.trials[static_cast<std::size_t>(m)].shaped_score);
    EXPECT_EQ(r.goal_reaches, a.trials[static_cast<std::size_t>(m)].goal_reaches);
  }
}

TEST(Fitness, BrainStateIsResetBetweenMappings) {
  Rng grng(12);
  Brain brain = Brain::build(random_genome(5000, 12, grng));
  const TrialParams params = small_params();
  const EvaluationKey key{1, 0, 0};
  const FitnessResult fresh = fitness(brain, params, key);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) brain.step(static_cast<std::uint8_t>(1U << (t % 4)), rng);
  EXPECT_EQ(fitness(brain, params, key).log_w, fresh.log_w);
}

TEST(Fitness, EmptyBrainHasPositiveFiniteFitness) {
  const FitnessResult f = fitness(Brain{}, small_params(), {3, 0, 0});
  EXPECT_TRUE(std::isfinite(f.log_w));
  EXPECT_GT(f.w(), 0.0);
  // option 0 is Forward in 6 of the 24 mappings; otherwise the agent only turns or waits
  for (int m = 0; m < Mapping::kCount; ++m) {
    if (Mapping(m).action_for(0) != Action::Forward) {
      EXPECT_EQ(f.trials[static_cast<std::size_t>(m)].goal_reaches, 0);
      EXPECT_EQ(f.trials[static_cast<std::size_t>(m)].actions.forward, 0u);
    }
  }
}
