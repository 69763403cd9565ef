#include <gtest/gtest.h>

#include <cmath>

#include "fbmb/analysis.hpp"

using namespace fbmb;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.trial.world = {16, 1.0 / 7.0, 6};
  c.trial.steps = 128;
  c.analysis_repeats = 3;
  c.initial_length = 1000;
  c.seed = 9;
  return c;
}

// One feedback gate reading all four sensors and driving both outputs,
// rewarded while the arrow points ahead and punished while it points behind.
Genome learner_genome() {
  std::vector<std::uint8_t> sites(1000, 0);
  std::size_t i = 0;
  for (std::uint8_t b : {44, 211, 3, 1, 0, 1, 2, 3, 4, 5, 0, 0, 0, 2, 0, 255, 255, 255, 255}) sites[i++] = b;
  // 16 x 4 table bytes stay 0: every row uniform
  return Genome(sites);
}

LodRecord record(std::uint64_t generation, std::array<int, 24> goals, ActionCounts actions = {}) {
  LodRecord r;
  r.generation = generation;
  r.id = generation;
  r.summary.goals_per_mapping = goals;
  int total = 0;
  for (int g : goals) total += g;
  r.summary.mean_goals = total / 24.0;
  r.summary.actions = actions;
  return r;
}

}  // namespace

TEST(Pearson, ReferenceValuesAndErrors) {
  const std::vector<std::pair<double, double>> anti{{1, 3}, {2, 2}, {3, 1}};
  EXPECT_NEAR(pearson(anti), -1.0, 1e-12);
  const std::vector<std::pair<double, double>> flat{{1, 2}, {2, 2}, {3, 2}};
  EXPECT_THROW(pearson(flat), DegenerateVariance);
  const std::vector<std::pair<double, double>> two{{1, 2}, {2, 3}};
  EXPECT_THROW(pearson(two), std::invalid_argument);
}

TEST(Pearson, IndependentUniformPairsAreNearlyUncorrelated) {
  Rng rng(1);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 1000; ++i) pairs.emplace_back(rng.uniform01(), rng.uniform01());
  EXPECT_LT(std::abs(pearson(pairs)), 0.1);
}

TEST(Pearson, InvariantUnderPositiveAffineMaps) {
  Rng rng(2);
  std::vector<std::pair<double, double>> pairs, mapped;
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform01();
    const double y = x + 0.5 * rng.uniform01();
    pairs.emplace_back(x, y);
    mapped.emplace_back(3.0 * x - 7.0, 0.25 * y + 100.0);
  }
  EXPECT_NEAR(pearson(pairs), pearson(mapped), 1e-12);
}

TEST(GateCountCorrelation, UsesFeedbackAndDeterministicCounts) {
  std::vector<Summary> agents(4);
  for (std::size_t i = 0; i < 4; ++i) {
    agents[i].feedback_gates = i;
    agents[i].deterministic_gates = 10 - 2 * i;
  }
  EXPECT_NEAR(gate_count_correlation(agents), -1.0, 1e-12);
}

TEST(BinMi, WidthOneBinsWithPopulationVariance) {
  const std::vector<std::pair<double, double>> data{{0.2, 1.0}, {0.9, 3.0}, {2.5, -1.0}};
  const auto bins = bin_mi_by_performance(data);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].bin, 0);
  EXPECT_EQ(bins[0].count, 2u);
  EXPECT_DOUBLE_EQ(bins[0].mean_delta, 2.0);
  EXPECT_DOUBLE_EQ(bins[0].variance, 1.0);
  EXPECT_EQ(bins[1].bin, 2);
  EXPECT_DOUBLE_EQ(bins[1].variance, 0.0);
}

TEST(PerformanceSummary, SingleReplicateHasNoStandardError) {
  std::array<int, 24> none{};
  std::array<int, 24> some{};
  some[0] = 24;
  const std::vector<LodSeries> reps{{record(0, none), record(1, some)}};
  const auto points = performance_summary(reps);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_FALSE(points[0].standard_error.has_value());
  EXPECT_DOUBLE_EQ(points[0].frac_zero_goal, 1.0);
  EXPECT_DOUBLE_EQ(points[0].mean_goals, 0.0);
  EXPECT_DOUBLE_EQ(points[1].frac_zero_goal, 0.0);
  EXPECT_DOUBLE_EQ(points[1].mean_goals, 1.0);
  // goals 24, 0, ..., 0: mean 1, population variance (23^2 + 23 * 1) / 24
  EXPECT_DOUBLE_EQ(points[1].mapping_variance, (23.0 * 23.0 + 23.0) / 24.0);
}

TEST(PerformanceSummary, TwoReplicatesTruncatedToTheShorter) {
  std::array<int, 24> ones;
  ones.fill(1);
  std::array<int, 24> threes;
  threes.fill(3);
  const std::vector<LodSeries> reps{{record(0, ones), record(1, ones)}, {record(0, threes)}};
  const auto points = performance_summary(reps);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_DOUBLE_EQ(points[0].mean_goals, 2.0);
  ASSERT_TRUE(points[0].standard_error.has_value());
  EXPECT_DOUBLE_EQ(*points[0].standard_error, 1.0);  // sd sqrt(2) over sqrt(2)
  EXPECT_DOUBLE_EQ(points[0].mapping_variance, 0.0);
}

TEST(ActionFractions, SumToOne) {
  const ActionFractions f = action_fractions({3, 5, 2});
  EXPECT_NEAR(f.forward + f.turn + f.nothing, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(f.forward, 0.3);
  const ActionFractions zero = action_fractions({});
  EXPECT_EQ(zero.forward + zero.turn + zero.nothing, 0.0);
}

TEST(ActionUsage, SplitsByFinalFeedbackGates) {
  std::array<int, 24> g{};
  LodSeries with{record(0, g, {1, 1, 2}), record(1, g, {2, 1, 1})};
  with.back().summary.feedback_gates = 1;
  LodSeries without{record(0, g, {4, 0, 0})};
  const std::vector<LodSeries> reps{with, without};
  const ActionUsage u = action_usage(reps);
  ASSERT_EQ(u.with_feedback.size(), 2u);
  ASSERT_EQ(u.without_feedback.size(), 1u);
  EXPECT_DOUBLE_EQ(u.with_feedback[1].forward, 0.5);
  EXPECT_DOUBLE_EQ(u.without_feedback[0].forward, 1.0);
}

TEST(Ablation, NoFeedbackGatesMeansNoDifference) {
  RunConfig c = small_config();
  c.gates = GateKindSet::parse("dp");
  Rng rng(4);
  const Genome g = random_genome(5000, 12, rng);
  const AblationReport r = ablate_and_compare(g, c);
  EXPECT_EQ(r.feedback_gates, 0u);
  EXPECT_EQ(r.difference(), 0.0);
}

TEST(Ablation, LearnerDoesBetterWithFeedbackActive) {
  const RunConfig c = small_config();
  const AblationReport r = ablate_and_compare(learner_genome(), c);
  EXPECT_EQ(r.feedback_gates, 1u);
  EXPECT_GT(r.active_goals, r.frozen_goals);
}

TEST(MiReport, EmptyWithoutFeedbackGatesAndZeroDeltaWhenFrozen) {
  RunConfig c = small_config();
  c.analysis_repeats = 1;
  Rng rng(6);
  c.gates = GateKindSet::parse("d");
  const MiReport none = mi_report(random_genome(5000, 12, rng), c);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(none.mean_delta, 0.0);

  c.gates = GateKindSet::all();
  const MiReport frozen = mi_report(learner_genome(), c, 0, true);
  ASSERT_EQ(frozen.gates.size(), 1u);
  EXPECT_EQ(frozen.mean_delta, 0.0);
  EXPECT_EQ(frozen.gates[0].end_mi.size(), 24u);

  const MiReport active = mi_report(learner_genome(), c);
  EXPECT_NEAR(active.gates[0].birth_mi, 0.0, 1e-12);
  EXPECT_GT(active.mean_delta, 0.0);
  ASSERT_EQ(active.end_tables.size(), 24u);
  EXPECT_EQ(active.end_tables[0].size(), 1u);
}

TEST(AnalysisKey, UsesAnalysisOnlyStreams) {
  const EvaluationKey k = analysis_key(3, 1, 2);
  EXPECT_EQ(k.world_purpose, StreamPurpose::AnalysisWorld);
  EXPECT_EQ(k.brain_purpose, StreamPurpose::AnalysisBrain);
  const EvaluationKey evolution_key{3, 1, 2};
  EXPECT_NE(k.world_stream(0).next(), evolution_key.world_stream(0).next());
}
