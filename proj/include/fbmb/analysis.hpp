#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbmb/evolution.hpp"

namespace fbmb {

/// Re-evaluation streams for analysis: repeat r of agent `tag` uses the key
/// (seed, r, tag) with analysis-only purposes, so active and frozen runs see
/// the same worlds.
EvaluationKey analysis_key(std::uint64_t seed, std::size_t repeat, std::uint64_t tag);

struct AblationReport {
  std::size_t feedback_gates = 0;
  double active_goals = 0.0;  // goal reaches per mapping, averaged over repeats
  double frozen_goals = 0.0;

  double difference() const { return active_goals - frozen_goals; }
};

/// Evaluates the agent as is and with every feedback gate frozen on
/// identical streams.
AblationReport ablate_and_compare(const Genome& genome, const RunConfig& config, std::uint64_t tag = 0);

struct GateMi {
  std::size_t gate = 0;  // index among the agent's feedback gates
  double birth_mi = 0.0;
  std::vector<double> end_mi;  // one per trial, repeats x mappings
  double mean_delta = 0.0;     // mean of end_mi - birth_mi
};

struct MiReport {
  std::vector<GateMi> gates;
  double mean_delta = 0.0;   // over gates and trials; 0 for an empty report
  double performance = 0.0;  // goal reaches per mapping, averaged over repeats
  /// End-of-trial tables of the first repeat, [mapping][gate].
  std::vector<std::vector<ProbabilityTable>> end_tables;

  bool empty() const { return gates.empty(); }
};

MiReport mi_report(const Genome& genome, const RunConfig& config, std::uint64_t tag = 0, bool frozen = false);

struct MiBin {
  int bin = 0;  // floor of performance
  std::size_t count = 0;
  double mean_delta = 0.0;
  double variance = 0.0;  // population variance of the deltas in the bin
};

/// Width-1 bins over performance spanning the observed range; empty bins omitted.
std::vector<MiBin> bin_mi_by_performance(std::span<const std::pair<double, double>> performance_delta);

using LodSeries = std::vector<LodRecord>;

struct PerformancePoint {
  std::uint64_t generation = 0;
  std::size_t replicates = 0;
  double mean_goals = 0.0;
  std::optional<double> standard_error;  // absent for a single replicate
  double mapping_variance = 0.0;         // variance over the 24 mappings, averaged over replicates
  double frac_zero_goal = 0.0;           // replicates whose agent never reached the goal
};

/// Line-of-descent performance per generation across replicates, truncated
/// to the shortest series.
std::vector<PerformancePoint> performance_summary(std::span<const LodSeries> replicates);

class DegenerateVariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Pearson correlation. Throws std::invalid_argument for fewer than three
/// pairs and DegenerateVariance when either coordinate is constant.
double pearson(std::span<const std::pair<double, double>> pairs);

/// Pearson r between feedback-gate count (first) and deterministic-gate
/// count (second) of the given agents.
double gate_count_correlation(std::span<const Summary> agents);

struct ActionPoint {
  std::uint64_t generation = 0;
  std::size_t replicates = 0;
  double forward = 0.0;
  double turn = 0.0;
  double nothing = 0.0;
  double forward_se = 0.0;
  double turn_se = 0.0;
  double nothing_se = 0.0;
};

struct ActionFractions {
  double forward = 0.0;
  double turn = 0.0;
  double nothing = 0.0;
};

ActionFractions action_fractions(const ActionCounts& counts);

struct ActionUsage {
  std::vector<ActionPoint> with_feedback;     // final LOD agent has feedback gates
  std::vector<ActionPoint> without_feedback;
};

ActionUsage action_usage(std::span<const LodSeries> replicates);

}  // namespace fbmb
