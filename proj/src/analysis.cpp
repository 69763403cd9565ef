#include "fbmb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fbmb {

EvaluationKey analysis_key(std::uint64_t seed, std::size_t repeat, std::uint64_t tag) {
  return {seed, repeat, tag, StreamPurpose::AnalysisWorld, StreamPurpose::AnalysisBrain};
}

AblationReport ablate_and_compare(const Genome& genome, const RunConfig& config, std::uint64_t tag) {
  const Brain active = Brain::build(genome, config.gates);
  Brain frozen = active;
  frozen.freeze_feedback();

  AblationReport report;
  report.feedback_gates = active.count(GateKind::Feedback);
  for (std::size_t r = 0; r < config.analysis_repeats; ++r) {
    const EvaluationKey key = analysis_key(config.seed, r, tag);
    report.active_goals += fitness(active, config.trial, key).mean_goals();
    report.frozen_goals += fitness(frozen, config.trial, key).mean_goals();
  }
  const auto repeats = static_cast<double>(config.analysis_repeats);
  report.active_goals /= repeats;
  report.frozen_goals /= repeats;
  return report;
}

MiReport mi_report(const Genome& genome, const RunConfig& config, std::uint64_t tag, bool frozen) {
  Brain brain = Brain::build(genome, config.gates);
  if (frozen) brain.freeze_feedback();

  MiReport report;
  const std::vector<ProbabilityTable> birth = brain.feedback_birth_tables();
  for (std::size_t g = 0; g < birth.size(); ++g) report.gates.push_back({g, table_mutual_information(birth[g]), {}, 0.0});

  for (std::size_t r = 0; r < config.analysis_repeats; ++r) {
    const FitnessResult result = fitness(brain, config.trial, analysis_key(config.seed, r, tag));
    report.performance += result.mean_goals();
    for (const TrialResult& trial : result.trials) {
      for (std::size_t g = 0; g < trial.end_tables.size(); ++g) {
        report.gates[g].end_mi.push_back(table_mutual_information(trial.end_tables[g]));
      }
      if (r == 0) report.end_tables.push_back(trial.end_tables);
    }
  }
  report.performance /= static_cast<double>(config.analysis_repeats);

  double total = 0.0;
  std::size_t n = 0;
  for (GateMi& gate : report.gates) {
    double sum = 0.0;
    for (double end : gate.end_mi) sum += end - gate.birth_mi;
    gate.mean_delta = gate.end_mi.empty() ? 0.0 : sum / static_cast<double>(gate.end_mi.size());
    total += sum;
    n += gate.end_mi.size();
  }
  report.mean_delta = n == 0 ? 0.0 : total / static_cast<double>(n);
  return report;
}

std::vector<MiBin> bin_mi_by_performance(std::span<const std::pair<double, double>> performance_delta) {
  std::map<int, std::vector<double>> bins;
  for (const auto& [performance, delta] : performance_delta) {
    bins[static_cast<int>(std::floor(performance))].push_back(delta);
  }
  std::vector<MiBin> out;
  for (const auto& [bin, deltas] : bins) {
    MiBin b{bin, deltas.size(), 0.0, 0.0};
    for (double d : deltas) b.mean_delta += d;
    b.mean_delta /= static_cast<double>(deltas.size());
    for (double d : deltas) b.variance += (d - b.mean_delta) * (d - b.mean_delta);
    b.variance /= static_cast<double>(deltas.size());
    out.push_back(b);
  }
  return out;
}

namespace {

struct MeanSe {
  double mean = 0.0;
  std::optional<double> se;
};

MeanSe mean_and_se(std::span<const double> xs) {
  MeanSe out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    out.se = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

std::size_t shortest(std::span<const LodSeries> replicates) {
  std::size_t n = replicates.empty() ? 0 : replicates.front().size();
  for (const LodSeries& s : replicates) n = std::min(n, s.size());
  return n;
}

double mapping_variance(const Summary& s) {
  double mean = 0.0;
  for (int g : s.goals_per_mapping) mean += g;
  mean /= static_cast<double>(s.goals_per_mapping.size());
  double var = 0.0;
  for (int g : s.goals_per_mapping) var += (g - mean) * (g - mean);
  return var / static_cast<double>(s.goals_per_mapping.size());
}

std::vector<ActionPoint> action_series(const std::vector<const LodSeries*>& group) {
  std::vector<ActionPoint> points;
  if (group.empty()) return points;
  std::size_t n = group.front()->size();
  for (const LodSeries* s : group) n = std::min(n, s->size());
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> f, t, z;
    for (const LodSeries* s : group) {
      const ActionFractions a = action_fractions((*s)[k].summary.actions);
      f.push_back(a.forward);
      t.push_back(a.turn);
      z.push_back(a.nothing);
    }
    const MeanSe mf = mean_and_se(f), mt = mean_and_se(t), mz = mean_and_se(z);
    points.push_back({(*group.front())[k].generation, group.size(), mf.mean, mt.mean, mz.mean, mf.se.value_or(0.0),
                      mt.se.value_or(0.0), mz.se.value_or(0.0)});
  }
  return points;
}

}  // namespace

std::vector<PerformancePoint> performance_summary(std::span<const LodSeries> replicates) {
  std::vector<PerformancePoint> points;
  const std::size_t n = shortest(replicates);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> goals;
    PerformancePoint p;
    p.generation = replicates.front()[k].generation;
    p.replicates = replicates.size();
    std::size_t zero = 0;
    for (const LodSeries& s : replicates) {
      const Summary& sum = s[k].summary;
      goals.push_back(sum.mean_goals);
      p.mapping_variance += mapping_variance(sum);
      zero += sum.total_goals() == 0 ? 1 : 0;
    }
    const MeanSe m = mean_and_se(goals);
    p.mean_goals = m.mean;
    p.standard_error = m.se;
    p.mapping_variance /= static_cast<double>(replicates.size());
    p.frac_zero_goal = static_cast<double>(zero) / static_cast<double>(replicates.size());
    points.push_back(p);
  }
  return points;
}

double pearson(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("correlation needs at least three pairs");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pairs.size());
  my /= static_cast<double>(pairs.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateVariance("a coordinate has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double gate_count_correlation(std::span<const Summary> agents) {
  std::vector<std::pair<double, double>> pairs;
  for (const Summary& s : agents) {
    pairs.emplace_back(static_cast<double>(s.feedback_gates), static_cast<double>(s.deterministic_gates));
  }
  return pearson(pairs);
}

ActionFractions action_fractions(const ActionCounts& counts) {
  const auto total = static_cast<double>(counts.total());
  if (total == 0.0) return {};
  return {static_cast<double>(counts.forward) / total, static_cast<double>(counts.turn) / total,
          static_cast<double>(counts.nothing) / total};
}

ActionUsage action_usage(std::span<const LodSeries> replicates) {
  std::vector<const LodSeries*> with, without;
  for (const LodSeries& s : replicates) {
    if (s.empty()) continue;
    (s.back().summary.feedback_gates > 0 ? with : without).push_back(&s);
  }
  return {action_series(with), action_series(without)};
}

}  // namespace fbmb
