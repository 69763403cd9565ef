#include "fbmb/trial.hpp"

#include <cmath>

namespace fbmb {

TrialResult run_trial(Brain& brain, const Mapping& mapping, const TrialParams& params, Rng& world_rng,
                      Rng& brain_rng, std::vector<TraceStep>* trace) {
  std::vector<ProbabilityTable> birth = brain.feedback_tables();
  TrialResult result = run_controller_trial(
      [&](std::uint8_t sensors) { return brain.step(sensors, brain_rng); }, mapping, params, world_rng, trace);
  result.birth_tables = std::move(birth);
  result.end_tables = brain.feedback_tables();
  return result;
}

TrialResult evaluate_mapping(const Brain& prototype, int mapping, const TrialParams& params, const EvaluationKey& key,
                             std::vector<TraceStep>* trace) {
  Brain brain = prototype;
  brain.reset();
  Rng world_rng = key.world_stream(mapping);
  Rng brain_rng = key.brain_stream(mapping);
  return run_trial(brain, Mapping(mapping), params, world_rng, brain_rng, trace);
}

double FitnessResult::w() const { return std::exp(log_w); }

double FitnessResult::mean_goals() const {
  return trials.empty() ? 0.0 : static_cast<double>(total_goals) / static_cast<double>(trials.size());
}

FitnessResult fitness(const Brain& prototype, const TrialParams& params, const EvaluationKey& key) {
  FitnessResult result;
  result.trials.reserve(Mapping::kCount);
  for (int m = 0; m < Mapping::kCount; ++m) {
    TrialResult trial = evaluate_mapping(prototype, m, params, key);
    result.log_w += std::log(trial.score(params.goal_bonus));
    result.total_goals += trial.goal_reaches;
    result.actions += trial.actions;
    result.trials.push_back(std::move(trial));
  }
  return result;
}

}  // namespace fbmb
