#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fbmb/brain.hpp"
#include "fbmb/world.hpp"

namespace fbmb {

struct TrialParams {
  WorldParams world;
  int steps = 512;
  double goal_bonus = 512.0;
};

struct ActionCounts {
  std::uint64_t forward = 0;
  std::uint64_t turn = 0;
  std::uint64_t nothing = 0;

  std::uint64_t total() const { return forward + turn + nothing; }
  void record(Action a) {
    switch (a) {
      case Action::Forward:
        ++forward;
        break;
      case Action::TurnLeft:
      case Action::TurnRight:
        ++turn;
        break;
      case Action::DoNothing:
        ++nothing;
        break;
    }
  }
  ActionCounts& operator+=(const ActionCounts& o) {
    forward += o.forward;
    turn += o.turn;
    nothing += o.nothing;
    return *this;
  }
  friend bool operator==(const ActionCounts&, const ActionCounts&) = default;
};

/// One line of a replay trace.
struct TraceStep {
  int step = 0;
  std::uint8_t sensors = 0;
  std::uint8_t option = 0;
  Action action = Action::DoNothing;
  AgentState agent;  // after the action
  int distance = 0;
};

struct TrialResult {
  int mapping = 0;
  double shaped_score = 0.0;  // sum over steps of 1 / (1 + d)
  int goal_reaches = 0;
  ActionCounts actions;
  std::vector<ProbabilityTable> birth_tables;  // one per feedback gate
  std::vector<ProbabilityTable> end_tables;

  double score(double goal_bonus) const { return shaped_score + goal_bonus * goal_reaches; }
};

/// Runs one mapping trial with any controller callable as
/// `std::uint8_t(std::uint8_t sensors)` returning an option in [0, 4).
/// All world randomness (layout, start tiles, re-placements) comes from
/// `world_rng`, so the same stream yields the same worlds for any controller.
template <typename Controller>
TrialResult run_controller_trial(Controller&& controller, const Mapping& mapping, const TrialParams& params,
                                 Rng& world_rng, std::vector<TraceStep>* trace = nullptr) {
  TrialResult result;
  result.mapping = mapping.index();
  const World world = generate_world(params.world, world_rng);
  AgentState agent = place_agent(world, params.world.start_distance, world_rng);
  for (int t = 0; t < params.steps; ++t) {
    const std::uint8_t sensors = perceive(world, agent);
    const std::uint8_t option = controller(sensors);
    const Action action = mapping.action_for(option);
    agent = apply_action(world, agent, action);
    result.actions.record(action);
    const int d = world.distance(agent.position);
    result.shaped_score += 1.0 / (1.0 + d);
    if (trace) trace->push_back({t, sensors, option, action, agent, d});
    if (d == 0) {
      ++result.goal_reaches;
      agent = place_agent(world, params.world.start_distance, world_rng);
    }
  }
  return result;
}

/// Trial driven by a brain. The brain should be freshly reset; its state
/// carries across goal re-placements within the trial.
TrialResult run_trial(Brain& brain, const Mapping& mapping, const TrialParams& params, Rng& world_rng,
                      Rng& brain_rng, std::vector<TraceStep>* trace = nullptr);

/// Identifies the random streams of one evaluation.
struct EvaluationKey {
  std::uint64_t master_seed = 0;
  std::uint64_t generation = 0;
  std::uint64_t individual = 0;
  StreamPurpose world_purpose = StreamPurpose::World;
  StreamPurpose brain_purpose = StreamPurpose::Brain;

  Rng world_stream(int mapping) const {
    return Rng::substream(master_seed, generation, individual, static_cast<std::uint64_t>(mapping), world_purpose);
  }
  Rng brain_stream(int mapping) const {
    return Rng::substream(master_seed, generation, individual, static_cast<std::uint64_t>(mapping), brain_purpose);
  }
};

/// Resets a copy of `prototype` and runs the given mapping on its own streams.
TrialResult evaluate_mapping(const Brain& prototype, int mapping, const TrialParams& params, const EvaluationKey& key,
                             std::vector<TraceStep>* trace = nullptr);

struct FitnessResult {
  double log_w = 0.0;  // natural log of the product over mappings
  std::vector<TrialResult> trials;
  int total_goals = 0;
  ActionCounts actions;

  double w() const;
  /// Goal reaches averaged over the mappings.
  double mean_goals() const;
};

/// W = product over the 24 mappings of (shaped score + bonus * goal reaches),
/// accumulated as a sum of logs. The brain is reset before each mapping.
FitnessResult fitness(const Brain& prototype, const TrialParams& params, const EvaluationKey& key);

}  // namespace fbmb
