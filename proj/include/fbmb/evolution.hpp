#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fbmb/brain.hpp"
#include "fbmb/genome.hpp"
#include "fbmb/trial.hpp"

namespace fbmb {

/// Everything that determines a run. Defaults are the published setup;
/// population size, bonus, snapshot interval and analysis repeats are not
/// given there and are this project's choices.
struct RunConfig {
  std::size_t population = 100;
  std::size_t generations = 500000;
  std::size_t tournament_size = 5;
  std::size_t initial_length = 5000;
  std::size_t initial_codons = 12;
  MutationParams mutation;
  TrialParams trial;
  GateKindSet gates = GateKindSet::all();
  std::uint64_t seed = 1;
  std::size_t snapshot_interval = 100;
  std::size_t analysis_repeats = 10;
  std::size_t analysis_stride = 100;

  /// Throws std::invalid_argument naming the first offending key.
  void validate() const;
};

/// Per-individual evaluation summary.
struct Summary {
  double log_w = 0.0;
  double mean_goals = 0.0;
  std::array<int, Mapping::kCount> goals_per_mapping{};
  std::size_t deterministic_gates = 0;
  std::size_t probabilistic_gates = 0;
  std::size_t feedback_gates = 0;
  ActionCounts actions;

  int total_goals() const;
};

Summary summarize(const Brain& brain, const FitnessResult& fitness);

/// An individual. Holding the parent pointer keeps exactly the ancestors of
/// living individuals in memory, which is what the line of descent needs.
struct Organism {
  std::uint64_t id = 0;
  std::int64_t parent_id = -1;
  std::uint64_t generation = 0;
  Genome genome;
  Summary summary;
  std::shared_ptr<const Organism> parent;

  Organism() = default;
  Organism(const Organism&) = delete;
  Organism& operator=(const Organism&) = delete;
  ~Organism();
};

using OrganismPtr = std::shared_ptr<Organism>;
using Population = std::vector<OrganismPtr>;

/// Flat ancestry row kept for every individual ever evaluated.
struct AncestryRecord {
  std::uint64_t id = 0;
  std::int64_t parent_id = -1;
  std::uint64_t generation = 0;
  double log_w = 0.0;
  double mean_goals = 0.0;

  friend bool operator==(const AncestryRecord&, const AncestryRecord&) = default;
};

using Archive = std::vector<AncestryRecord>;

struct GenerationStats {
  std::uint64_t generation = 0;
  double max_log_w = 0.0;
  double mean_log_w = 0.0;
  double mean_goal_count = 0.0;
  double frac_zero_goal = 0.0;
  double mean_deterministic_gates = 0.0;
  double mean_probabilistic_gates = 0.0;
  double mean_feedback_gates = 0.0;
  double frac_forward = 0.0;
  double frac_turn = 0.0;
  double frac_nothing = 0.0;
};

/// Identifier of the i-th individual of generation g.
constexpr std::uint64_t organism_id(std::uint64_t generation, std::uint64_t index, std::uint64_t population) {
  return generation * population + index;
}

Population make_founders(const RunConfig& config);

/// Evaluates every individual on its own substreams keyed by
/// (seed, generation, index); output is independent of `workers`.
void evaluate_population(Population& population, const RunConfig& config, std::size_t workers = 1);

/// k draws with replacement; the fittest wins, ties split uniformly among
/// the distinct tied individuals. Returns an index into `fitness`.
std::size_t tournament_select(std::span<const double> fitness, std::size_t k, Rng& rng);

/// Tournament selection plus mutation into a fresh generation.
Population next_generation(const Population& population, const RunConfig& config);

GenerationStats generation_stats(const Population& population);

class MissingAncestor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LodTrace {
  std::vector<std::uint64_t> chain;  // founder first
  std::optional<std::uint64_t> mrca;
};

/// Picks a uniform final-generation individual and follows parent ids back to
/// generation 0. The MRCA is the deepest individual that is an ancestor (or
/// self) of every final individual. Throws MissingAncestor when a parent id
/// is absent from the archive.
LodTrace trace_lod(const Archive& archive, std::span<const std::uint64_t> final_ids, Rng& rng);

/// Walks the in-memory lineage from `organism` to its founder, founder first.
std::vector<std::shared_ptr<const Organism>> lineage_of(const std::shared_ptr<const Organism>& organism);

struct RunResult {
  std::vector<GenerationStats> stats;
  Archive archive;
  Population final_population;
  LodTrace lod;
  std::vector<std::shared_ptr<const Organism>> lod_organisms;
};

/// One ancestor on the line of descent, as persisted in lod.jsonl.
struct LodRecord {
  std::uint64_t id = 0;
  std::int64_t parent_id = -1;
  std::uint64_t generation = 0;
  Summary summary;
  Genome genome;
  bool is_mrca = false;
};

/// The traced line of descent with genomes and summaries, founder first.
std::vector<LodRecord> lod_records(const RunResult& run);

/// Called after each generation is evaluated.
using GenerationCallback = std::function<void(const GenerationStats&, const Population&)>;

/// Evaluates max(generations, 1) generations, the founders being generation 0.
RunResult run_evolution(const RunConfig& config, std::size_t workers = 1, const GenerationCallback& on_generation = {});

}  // namespace fbmb
