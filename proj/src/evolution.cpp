#include "fbmb/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace fbmb {

void RunConfig::validate() const {
  auto require = [](bool ok, const char* key) {
    if (!ok) throw std::invalid_argument(std::string("invalid value for ") + key);
  };
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  require(population >= 1, "population");
  require(tournament_size >= 1 && tournament_size <= population, "tournament_size");
  require(probability(mutation.point_rate), "point_rate");
  require(probability(mutation.duplication_rate), "duplication_rate");
  require(probability(mutation.deletion_rate), "deletion_rate");
  require(mutation.duplication_min >= 1 && mutation.duplication_min <= mutation.duplication_max, "duplication_min");
  require(mutation.deletion_min >= 1 && mutation.deletion_min <= mutation.deletion_max, "deletion_min");
  require(mutation.min_length >= 2 && mutation.min_length <= mutation.max_length, "min_length");
  require(initial_length >= mutation.min_length && initial_length <= mutation.max_length, "initial_length");
  require(probability(trial.world.wall_probability), "wall_probability");
  require(trial.world.size >= 3, "size");
  require(trial.world.start_distance >= 1, "start_distance");
  require(trial.steps >= 1, "steps");
  require(trial.goal_bonus >= 0.0, "goal_bonus");
  require(!gates.empty(), "gates");
  require(snapshot_interval >= 1, "snapshot_interval");
  require(analysis_repeats >= 1, "analysis_repeats");
  require(analysis_stride >= 1, "analysis_stride");
}

int Summary::total_goals() const { return std::accumulate(goals_per_mapping.begin(), goals_per_mapping.end(), 0); }

Summary summarize(const Brain& brain, const FitnessResult& fitness) {
  Summary s;
  s.log_w = fitness.log_w;
  s.mean_goals = fitness.mean_goals();
  for (const TrialResult& t : fitness.trials) s.goals_per_mapping[static_cast<std::size_t>(t.mapping)] = t.goal_reaches;
  s.deterministic_gates = brain.count(GateKind::Deterministic);
  s.probabilistic_gates = brain.count(GateKind::Probabilistic);
  s.feedback_gates = brain.count(GateKind::Feedback);
  s.actions = fitness.actions;
  return s;
}

Organism::~Organism() {
  // Unlink the ancestor chain iteratively; a long line of descent would
  // otherwise be destroyed by deep recursion.
  std::shared_ptr<const Organism> next = std::move(parent);
  while (next && next.use_count() == 1) {
    std::shared_ptr<const Organism> grand = std::move(const_cast<Organism&>(*next).parent);
    next = std::move(grand);
  }
}

Population make_founders(const RunConfig& config) {
  Population population;
  population.reserve(config.population);
  for (std::size_t i = 0; i < config.population; ++i) {
    Rng rng = Rng::substream(config.seed, 0, i, 0, StreamPurpose::Founder);
    auto org = std::make_shared<Organism>();
    org->id = organism_id(0, i, config.population);
    org->genome = random_genome(config.initial_length, config.initial_codons, rng);
    population.push_back(std::move(org));
  }
  return population;
}

void evaluate_population(Population& population, const RunConfig& config, std::size_t workers) {
  auto evaluate_one = [&](std::size_t i) {
    Organism& org = *population[i];
    const Brain brain = Brain::build(org.genome, config.gates);
    const EvaluationKey key{config.seed, org.generation, i};
    org.summary = summarize(brain, fitness(brain, config.trial, key));
  };

  workers = std::max<std::size_t>(1, std::min(workers, population.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < population.size(); ++i) evaluate_one(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < population.size(); i = next.fetch_add(1)) {
          try {
            evaluate_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t tournament_select(std::span<const double> fitness, std::size_t k, Rng& rng) {
  std::vector<std::size_t> drawn(k);
  for (auto& d : drawn) d = rng.below(fitness.size());
  double best = fitness[drawn[0]];
  for (std::size_t d : drawn) best = std::max(best, fitness[d]);

  std::vector<std::size_t> tied;
  for (std::size_t d : drawn) {
    if (fitness[d] == best && std::find(tied.begin(), tied.end(), d) == tied.end()) tied.push_back(d);
  }
  return tied.size() == 1 ? tied[0] : tied[rng.below(tied.size())];
}

Population next_generation(const Population& population, const RunConfig& config) {
  const std::uint64_t generation = population.front()->generation + 1;
  std::vector<double> fitness(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) fitness[i] = population[i]->summary.log_w;

  Rng selection = Rng::substream(config.seed, generation, 0, 0, StreamPurpose::Selection);
  Population next;
  next.reserve(config.population);
  for (std::size_t slot = 0; slot < config.population; ++slot) {
    const OrganismPtr& parent = population[tournament_select(fitness, config.tournament_size, selection)];
    Rng mutation = Rng::substream(config.seed, generation, slot, 0, StreamPurpose::Mutation);
    auto child = std::make_shared<Organism>();
    child->id = organism_id(generation, slot, config.population);
    child->parent_id = static_cast<std::int64_t>(parent->id);
    child->generation = generation;
    child->genome = mutate(parent->genome, config.mutation, mutation);
    child->parent = parent;
    next.push_back(std::move(child));
  }
  return next;
}

GenerationStats generation_stats(const Population& population) {
  GenerationStats s;
  s.generation = population.front()->generation;
  s.max_log_w = population.front()->summary.log_w;
  ActionCounts actions;
  std::size_t zero = 0;
  for (const auto& org : population) {
    const Summary& sum = org->summary;
    s.max_log_w = std::max(s.max_log_w, sum.log_w);
    s.mean_log_w += sum.log_w;
    s.mean_goal_count += sum.mean_goals;
    zero += sum.total_goals() == 0 ? 1 : 0;
    s.mean_deterministic_gates += static_cast<double>(sum.deterministic_gates);
    s.mean_probabilistic_gates += static_cast<double>(sum.probabilistic_gates);
    s.mean_feedback_gates += static_cast<double>(sum.feedback_gates);
    actions += sum.actions;
  }
  const auto n = static_cast<double>(population.size());
  s.mean_log_w /= n;
  s.mean_goal_count /= n;
  s.frac_zero_goal = static_cast<double>(zero) / n;
  s.mean_deterministic_gates /= n;
  s.mean_probabilistic_gates /= n;
  s.mean_feedback_gates /= n;
  const auto total = static_cast<double>(actions.total());
  if (total > 0) {
    s.frac_forward = static_cast<double>(actions.forward) / total;
    s.frac_turn = static_cast<double>(actions.turn) / total;
    s.frac_nothing = static_cast<double>(actions.nothing) / total;
  }
  return s;
}

LodTrace trace_lod(const Archive& archive, std::span<const std::uint64_t> final_ids, Rng& rng) {
  if (final_ids.empty()) throw std::invalid_argument("no final individuals to trace");
  std::unordered_map<std::uint64_t, const AncestryRecord*> by_id;
  by_id.reserve(archive.size());
  for (const AncestryRecord& r : archive) by_id.emplace(r.id, &r);

  auto record = [&](std::uint64_t id) -> const AncestryRecord& {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw MissingAncestor("individual " + std::to_string(id) + " is missing from the archive");
    return *it->second;
  };

  LodTrace trace;
  for (std::int64_t id = static_cast<std::int64_t>(final_ids[rng.below(final_ids.size())]); id >= 0;) {
    const AncestryRecord& r = record(static_cast<std::uint64_t>(id));
    trace.chain.push_back(r.id);
    id = r.parent_id;
  }
  std::reverse(trace.chain.begin(), trace.chain.end());

  // Step the whole final generation back one generation at a time until
  // its ancestors collapse onto a single individual.
  std::unordered_set<std::uint64_t> front(final_ids.begin(), final_ids.end());
  for (;;) {
    if (front.size() == 1) {
      trace.mrca = *front.begin();
      break;
    }
    std::unordered_set<std::uint64_t> parents;
    bool reached_founders = false;
    for (std::uint64_t id : front) {
      const AncestryRecord& r = record(id);
      if (r.parent_id < 0) {
        reached_founders = true;
        break;
      }
      parents.insert(static_cast<std::uint64_t>(r.parent_id));
    }
    if (reached_founders) break;
    front = std::move(parents);
  }
  return trace;
}

std::vector<std::shared_ptr<const Organism>> lineage_of(const std::shared_ptr<const Organism>& organism) {
  std::vector<std::shared_ptr<const Organism>> chain;
  for (auto p = organism; p; p = p->parent) chain.push_back(p);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<LodRecord> lod_records(const RunResult& run) {
  std::vector<LodRecord> records;
  records.reserve(run.lod_organisms.size());
  for (const auto& org : run.lod_organisms) {
    records.push_back({org->id, org->parent_id, org->generation, org->summary, org->genome,
                       run.lod.mrca && *run.lod.mrca == org->id});
  }
  return records;
}

RunResult run_evolution(const RunConfig& config, std::size_t workers, const GenerationCallback& on_generation) {
  config.validate();
  RunResult result;
  const std::size_t generations = std::max<std::size_t>(config.generations, 1);
  result.archive.reserve(generations * config.population);

  Population population = make_founders(config);
  for (std::size_t g = 0; g < generations; ++g) {
    if (g > 0) population = next_generation(population, config);
    evaluate_population(population, config, workers);
    for (const auto& org : population) {
      result.archive.push_back({org->id, org->parent_id, org->generation, org->summary.log_w, org->summary.mean_goals});
    }
    result.stats.push_back(generation_stats(population));
    if (on_generation) on_generation(result.stats.back(), population);
  }

  std::vector<std::uint64_t> final_ids;
  for (const auto& org : population) final_ids.push_back(org->id);
  Rng lineage_rng = Rng::substream(config.seed, generations, 0, 0, StreamPurpose::Lineage);
  result.lod = trace_lod(result.archive, final_ids, lineage_rng);

  const std::uint64_t chosen = result.lod.chain.back();
  for (const auto& org : population) {
    if (org->id == chosen) result.lod_organisms = lineage_of(org);
  }
  result.final_population = std::move(population);
  return result;
}

}  // namespace fbmb
