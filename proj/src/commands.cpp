#include "fbmb/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fbmb/analysis.hpp"
#include "fbmb/run_io.hpp"

namespace fs = std::filesystem;

namespace fbmb {

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::uint64_t parse_index(const std::string& text, const std::string& selector) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("unknown agent '" + selector + "'");
  return value;
}

/// Positions of every stride-th ancestor plus the final one.
std::vector<std::size_t> strided(const std::vector<LodRecord>& lod, std::size_t stride) {
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < lod.size(); ++i) {
    if (lod[i].generation % stride == 0 || i + 1 == lod.size()) picks.push_back(i);
  }
  return picks;
}

}  // namespace

RunConfig effective_config(const ConfigOverrides& o) {
  RunConfig config = o.config_path ? load_config(*o.config_path) : RunConfig{};
  if (o.seed) config.seed = *o.seed;
  if (o.generations) config.generations = *o.generations;
  if (o.population) config.population = *o.population;
  if (o.gates) {
    try {
      config.gates = GateKindSet::parse(*o.gates);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--gates: ") + e.what());
    }
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

int cmd_evolve(const EvolveOptions& options, std::ostream& log) {
  const RunConfig config = effective_config(options.config);
  const fs::path& out = options.out;
  if (fs::exists(out)) {
    log << "warning: " << out.string() << " already exists; its run files will be overwritten\n";
  }
  fs::create_directories(out / run_files::kGenomes);

  {
    std::ofstream cfg = open_out(out / run_files::kConfig);
    cfg << seed_comment(config.seed) << '\n' << serialize_config(config);
  }

  std::ofstream stats = open_out(out / run_files::kStats);
  write_stats_header(stats, config.seed);
  const std::size_t generations = std::max<std::size_t>(config.generations, 1);
  const std::size_t progress_every = std::max<std::size_t>(generations / 20, 1);

  const RunResult run = run_evolution(config, options.workers, [&](const GenerationStats& s, const Population& pop) {
    write_stats_row(stats, s);
    stats.flush();
    if (config.snapshot_interval > 0 && s.generation % config.snapshot_interval == 0) {
      std::ofstream snap = open_out(out / run_files::kGenomes / ("gen_" + std::to_string(s.generation) + ".txt"));
      write_genome_snapshot(snap, pop, config.seed);
    }
    if (!options.quiet && (s.generation % progress_every == 0 || s.generation + 1 == generations)) {
      log << "generation " << s.generation << " max_W_log=" << format_double(s.max_log_w)
          << " mean_goals=" << format_double(s.mean_goal_count) << '\n';
    }
  });
  stats.close();
  if (!stats) throw std::runtime_error("error writing stats.csv");

  {
    std::ofstream anc = open_out(out / run_files::kAncestry);
    write_ancestry_csv(anc, run.archive, config.seed);
  }
  const std::vector<LodRecord> lod = lod_records(run);
  {
    std::ofstream lod_out = open_out(out / run_files::kLod);
    write_lod_jsonl(lod_out, lod, config.seed);
  }
  if (!options.quiet) {
    log << "line of descent: " << lod.size() << " ancestors, final id " << lod.back().id;
    if (run.lod.mrca) log << ", mrca " << *run.lod.mrca;
    log << '\n';
  }
  return 0;
}

RunConfig load_run_config(const fs::path& run_dir) { return load_config((run_dir / run_files::kConfig).string()); }

std::vector<LodRecord> load_lod(const fs::path& run_dir) {
  std::ifstream in = open_in(run_dir / run_files::kLod);
  std::vector<LodRecord> lod = read_lod_jsonl(in);
  if (lod.empty()) throw FormatError("empty line of descent in " + run_dir.string());
  return lod;
}

std::size_t select_agent(const std::vector<LodRecord>& lod, const std::string& selector) {
  if (lod.empty()) throw UsageError("empty line of descent");
  if (selector == "final") return lod.size() - 1;
  if (selector == "founder") return 0;
  if (selector == "mrca") {
    for (std::size_t i = 0; i < lod.size(); ++i) {
      if (lod[i].is_mrca) return i;
    }
    throw UsageError("run has no most recent common ancestor on its line of descent");
  }
  if (selector.starts_with("lod:")) {
    const std::uint64_t k = parse_index(selector.substr(4), selector);
    if (k >= lod.size()) throw UsageError("unknown agent '" + selector + "': line of descent has " +
                                          std::to_string(lod.size()) + " entries");
    return k;
  }
  if (selector.starts_with("id:")) {
    const std::uint64_t id = parse_index(selector.substr(3), selector);
    for (std::size_t i = 0; i < lod.size(); ++i) {
      if (lod[i].id == id) return i;
    }
  }
  throw UsageError("unknown agent '" + selector + "'");
}

int cmd_replay(const ReplayOptions& options, std::ostream& log) {
  if (options.mapping < 0 || options.mapping >= Mapping::kCount) {
    throw UsageError("invalid mapping index " + std::to_string(options.mapping) + " (must be 0-23)");
  }
  const RunConfig config = load_run_config(options.run_dir);
  const std::vector<LodRecord> lod = load_lod(options.run_dir);
  const LodRecord& agent = lod[select_agent(lod, options.agent)];

  const Brain brain = Brain::build(agent.genome, config.gates);
  const EvaluationKey key{config.seed, agent.generation, agent.id % config.population};
  std::vector<TraceStep> trace;
  const TrialResult result = evaluate_mapping(brain, options.mapping, config.trial, key, &trace);

  if (options.out.empty()) {
    write_trace_csv(log, trace, agent.generation, options.mapping, config.seed);
  } else {
    std::ofstream out = open_out(options.out);
    write_trace_csv(out, trace, agent.generation, options.mapping, config.seed);
    log << "agent " << agent.id << " mapping " << options.mapping << ": " << result.goal_reaches
        << " goal reaches, shaped score " << format_double(result.shaped_score) << '\n';
  }
  return 0;
}

int cmd_lod(const LodOptions& options, std::ostream& log) {
  const RunConfig config = load_run_config(options.run_dir);
  std::ifstream in = open_in(options.run_dir / run_files::kAncestry);
  const Archive archive = read_ancestry_csv(in);
  if (archive.empty()) throw FormatError("empty ancestry archive");

  std::uint64_t last = 0;
  for (const AncestryRecord& r : archive) last = std::max(last, r.generation);
  std::vector<std::uint64_t> final_ids;
  for (const AncestryRecord& r : archive) {
    if (r.generation == last) final_ids.push_back(r.id);
  }
  Rng lineage_rng = Rng::substream(config.seed, last + 1, 0, 0, StreamPurpose::Lineage);
  const LodTrace trace = trace_lod(archive, final_ids, lineage_rng);

  std::map<std::uint64_t, const AncestryRecord*> by_id;
  for (const AncestryRecord& r : archive) by_id[r.id] = &r;
  const fs::path out_path = options.out.empty() ? options.run_dir / "lod_trace.csv" : options.out;
  {
    std::ofstream out = open_out(out_path);
    out << seed_comment(config.seed) << "\nid,parent_id,generation,log_w,mean_goals,is_mrca\n";
    for (std::uint64_t id : trace.chain) {
      const AncestryRecord& r = *by_id.at(id);
      out << r.id << ',' << r.parent_id << ',' << r.generation << ',' << format_double(r.log_w) << ','
          << format_double(r.mean_goals) << ',' << (trace.mrca && *trace.mrca == id ? 1 : 0) << '\n';
    }
  }

  log << "line of descent: " << trace.chain.size() << " ancestors, final id " << trace.chain.back() << ", mrca ";
  if (trace.mrca) {
    log << *trace.mrca << '\n';
  } else {
    log << "none\n";
  }

  if (fs::exists(options.run_dir / run_files::kLod)) {
    const std::vector<LodRecord> stored = load_lod(options.run_dir);
    bool same = stored.size() == trace.chain.size();
    for (std::size_t i = 0; same && i < stored.size(); ++i) same = stored[i].id == trace.chain[i];
    if (!same) {
      log << "error: line of descent differs from " << run_files::kLod << '\n';
      return 1;
    }
  }
  return 0;
}

int cmd_ablate(const AblateOptions& options, std::ostream& log) {
  RunConfig config = load_run_config(options.run_dir);
  if (options.repeats) config.analysis_repeats = *options.repeats;
  const std::vector<LodRecord> lod = load_lod(options.run_dir);
  const std::vector<std::size_t> picks =
      options.agent == "lod" ? strided(lod, config.analysis_stride)
                             : std::vector<std::size_t>{select_agent(lod, options.agent)};

  const fs::path out_path = options.out.empty() ? options.run_dir / "ablation.csv" : options.out;
  std::ofstream out = open_out(out_path);
  out << seed_comment(config.seed) << "\ngeneration,id,feedback_gates,active_goals,frozen_goals,difference\n";
  for (std::size_t i : picks) {
    const AblationReport r = ablate_and_compare(lod[i].genome, config, lod[i].id);
    out << lod[i].generation << ',' << lod[i].id << ',' << r.feedback_gates << ',' << format_double(r.active_goals)
        << ',' << format_double(r.frozen_goals) << ',' << format_double(r.difference()) << '\n';
    if (i + 1 == lod.size()) {
      log << "final agent " << lod[i].id << ": active " << format_double(r.active_goals) << ", frozen "
          << format_double(r.frozen_goals) << " goal reaches per mapping\n";
    }
  }
  return 0;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
  if (options.run_dirs.empty()) throw UsageError("analyze needs at least one run directory");
  std::vector<RunConfig> configs;
  std::vector<LodSeries> series;
  for (const fs::path& dir : options.run_dirs) {
    configs.push_back(load_run_config(dir));
    if (options.repeats) configs.back().analysis_repeats = *options.repeats;
    series.push_back(load_lod(dir));
  }
  const std::uint64_t seed = configs.front().seed;
  fs::create_directories(options.out);

  // Performance along the line of descent, with frozen-feedback ablation at the stride points.
  {
    std::map<std::uint64_t, std::pair<double, std::size_t>> frozen;
    for (std::size_t r = 0; r < series.size(); ++r) {
      for (std::size_t i : strided(series[r], configs[r].analysis_stride)) {
        const LodRecord& rec = series[r][i];
        auto& [sum, n] = frozen[rec.generation];
        sum += ablate_and_compare(rec.genome, configs[r], rec.id).frozen_goals;
        ++n;
      }
    }
    std::vector<std::pair<std::uint64_t, double>> frozen_means;
    for (const auto& [generation, acc] : frozen) {
      frozen_means.emplace_back(generation, acc.first / static_cast<double>(acc.second));
    }
    std::ofstream out = open_out(options.out / "fig2_performance.csv");
    write_fig2_performance(out, performance_summary(series), frozen_means, seed);
  }

  std::vector<AgentMi> agents_mi;
  std::vector<std::pair<double, double>> perf_delta;
  std::vector<AgentGates> agents_gates;
  std::vector<Summary> final_summaries;
  bool tables_written = false;
  for (std::size_t r = 0; r < series.size(); ++r) {
    const LodRecord& final_agent = series[r].back();
    const std::string run = options.run_dirs[r].filename().string();
    const Summary& s = final_agent.summary;
    agents_gates.push_back({run, s.feedback_gates, s.deterministic_gates, s.probabilistic_gates});
    final_summaries.push_back(s);
    if (s.feedback_gates == 0) continue;

    const MiReport report = mi_report(final_agent.genome, configs[r], final_agent.id);
    if (!tables_written) {
      std::ofstream out = open_out(options.out / "fig3_tables.csv");
      write_fig3_tables(out, report, configs[r].seed);
      tables_written = true;
    }
    double birth = 0.0, end = 0.0;
    std::size_t n_end = 0;
    for (const GateMi& g : report.gates) {
      birth += g.birth_mi;
      for (double e : g.end_mi) end += e;
      n_end += g.end_mi.size();
    }
    birth /= static_cast<double>(report.gates.size());
    end = n_end == 0 ? 0.0 : end / static_cast<double>(n_end);
    agents_mi.push_back({run, report.performance, report.mean_delta, birth, end});
    perf_delta.emplace_back(report.performance, report.mean_delta);
  }
  if (!tables_written) log << "no final agent has feedback gates; fig3_tables.csv not written\n";
  {
    std::ofstream out = open_out(options.out / "fig4_mi.csv");
    write_fig4_mi(out, agents_mi, bin_mi_by_performance(perf_delta), seed);
  }
  {
    std::ofstream out = open_out(options.out / "fig5_gates.csv");
    write_fig5_gates(out, agents_gates, seed);
  }
  {
    std::ofstream out = open_out(options.out / "fig6_actions.csv");
    write_fig6_actions(out, action_usage(series), seed);
  }
  log << "analyzed " << series.size() << " runs into " << options.out.string() << '\n';
  return 0;
}

}  // namespace fbmb
