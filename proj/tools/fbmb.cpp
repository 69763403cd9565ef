// Command-line driver: evolve, replay, analyze, ablate, lod.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "fbmb/commands.hpp"
#include "fbmb/config.hpp"

namespace {

void add_config_flags(CLI::App* cmd, fbmb::ConfigOverrides& o) {
  cmd->add_option("--config", o.config_path, "Configuration file (key = value under [sections])");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--generations", o.generations, "Number of generations");
  cmd->add_option("--population", o.population, "Population size");
  cmd->add_option("--gates", o.gates, "Recognized gate kinds")->check(CLI::IsMember({"d", "dp", "dpf"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve and analyze Markov Brains with feedback gates in maze worlds"};
  app.require_subcommand(1);
  app.footer(fbmb::config_reference());

  fbmb::EvolveOptions evolve;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run evolution and write a run directory");
  add_config_flags(evolve_cmd, evolve.config);
  evolve_cmd->add_option("--out", evolve.out, "Run directory")->required();
  evolve_cmd->add_option("--workers", evolve.workers, "Parallel evaluation threads")->check(CLI::PositiveNumber);
  evolve_cmd->add_flag("--quiet", evolve.quiet, "No progress output");

  fbmb::ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Trace one mapping trial of a line-of-descent agent");
  replay_cmd->add_option("run_dir", replay.run_dir, "Run directory")->required();
  replay_cmd->add_option("--agent", replay.agent, "final, founder, mrca, lod:<index> or id:<id>");
  replay_cmd->add_option("--mapping", replay.mapping, "Action mapping index 0-23");
  replay_cmd->add_option("--out", replay.out, "Trace CSV (default: stdout)");

  fbmb::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize replicate runs into figure tables");
  analyze_cmd->add_option("run_dirs", analyze.run_dirs, "Run directories")->required();
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  analyze_cmd->add_option("--repeats", analyze.repeats, "Evaluation repeats per agent");

  fbmb::AblateOptions ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "Compare agents with feedback active and frozen");
  ablate_cmd->add_option("run_dir", ablate.run_dir, "Run directory")->required();
  ablate_cmd->add_option("--agent", ablate.agent, "lod (strided ancestors), final, mrca, lod:<index> or id:<id>");
  ablate_cmd->add_option("--repeats", ablate.repeats, "Evaluation repeats per agent");
  ablate_cmd->add_option("--out", ablate.out, "Output CSV (default: <run_dir>/ablation.csv)");

  fbmb::LodOptions lod;
  auto* lod_cmd = app.add_subcommand("lod", "Re-derive the line of descent and MRCA from ancestry.csv");
  lod_cmd->add_option("run_dir", lod.run_dir, "Run directory")->required();
  lod_cmd->add_option("--out", lod.out, "Output CSV (default: <run_dir>/lod_trace.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*evolve_cmd) return fbmb::cmd_evolve(evolve, std::cerr);
    if (*replay_cmd) return fbmb::cmd_replay(replay, replay.out.empty() ? std::cout : std::cerr);
    if (*analyze_cmd) return fbmb::cmd_analyze(analyze, std::cerr);
    if (*ablate_cmd) return fbmb::cmd_ablate(ablate, std::cerr);
    if (*lod_cmd) return fbmb::cmd_lod(lod, std::cerr);
  } catch (const fbmb::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fbmb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
