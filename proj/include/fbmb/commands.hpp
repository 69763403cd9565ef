#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmb/config.hpp"
#include "fbmb/evolution.hpp"

namespace fbmb {

/// Invalid command arguments (unknown agent, mapping out of range, ...).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flags shared by the subcommands that build a configuration.
struct ConfigOverrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> population;
  std::optional<std::string> gates;
};

/// Defaults, then the config file, then command-line overrides.
RunConfig effective_config(const ConfigOverrides& overrides);

namespace run_files {
inline constexpr const char* kConfig = "config.ini";
inline constexpr const char* kStats = "stats.csv";
inline constexpr const char* kAncestry = "ancestry.csv";
inline constexpr const char* kLod = "lod.jsonl";
inline constexpr const char* kGenomes = "genomes";
}  // namespace run_files

struct EvolveOptions {
  ConfigOverrides config;
  std::filesystem::path out;
  std::size_t workers = 1;
  bool quiet = false;
};

/// Runs evolution and writes config.ini, stats.csv, ancestry.csv, lod.jsonl
/// and genomes/gen_<g>.txt snapshots into `out`. Warns on `log` when the
/// directory already exists. Returns the process exit status.
int cmd_evolve(const EvolveOptions& options, std::ostream& log);

RunConfig load_run_config(const std::filesystem::path& run_dir);
std::vector<LodRecord> load_lod(const std::filesystem::path& run_dir);

/// Resolves "final", "mrca", "lod:<index>" or "id:<id>" to a position in
/// the line of descent. Throws UsageError for unknown agents.
std::size_t select_agent(const std::vector<LodRecord>& lod, const std::string& selector);

struct ReplayOptions {
  std::filesystem::path run_dir;
  std::string agent = "final";
  int mapping = 0;
  std::filesystem::path out;  // empty: write to the log stream
};

/// Re-runs one mapping trial of a line-of-descent agent on the same streams
/// it was evaluated on during evolution and writes the step trace.
int cmd_replay(const ReplayOptions& options, std::ostream& log);

struct LodOptions {
  std::filesystem::path run_dir;
  std::filesystem::path out;  // empty: <run_dir>/lod_trace.csv
};

/// Re-derives the line of descent and MRCA from ancestry.csv.
int cmd_lod(const LodOptions& options, std::ostream& log);

struct AblateOptions {
  std::filesystem::path run_dir;
  std::string agent = "lod";  // "lod" = every lod_stride-th ancestor plus the final agent
  std::optional<std::size_t> repeats;
  std::filesystem::path out;  // empty: <run_dir>/ablation.csv
};

int cmd_ablate(const AblateOptions& options, std::ostream& log);

struct AnalyzeOptions {
  std::vector<std::filesystem::path> run_dirs;
  std::filesystem::path out;
  std::optional<std::size_t> repeats;
};

/// Writes fig2_performance.csv ... fig6_actions.csv over the given replicates.
int cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

}  // namespace fbmb
