#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmb/analysis.hpp"
#include "fbmb/evolution.hpp"
#include "fbmb/trial.hpp"

namespace fbmb {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

inline constexpr const char* kStatsHeader =
    "generation,max_W_log,mean_W_log,mean_goal_count,frac_zero_goal,mean_det_gates,mean_prob_gates,"
    "mean_fb_gates,frac_forward,frac_turn,frac_nothing";

/// Every text artifact starts with this comment line.
std::string seed_comment(std::uint64_t seed);

void write_stats_header(std::ostream& out, std::uint64_t seed);
void write_stats_row(std::ostream& out, const GenerationStats& s);
std::vector<GenerationStats> read_stats_csv(std::istream& in);

void write_ancestry_csv(std::ostream& out, const Archive& archive, std::uint64_t seed);
Archive read_ancestry_csv(std::istream& in);

void write_lod_jsonl(std::ostream& out, std::span<const LodRecord> records, std::uint64_t seed);
std::vector<LodRecord> read_lod_jsonl(std::istream& in);

/// `#id=<id> parent=<parent> generation=<g>` followed by the genome in hex.
void write_genome_snapshot(std::ostream& out, const Population& population, std::uint64_t seed);

struct SnapshotEntry {
  std::uint64_t id = 0;
  std::int64_t parent_id = -1;
  std::uint64_t generation = 0;
  Genome genome;
};
std::vector<SnapshotEntry> read_genome_snapshot(std::istream& in);

inline constexpr const char* kTraceHeader = "generation,mapping,step,sensors,outputs,action,row,col,heading,distance";
void write_trace_csv(std::ostream& out, std::span<const TraceStep> trace, std::uint64_t generation, int mapping,
                     std::uint64_t seed);

/// `frozen_goals` holds (generation, mean frozen goal count) where ablation was run.
void write_fig2_performance(std::ostream& out, std::span<const PerformancePoint> points,
                            std::span<const std::pair<std::uint64_t, double>> frozen_goals, std::uint64_t seed);
/// One row per table entry of every feedback gate after each mapping trial.
void write_fig3_tables(std::ostream& out, const MiReport& report, std::uint64_t seed);

struct AgentMi {
  std::string run;
  double performance = 0.0;
  double mean_delta = 0.0;
  double birth_mi = 0.0;
  double end_mi = 0.0;
};
void write_fig4_mi(std::ostream& out, std::span<const AgentMi> agents, std::span<const MiBin> bins,
                   std::uint64_t seed);

struct AgentGates {
  std::string run;
  std::size_t feedback = 0;
  std::size_t deterministic = 0;
  std::size_t probabilistic = 0;
};
void write_fig5_gates(std::ostream& out, std::span<const AgentGates> agents, std::uint64_t seed);
void write_fig6_actions(std::ostream& out, const ActionUsage& usage, std::uint64_t seed);

}  // namespace fbmb
