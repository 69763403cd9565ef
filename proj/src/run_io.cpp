#include "fbmb/run_io.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "json.hpp"

namespace fbmb {

using nlohmann::json;

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string seed_comment(std::uint64_t seed) { return "# seed=" + std::to_string(seed); }

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

template <typename T>
T parse_field(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) throw FormatError("bad field '" + text + "'");
  return value;
}

/// Yields data lines: skips '#' comments and the first non-comment line (the header).
template <typename Fn>
void for_each_data_line(std::istream& in, const std::string& expected_header, Fn&& fn) {
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != expected_header) throw FormatError("unexpected header: " + line);
      header_seen = true;
      continue;
    }
    fn(line);
  }
  if (!header_seen) throw FormatError("missing header line");
}

const char* action_name(Action a) {
  switch (a) {
    case Action::Forward:
      return "forward";
    case Action::TurnLeft:
      return "left";
    case Action::TurnRight:
      return "right";
    case Action::DoNothing:
      return "nothing";
  }
  return "?";
}

constexpr std::array<char, 4> kHeadingLetters = {'N', 'E', 'S', 'W'};

}  // namespace

void write_stats_header(std::ostream& out, std::uint64_t seed) {
  out << seed_comment(seed) << '\n' << kStatsHeader << '\n';
}

void write_stats_row(std::ostream& out, const GenerationStats& s) {
  out << s.generation << ',' << format_double(s.max_log_w) << ',' << format_double(s.mean_log_w) << ','
      << format_double(s.mean_goal_count) << ',' << format_double(s.frac_zero_goal) << ','
      << format_double(s.mean_deterministic_gates) << ',' << format_double(s.mean_probabilistic_gates) << ','
      << format_double(s.mean_feedback_gates) << ',' << format_double(s.frac_forward) << ','
      << format_double(s.frac_turn) << ',' << format_double(s.frac_nothing) << '\n';
}

std::vector<GenerationStats> read_stats_csv(std::istream& in) {
  std::vector<GenerationStats> rows;
  for_each_data_line(in, kStatsHeader, [&](const std::string& line) {
    const auto f = split(line, ',');
    if (f.size() != 11) throw FormatError("stats row has " + std::to_string(f.size()) + " fields");
    GenerationStats s;
    s.generation = parse_field<std::uint64_t>(f[0]);
    s.max_log_w = parse_field<double>(f[1]);
    s.mean_log_w = parse_field<double>(f[2]);
    s.mean_goal_count = parse_field<double>(f[3]);
    s.frac_zero_goal = parse_field<double>(f[4]);
    s.mean_deterministic_gates = parse_field<double>(f[5]);
    s.mean_probabilistic_gates = parse_field<double>(f[6]);
    s.mean_feedback_gates = parse_field<double>(f[7]);
    s.frac_forward = parse_field<double>(f[8]);
    s.frac_turn = parse_field<double>(f[9]);
    s.frac_nothing = parse_field<double>(f[10]);
    rows.push_back(s);
  });
  return rows;
}

namespace {
constexpr const char* kAncestryHeader = "id,parent_id,generation,log_w,mean_goals";
}

void write_ancestry_csv(std::ostream& out, const Archive& archive, std::uint64_t seed) {
  out << seed_comment(seed) << '\n' << kAncestryHeader << '\n';
  for (const AncestryRecord& r : archive) {
    out << r.id << ',' << r.parent_id << ',' << r.generation << ',' << format_double(r.log_w) << ','
        << format_double(r.mean_goals) << '\n';
  }
}

Archive read_ancestry_csv(std::istream& in) {
  Archive archive;
  for_each_data_line(in, kAncestryHeader, [&](const std::string& line) {
    const auto f = split(line, ',');
    if (f.size() != 5) throw FormatError("ancestry row has " + std::to_string(f.size()) + " fields");
    archive.push_back({parse_field<std::uint64_t>(f[0]), parse_field<std::int64_t>(f[1]),
                       parse_field<std::uint64_t>(f[2]), parse_field<double>(f[3]), parse_field<double>(f[4])});
  });
  return archive;
}

void write_lod_jsonl(std::ostream& out, std::span<const LodRecord> records, std::uint64_t seed) {
  for (const LodRecord& r : records) {
    const Summary& s = r.summary;
    json j;
    j["seed"] = seed;
    j["id"] = r.id;
    j["parent_id"] = r.parent_id;
    j["generation"] = r.generation;
    j["is_mrca"] = r.is_mrca;
    j["log_w"] = s.log_w;
    j["mean_goals"] = s.mean_goals;
    j["goals_per_mapping"] = s.goals_per_mapping;
    j["deterministic_gates"] = s.deterministic_gates;
    j["probabilistic_gates"] = s.probabilistic_gates;
    j["feedback_gates"] = s.feedback_gates;
    j["forward"] = s.actions.forward;
    j["turn"] = s.actions.turn;
    j["nothing"] = s.actions.nothing;
    j["genome"] = r.genome.to_hex();
    out << j.dump() << '\n';
  }
}

std::vector<LodRecord> read_lod_jsonl(std::istream& in) {
  std::vector<LodRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      LodRecord r;
      r.id = j.at("id").get<std::uint64_t>();
      r.parent_id = j.at("parent_id").get<std::int64_t>();
      r.generation = j.at("generation").get<std::uint64_t>();
      r.is_mrca = j.at("is_mrca").get<bool>();
      r.summary.log_w = j.at("log_w").get<double>();
      r.summary.mean_goals = j.at("mean_goals").get<double>();
      r.summary.goals_per_mapping = j.at("goals_per_mapping").get<std::array<int, Mapping::kCount>>();
      r.summary.deterministic_gates = j.at("deterministic_gates").get<std::size_t>();
      r.summary.probabilistic_gates = j.at("probabilistic_gates").get<std::size_t>();
      r.summary.feedback_gates = j.at("feedback_gates").get<std::size_t>();
      r.summary.actions.forward = j.at("forward").get<std::uint64_t>();
      r.summary.actions.turn = j.at("turn").get<std::uint64_t>();
      r.summary.actions.nothing = j.at("nothing").get<std::uint64_t>();
      r.genome = Genome::from_hex(j.at("genome").get<std::string>());
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad lod record: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("bad lod genome: ") + e.what());
    }
  }
  return records;
}

void write_genome_snapshot(std::ostream& out, const Population& population, std::uint64_t seed) {
  out << seed_comment(seed) << '\n';
  for (const auto& org : population) {
    out << "#id=" << org->id << " parent=" << org->parent_id << " generation=" << org->generation << '\n'
        << org->genome.to_hex() << '\n';
  }
}

std::vector<SnapshotEntry> read_genome_snapshot(std::istream& in) {
  std::vector<SnapshotEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("#id=", 0) != 0) continue;
    SnapshotEntry e;
    std::istringstream header(line.substr(1));
    std::string token;
    while (header >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw FormatError("bad snapshot header: " + line);
      const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
      if (key == "id") {
        e.id = parse_field<std::uint64_t>(value);
      } else if (key == "parent") {
        e.parent_id = parse_field<std::int64_t>(value);
      } else if (key == "generation") {
        e.generation = parse_field<std::uint64_t>(value);
      }
    }
    if (!std::getline(in, line)) throw FormatError("snapshot header without genome");
    try {
      e.genome = Genome::from_hex(line);
    } catch (const std::invalid_argument& err) {
      throw FormatError(err.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_trace_csv(std::ostream& out, std::span<const TraceStep> trace, std::uint64_t generation, int mapping,
                     std::uint64_t seed) {
  out << seed_comment(seed) << '\n' << kTraceHeader << '\n';
  for (const TraceStep& t : trace) {
    std::string sensors(4, '0');
    for (int k = 0; k < 4; ++k) sensors[static_cast<std::size_t>(k)] = (t.sensors >> k) & 1U ? '1' : '0';
    const std::string outputs = {(t.option >> 1) & 1U ? '1' : '0', t.option & 1U ? '1' : '0'};
    out << generation << ',' << mapping << ',' << t.step << ',' << sensors << ',' << outputs << ','
        << action_name(t.action) << ',' << t.agent.position.row << ',' << t.agent.position.col << ','
        << kHeadingLetters[static_cast<std::size_t>(t.agent.heading)] << ',' << t.distance << '\n';
  }
}

void write_fig2_performance(std::ostream& out, std::span<const PerformancePoint> points,
                            std::span<const std::pair<std::uint64_t, double>> frozen_goals, std::uint64_t seed) {
  out << seed_comment(seed) << '\n'
      << "generation,replicates,mean_goals,stderr_goals,mapping_variance,frac_zero_goal,mean_goals_frozen\n";
  for (const PerformancePoint& p : points) {
    std::string frozen;
    for (const auto& [generation, goals] : frozen_goals) {
      if (generation == p.generation) frozen = format_double(goals);
    }
    out << p.generation << ',' << p.replicates << ',' << format_double(p.mean_goals) << ','
        << (p.standard_error ? format_double(*p.standard_error) : "") << ',' << format_double(p.mapping_variance)
        << ',' << format_double(p.frac_zero_goal) << ',' << frozen << '\n';
  }
}

void write_fig3_tables(std::ostream& out, const MiReport& report, std::uint64_t seed) {
  out << seed_comment(seed) << '\n' << "mapping,gate,row,col,probability\n";
  for (std::size_t m = 0; m < report.end_tables.size(); ++m) {
    for (std::size_t g = 0; g < report.end_tables[m].size(); ++g) {
      const ProbabilityTable& t = report.end_tables[m][g];
      for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t o = 0; o < t.cols(); ++o) {
          out << m << ',' << g << ',' << i << ',' << o << ',' << format_double(t.at(i, o)) << '\n';
        }
      }
    }
  }
}

void write_fig4_mi(std::ostream& out, std::span<const AgentMi> agents, std::span<const MiBin> bins,
                   std::uint64_t seed) {
  out << seed_comment(seed) << '\n' << "record,run,bin,performance,birth_mi,end_mi,mean_delta,count,variance\n";
  for (const AgentMi& a : agents) {
    out << "agent," << a.run << ",," << format_double(a.performance) << ',' << format_double(a.birth_mi) << ','
        << format_double(a.end_mi) << ',' << format_double(a.mean_delta) << ",,\n";
  }
  for (const MiBin& b : bins) {
    out << "bin,," << b.bin << ",,,," << format_double(b.mean_delta) << ',' << b.count << ','
        << format_double(b.variance) << '\n';
  }
}

void write_fig5_gates(std::ostream& out, std::span<const AgentGates> agents, std::uint64_t seed) {
  out << seed_comment(seed) << '\n';
  std::vector<std::pair<double, double>> pairs;
  for (const AgentGates& a : agents) {
    pairs.emplace_back(static_cast<double>(a.feedback), static_cast<double>(a.deterministic));
  }
  try {
    out << "# pearson_r=" << format_double(pearson(pairs)) << '\n';
  } catch (const std::exception& e) {
    out << "# pearson_r=undefined (" << e.what() << ")\n";
  }
  out << "run,feedback_gates,deterministic_gates,probabilistic_gates\n";
  for (const AgentGates& a : agents) {
    out << a.run << ',' << a.feedback << ',' << a.deterministic << ',' << a.probabilistic << '\n';
  }
}

void write_fig6_actions(std::ostream& out, const ActionUsage& usage, std::uint64_t seed) {
  out << seed_comment(seed) << '\n'
      << "group,generation,replicates,frac_forward,frac_turn,frac_nothing,se_forward,se_turn,se_nothing\n";
  auto rows = [&](const char* group, const std::vector<ActionPoint>& points) {
    for (const ActionPoint& p : points) {
      out << group << ',' << p.generation << ',' << p.replicates << ',' << format_double(p.forward) << ','
          << format_double(p.turn) << ',' << format_double(p.nothing) << ',' << format_double(p.forward_se) << ','
          << format_double(p.turn_se) << ',' << format_double(p.nothing_se) << '\n';
    }
  };
  rows("feedback", usage.with_feedback);
  rows("no_feedback", usage.without_feedback);
}

}  // namespace fbmb
