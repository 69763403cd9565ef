#include "fbmb/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fbmb {

namespace {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

template <typename T>
T parse_number(std::string_view text, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("bad value '" + std::string(text) + "' for " + key);
  return value;
}

double parse_double(std::string_view text, const std::string& key) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_number<double>(text.substr(0, slash), key);
    const double den = parse_number<double>(text.substr(slash + 1), key);
    if (den == 0.0) throw ConfigError("zero denominator for " + key);
    return num / den;
  }
  return parse_number<double>(text, key);
}

struct Key {
  const char* section;
  const char* name;
  const char* help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view, const std::string&)> set;
};

template <typename Member>
Key size_key(const char* section, const char* name, const char* help, Member member) {
  return {section, name, help, [member](const RunConfig& c) { return std::to_string(member(c)); },
          [member](RunConfig& c, std::string_view v, const std::string& k) {
            member(c) = parse_number<std::size_t>(v, k);
          }};
}

template <typename Member>
Key double_key(const char* section, const char* name, const char* help, Member member) {
  return {section, name, help, [member](const RunConfig& c) { return format_double(member(c)); },
          [member](RunConfig& c, std::string_view v, const std::string& k) { member(c) = parse_double(v, k); }};
}

template <typename Member>
Key int_key(const char* section, const char* name, const char* help, Member member) {
  return {section, name, help, [member](const RunConfig& c) { return std::to_string(member(c)); },
          [member](RunConfig& c, std::string_view v, const std::string& k) { member(c) = parse_number<int>(v, k); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      size_key("genome", "initial_length", "sites in a founder genome",
               [](auto& c) -> auto& { return c.initial_length; }),
      size_key("genome", "initial_codons", "start codons written into a founder genome",
               [](auto& c) -> auto& { return c.initial_codons; }),
      double_key("genome", "point_rate", "per-site point mutation probability",
                 [](auto& c) -> auto& { return c.mutation.point_rate; }),
      double_key("genome", "duplication_rate", "probability of one stretch duplication per reproduction",
                 [](auto& c) -> auto& { return c.mutation.duplication_rate; }),
      double_key("genome", "deletion_rate", "probability of one stretch deletion per reproduction",
                 [](auto& c) -> auto& { return c.mutation.deletion_rate; }),
      size_key("genome", "duplication_min", "shortest duplicated stretch",
               [](auto& c) -> auto& { return c.mutation.duplication_min; }),
      size_key("genome", "duplication_max", "longest duplicated stretch",
               [](auto& c) -> auto& { return c.mutation.duplication_max; }),
      size_key("genome", "deletion_min", "shortest deleted stretch",
               [](auto& c) -> auto& { return c.mutation.deletion_min; }),
      size_key("genome", "deletion_max", "longest deleted stretch",
               [](auto& c) -> auto& { return c.mutation.deletion_max; }),
      size_key("genome", "min_length", "genome length floor",
               [](auto& c) -> auto& { return c.mutation.min_length; }),
      size_key("genome", "max_length", "genome length ceiling",
               [](auto& c) -> auto& { return c.mutation.max_length; }),
      int_key("world", "size", "side length of the square world, border included",
              [](auto& c) -> auto& { return c.trial.world.size; }),
      double_key("world", "wall_probability", "probability that an interior tile is a wall",
                 [](auto& c) -> auto& { return c.trial.world.wall_probability; }),
      int_key("world", "start_distance", "goal distance of every start tile",
              [](auto& c) -> auto& { return c.trial.world.start_distance; }),
      int_key("world", "steps", "world updates per mapping trial", [](auto& c) -> auto& { return c.trial.steps; }),
      double_key("world", "goal_bonus", "fitness bonus per goal reached (not a published value)",
                 [](auto& c) -> auto& { return c.trial.goal_bonus; }),
      size_key("evolution", "population", "individuals per generation (not a published value)",
               [](auto& c) -> auto& { return c.population; }),
      size_key("evolution", "generations", "generations to evaluate, founders included",
               [](auto& c) -> auto& { return c.generations; }),
      size_key("evolution", "tournament_size", "individuals drawn per tournament",
               [](auto& c) -> auto& { return c.tournament_size; }),
      {"evolution", "gates", "recognized gate kinds: d, dp or dpf",
       [](const RunConfig& c) { return c.gates.to_string(); },
       [](RunConfig& c, std::string_view v, const std::string& k) {
         try {
           c.gates = GateKindSet::parse(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"evolution", "seed", "master seed for every random stream",
       [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, std::string_view v, const std::string& k) { c.seed = parse_number<std::uint64_t>(v, k); }},
      size_key("evolution", "snapshot_interval", "generations between genome snapshots",
               [](auto& c) -> auto& { return c.snapshot_interval; }),
      size_key("analysis", "repeats", "re-evaluations averaged per agent in ablation and MI reports",
               [](auto& c) -> auto& { return c.analysis_repeats; }),
      size_key("analysis", "lod_stride", "generations between line-of-descent agents re-evaluated by analyze",
               [](auto& c) -> auto& { return c.analysis_stride; }),
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [name, value] : body) {
      const std::string full = section + "." + name;
      const Key* key = nullptr;
      for (const Key& k : keys()) {
        if (section == k.section && name == k.name) key = &k;
      }
      if (!key) throw ConfigError("unknown config key " + full);
      key->set(config, trim(value.data()), full);
    }
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

RunConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string_view current;
  for (const Key& k : keys()) {
    if (current != k.section) {
      if (!current.empty()) out += '\n';
      out += "[" + std::string(k.section) + "]\n";
      current = k.section;
    }
    out += std::string(k.name) + " = " + k.get(config) + "\n";
  }
  return out;
}

std::string config_reference() {
  const RunConfig defaults;
  std::string out = "Config keys (section.key = default: meaning):\n";
  for (const Key& k : keys()) {
    out += "  " + std::string(k.section) + "." + k.name + " = " + k.get(defaults) + ": " + k.help + "\n";
  }
  return out;
}

}  // namespace fbmb
