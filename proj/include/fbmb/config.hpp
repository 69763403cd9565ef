#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fbmb/evolution.hpp"

namespace fbmb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `key = value` lines grouped in [genome], [world], [evolution] and
/// [analysis] sections on top of the defaults. Unknown keys, malformed
/// values and failed validation throw ConfigError. Doubles also accept a
/// fraction such as `1/7`.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text form of every key; parse_config_text(serialize_config(c))
/// reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// One line per key with its default and meaning, for --help.
std::string config_reference();

}  // namespace fbmb
