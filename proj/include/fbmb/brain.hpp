#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fbmb/gates.hpp"
#include "fbmb/genome.hpp"
#include "fbmb/rng.hpp"

namespace fbmb {

/// Markov Brain: 16 binary nodes (0-3 sensors, 4-5 outputs, 6-15 hidden)
/// updated once per world step by an ordered list of gates.
class Brain {
 public:
  static constexpr std::size_t kSensors = 4;
  static constexpr std::size_t kOutputs = 2;
  static constexpr std::size_t kHidden = 10;
  static constexpr std::uint8_t kFirstOutput = 4;
  static_assert(kSensors + kOutputs + kHidden == kBrainNodes);

  Brain() = default;
  explicit Brain(std::vector<Gate> gates) : gates_(std::move(gates)) {}

  /// Decodes every recognized gene in genome order.
  static Brain build(const Genome& genome, GateKindSet recognized = GateKindSet::all());

  /// One network update. `sensors` bit k is written to node k; returns the
  /// 2-bit option formed by nodes 4 and 5 (node 4 is the high bit).
  std::uint8_t step(std::uint8_t sensors, Rng& rng);

  /// Zeroes the nodes and restores every feedback gate to its birth state.
  void reset();
  /// Disables table updates on every feedback gate.
  void freeze_feedback();

  std::uint16_t nodes() const { return nodes_; }
  bool node(std::size_t i) const { return (nodes_ >> i) & 1U; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t count(GateKind kind) const;

  /// Current tables of the feedback gates, in gate order.
  std::vector<ProbabilityTable> feedback_tables() const;
  std::vector<ProbabilityTable> feedback_birth_tables() const;

  friend bool operator==(const Brain&, const Brain&) = default;

 private:
  std::vector<Gate> gates_;
  std::uint16_t nodes_ = 0;
};

}  // namespace fbmb
