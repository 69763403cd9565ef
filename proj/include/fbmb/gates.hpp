#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fbmb/genome.hpp"
#include "fbmb/rng.hpp"

namespace fbmb {

inline constexpr std::size_t kBrainNodes = 16;

/// Node addresses a gate reads from and writes to. Input k supplies bit k
/// of the input pattern; bit k of the output pattern goes to output k.
struct GateWiring {
  std::array<std::uint8_t, 4> inputs{};
  std::array<std::uint8_t, 4> outputs{};
  std::uint8_t n_inputs = 1;
  std::uint8_t n_outputs = 1;

  std::span<const std::uint8_t> input_nodes() const { return {inputs.data(), n_inputs}; }
  std::span<const std::uint8_t> output_nodes() const { return {outputs.data(), n_outputs}; }
  std::size_t rows() const { return std::size_t{1} << n_inputs; }
  std::size_t cols() const { return std::size_t{1} << n_outputs; }

  /// Gathers the input pattern from a 16-bit node image.
  std::uint32_t read(std::uint16_t nodes) const {
    std::uint32_t pattern = 0;
    for (std::uint8_t k = 0; k < n_inputs; ++k) pattern |= ((nodes >> inputs[k]) & 1U) << k;
    return pattern;
  }
  /// Scatters an output pattern as a node mask (to be OR-ed).
  std::uint16_t write(std::uint32_t pattern) const {
    std::uint16_t mask = 0;
    for (std::uint8_t k = 0; k < n_outputs; ++k) {
      if ((pattern >> k) & 1U) mask |= static_cast<std::uint16_t>(1U << outputs[k]);
    }
    return mask;
  }

  friend bool operator==(const GateWiring&, const GateWiring&) = default;
};

/// Row-stochastic matrix P[i][o]: probability of output pattern o given
/// input pattern i.
class ProbabilityTable {
 public:
  ProbabilityTable() = default;
  ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> entries);
  static ProbabilityTable uniform(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t i, std::size_t o) const { return p_[i * cols_ + o]; }
  double& at(std::size_t i, std::size_t o) { return p_[i * cols_ + o]; }
  std::span<const double> row(std::size_t i) const { return {p_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {p_.data() + i * cols_, cols_}; }
  std::span<const double> entries() const { return p_; }

  friend bool operator==(const ProbabilityTable&, const ProbabilityTable&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

/// Inverse-CDF sample of one column from a probability row using a single
/// uniform draw.
std::uint32_t sample_row(std::span<const double> row, Rng& rng);

std::uint32_t eval_probabilistic(const ProbabilityTable& table, std::uint32_t input, Rng& rng);

/// Bounds every entry of a row touched by feedback must respect.
inline constexpr double kMinProbability = 0.01;
inline constexpr double kMaxProbability = 0.99;

/// Clamps the targeted entries of `row` to [0.01, 0.99] and rescales the
/// rest so that the row sums to one with every entry inside the bounds.
/// Untouched entries are scaled by a common factor and clipped to the
/// bounds; if the targeted entries leave no feasible mass for the rest, the
/// whole row is rescaled that way instead.
void clamp_and_renormalize(std::span<double> row, std::span<const bool> targeted);

/// I(X;Y) in bits for X uniform over rows and Y | X = i given by row i.
double table_mutual_information(const ProbabilityTable& table);

struct DeterministicGate {
  GateWiring wiring;
  std::vector<std::uint8_t> table;  // output pattern per input pattern

  std::uint32_t eval(std::uint32_t input) const { return table[input]; }

  friend bool operator==(const DeterministicGate&, const DeterministicGate&) = default;
};

struct ProbabilisticGate {
  GateWiring wiring;
  ProbabilityTable table;

  std::uint32_t eval(std::uint32_t input, Rng& rng) const { return eval_probabilistic(table, input, rng); }

  friend bool operator==(const ProbabilisticGate&, const ProbabilisticGate&) = default;
};

/// (row, column) of a table entry that produced an output.
struct TableEntry {
  std::uint8_t row = 0;
  std::uint8_t col = 0;

  friend bool operator==(TableEntry, TableEntry) = default;
};

/// FIFO of the most recent table entries used, newest first, holding at
/// most `depth` entries.
class FeedbackBuffer {
 public:
  explicit FeedbackBuffer(std::size_t depth = 1) : depth_(depth) {}

  std::size_t depth() const { return depth_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  /// k = 0 is the newest entry.
  TableEntry operator[](std::size_t k) const { return slots_[k]; }

  void push(TableEntry e) {
    for (std::size_t k = std::min(size_, depth_ - 1); k > 0; --k) slots_[k] = slots_[k - 1];
    slots_[0] = e;
    if (size_ < depth_) ++size_;
  }
  void clear() { size_ = 0; }

  friend bool operator==(const FeedbackBuffer& a, const FeedbackBuffer& b) {
    if (a.depth_ != b.depth_ || a.size_ != b.size_) return false;
    for (std::size_t k = 0; k < a.size_; ++k) {
      if (!(a.slots_[k] == b.slots_[k])) return false;
    }
    return true;
  }

 private:
  std::array<TableEntry, 4> slots_{};
  std::size_t depth_;
  std::size_t size_ = 0;
};

/// Probabilistic gate whose table is reinforced or weakened in-lifetime by
/// two feedback input bits. The birth table is kept so reset() can restore it.
class FeedbackGate {
 public:
  static constexpr std::size_t kMaxDepth = 4;
  static constexpr double kMaxDelta = 0.5;

  FeedbackGate(GateWiring wiring, ProbabilityTable table, std::uint8_t positive_source,
               std::uint8_t negative_source, std::size_t depth, std::array<double, kMaxDepth> deltas);

  const GateWiring& wiring() const { return wiring_; }
  const ProbabilityTable& table() const { return table_; }
  const ProbabilityTable& birth_table() const { return birth_table_; }
  const FeedbackBuffer& buffer() const { return buffer_; }
  std::uint8_t positive_source() const { return positive_source_; }
  std::uint8_t negative_source() const { return negative_source_; }
  std::size_t depth() const { return buffer_.depth(); }
  const std::array<double, kMaxDepth>& deltas() const { return deltas_; }
  bool frozen() const { return frozen_; }

  /// Applies pending feedback (positive first), samples an output, and
  /// records the entry used.
  std::uint32_t eval(std::uint32_t input, bool positive, bool negative, Rng& rng);

  /// For each buffered entry k (newest first) moves P by sign * U[0, delta_k]
  /// and renormalizes each touched row once. No-op and no draws when frozen.
  void apply_feedback(int sign, Rng& rng);
  /// Same update with explicit step sizes, one per buffered entry.
  void apply_feedback(int sign, std::span<const double> steps);

  /// A copy with apply_feedback disabled.
  FeedbackGate frozen_copy() const {
    FeedbackGate g = *this;
    g.frozen_ = true;
    return g;
  }
  void freeze() { frozen_ = true; }

  /// Restores the birth table and empties the buffer.
  void reset() {
    table_ = birth_table_;
    buffer_.clear();
  }

  friend bool operator==(const FeedbackGate&, const FeedbackGate&) = default;

 private:
  GateWiring wiring_;
  ProbabilityTable table_;
  ProbabilityTable birth_table_;
  std::uint8_t positive_source_;
  std::uint8_t negative_source_;
  std::array<double, kMaxDepth> deltas_;
  FeedbackBuffer buffer_;
  bool frozen_ = false;
};

inline FeedbackGate freeze(const FeedbackGate& gate) { return gate.frozen_copy(); }

using Gate = std::variant<DeterministicGate, ProbabilisticGate, FeedbackGate>;

GateKind kind_of(const Gate& gate);
const GateWiring& wiring_of(const Gate& gate);

/// Decodes one gene payload into a gate addressing `n_nodes` nodes.
Gate decode_gate(const GeneSpan& span, std::size_t n_nodes = kBrainNodes);

/// Text record for one gate: a header line with kind and wiring, then one
/// line per table row (probabilities with 9 decimals).
std::string dump_gate(const Gate& gate, std::size_t index);
std::string dump_table(const ProbabilityTable& table);

}  // namespace fbmb
