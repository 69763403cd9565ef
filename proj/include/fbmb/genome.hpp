#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbmb/rng.hpp"

namespace fbmb {

enum class GateKind : std::uint8_t { Deterministic = 0, Probabilistic = 1, Feedback = 2 };

inline constexpr std::array<GateKind, 3> kGateKinds = {GateKind::Deterministic, GateKind::Probabilistic,
                                                       GateKind::Feedback};

std::string_view to_string(GateKind kind);

/// Which gate kinds have their start codon recognized. The three
/// experimental conditions are "d", "dp" and "dpf".
class GateKindSet {
 public:
  constexpr GateKindSet() = default;
  constexpr GateKindSet(bool deterministic, bool probabilistic, bool feedback)
      : bits_(static_cast<std::uint8_t>((deterministic ? 1 : 0) | (probabilistic ? 2 : 0) | (feedback ? 4 : 0))) {}

  static constexpr GateKindSet all() { return {true, true, true}; }
  /// Accepts kind letters ("dpf") or comma-separated names
  /// ("deterministic,feedback", "all"). Throws std::invalid_argument.
  static GateKindSet parse(std::string_view text);

  constexpr bool contains(GateKind kind) const { return (bits_ >> static_cast<unsigned>(kind)) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  std::string to_string() const;

  friend constexpr bool operator==(GateKindSet, GateKindSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Two-byte start codon; the second byte is the complement of the first.
struct StartCodon {
  std::uint8_t first;
  std::uint8_t second;
};

constexpr StartCodon start_codon(GateKind kind) {
  const auto first = static_cast<std::uint8_t>(42 + static_cast<int>(kind));
  return {first, static_cast<std::uint8_t>(~first)};
}

/// Byte layout of a gene payload (the bytes following the start codon).
namespace layout {
inline constexpr std::size_t kMaxArity = 4;
inline constexpr std::size_t kInputCount = 0;
inline constexpr std::size_t kOutputCount = 1;
inline constexpr std::size_t kInputAddresses = 2;
inline constexpr std::size_t kOutputAddresses = kInputAddresses + kMaxArity;
inline constexpr std::size_t kPlainTable = kOutputAddresses + kMaxArity;  // 10
inline constexpr std::size_t kPositiveSource = kPlainTable;
inline constexpr std::size_t kNegativeSource = kPlainTable + 1;
inline constexpr std::size_t kDepth = kPlainTable + 2;
inline constexpr std::size_t kDeltas = kPlainTable + 3;
inline constexpr std::size_t kFeedbackTable = kDeltas + 4;  // 17

constexpr std::size_t arity(std::uint8_t byte) { return 1 + byte % kMaxArity; }
constexpr std::size_t table_offset(GateKind kind) {
  return kind == GateKind::Feedback ? kFeedbackTable : kPlainTable;
}
/// Payload bytes required by a gene whose arity bytes are given.
constexpr std::size_t payload_size(GateKind kind, std::uint8_t inputs_byte, std::uint8_t outputs_byte) {
  const std::size_t rows = std::size_t{1} << arity(inputs_byte);
  const std::size_t cols = std::size_t{1} << arity(outputs_byte);
  return table_offset(kind) + (kind == GateKind::Deterministic ? rows : rows * cols);
}
}  // namespace layout

/// Variable-length byte string; the sole heritable material.
class Genome {
 public:
  Genome() = default;
  explicit Genome(std::vector<std::uint8_t> sites) : sites_(std::move(sites)) {}

  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return sites_[i]; }
  std::uint8_t& operator[](std::size_t i) { return sites_[i]; }
  /// Reads position i modulo the genome length.
  std::uint8_t circular(std::size_t i) const { return sites_[i % sites_.size()]; }

  std::span<const std::uint8_t> sites() const { return sites_; }
  std::vector<std::uint8_t>& mutable_sites() { return sites_; }

  std::string to_hex() const;
  /// Throws std::invalid_argument on odd length or non-hex characters.
  static Genome from_hex(std::string_view hex);

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  std::vector<std::uint8_t> sites_;
};

struct GeneSpan {
  GateKind kind;
  std::size_t start_index;  // position of the codon's first byte
  std::vector<std::uint8_t> payload;

  friend bool operator==(const GeneSpan&, const GeneSpan&) = default;
};

struct MutationParams {
  double point_rate = 0.003;
  double duplication_rate = 0.02;
  double deletion_rate = 0.02;
  std::size_t duplication_min = 128;
  std::size_t duplication_max = 512;
  std::size_t deletion_min = 128;
  std::size_t deletion_max = 255;
  std::size_t min_length = 1000;
  std::size_t max_length = 20000;
};

/// What one call to mutate() did.
struct MutationLog {
  std::size_t point_mutations = 0;
  bool duplicated = false;
  bool deleted = false;
  /// Sites resampled by point mutation, as indices into the parent.
  std::vector<std::size_t> point_sites;
};

class InvalidLength : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform random bytes with `n_codons` non-overlapping start codons written
/// in, cycling deterministic, probabilistic, feedback. Throws InvalidLength
/// when the codons plus one minimal payload do not fit.
Genome random_genome(std::size_t length, std::size_t n_codons, Rng& rng);

/// Point mutation, then duplication, then deletion. Structural steps that
/// would leave [min_length, max_length] are skipped.
Genome mutate(const Genome& parent, const MutationParams& params, Rng& rng, MutationLog* log = nullptr);

/// Scans left to right for start codons of the recognized kinds. Payloads
/// are read circularly past the genome end.
std::vector<GeneSpan> extract_genes(const Genome& genome, GateKindSet recognized = GateKindSet::all());

}  // namespace fbmb
