#include "fbmb/gates.hpp"

#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fbmb {

ProbabilityTable::ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), p_(std::move(entries)) {
  if (p_.size() != rows_ * cols_) throw std::invalid_argument("probability table size mismatch");
}

ProbabilityTable ProbabilityTable::uniform(std::size_t rows, std::size_t cols) {
  return {rows, cols, std::vector<double>(rows * cols, 1.0 / static_cast<double>(cols))};
}

std::uint32_t sample_row(std::span<const double> row, Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t o = 0; o < row.size(); ++o) {
    cumulative += row[o];
    if (u < cumulative) return static_cast<std::uint32_t>(o);
  }
  // Rounding left u above the accumulated mass; take the last non-zero entry.
  for (std::size_t o = row.size(); o-- > 0;) {
    if (row[o] > 0.0) return static_cast<std::uint32_t>(o);
  }
  return static_cast<std::uint32_t>(row.size() - 1);
}

std::uint32_t eval_probabilistic(const ProbabilityTable& table, std::uint32_t input, Rng& rng) {
  return sample_row(table.row(input), rng);
}

namespace {

double clip(double v) { return std::clamp(v, kMinProbability, kMaxProbability); }

// Sets the entries of `row` selected by `scalable` to clip(s * x) for the
// common factor s that makes them sum to `target`.
// Requires |scalable| * min <= target <= |scalable| * max.
void scale_clipped(std::span<double> row, std::uint32_t scalable, double target) {
  auto each = [](std::uint32_t bits, auto&& fn) {
    for (; bits != 0; bits &= bits - 1) fn(static_cast<std::size_t>(std::countr_zero(bits)));
  };
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (((scalable >> j) & 1U) && row[j] < 1e-300) row[j] = 1e-300;
  }

  // Raise entries that fall below the minimum and rescale the rest until
  // nothing new falls below; pinned entries stay pinned because each round
  // only shrinks the factor.
  std::uint32_t free = scalable;
  double mass = 0.0;
  each(free, [&](std::size_t j) { mass += row[j]; });
  double pinned = 0.0;
  for (;;) {
    const double s = (target - pinned) / mass;
    std::uint32_t low = 0;
    bool high = false;
    each(free, [&](std::size_t j) {
      const double v = row[j] * s;
      if (v < kMinProbability) {
        low |= 1U << j;
      } else if (v > kMaxProbability) {
        high = true;
      }
    });
    if (low == 0) {
      if (high) break;
      each(scalable, [&](std::size_t j) { row[j] = ((free >> j) & 1U) ? row[j] * s : kMinProbability; });
      return;
    }
    free &= ~low;
    each(low, [&](std::size_t j) {
      mass -= row[j];
      pinned += kMinProbability;
    });
    if (free == 0 || mass <= 0.0) break;
  }

  // Both bounds bind. The clipped sum is piecewise linear in s: entry j sits
  // at the minimum below min/x_j and at the maximum above max/x_j. Sweep
  // those kinks in increasing order until the sum reaches the target.
  std::array<double, 32> sorted;
  std::size_t m = 0;
  each(scalable, [&](std::size_t j) { sorted[m++] = row[j]; });
  std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m), std::greater<>());
  double base = static_cast<double>(m) * kMinProbability;
  double slope = 0.0;
  std::size_t next_free = 0;  // entries leave the minimum in decreasing x order
  std::size_t next_max = 0;   // and reach the maximum in the same order
  double s = kMaxProbability / sorted[m - 1];
  while (next_max < m) {
    const double s_free = next_free < m ? kMinProbability / sorted[next_free] : std::numeric_limits<double>::infinity();
    const double s_max = kMaxProbability / sorted[next_max];
    const double kink = std::min(s_free, s_max);
    if (base + slope * kink >= target) {
      s = slope > 0.0 ? (target - base) / slope : kink;
      break;
    }
    if (s_free <= s_max) {
      base -= kMinProbability;
      slope += sorted[next_free++];
    } else {
      base += kMaxProbability;
      slope -= sorted[next_max++];
    }
  }
  each(scalable, [&](std::size_t j) { row[j] = clip(row[j] * s); });
}

void renormalize_row(std::span<double> row, std::uint32_t targeted) {
  const std::size_t n = row.size();
  const std::uint32_t everything = n == 32 ? ~0U : (1U << n) - 1;
  const std::uint32_t untouched = everything & ~targeted;
  double fixed = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if ((targeted >> j) & 1U) {
      row[j] = clip(row[j]);
      fixed += row[j];
    }
  }
  const double need = 1.0 - fixed;
  double n_free = 0.0;
  for (std::uint32_t bits = untouched; bits != 0; bits &= bits - 1) n_free += 1.0;
  if (untouched == 0) {
    scale_clipped(row, everything, 1.0);
  } else if (need < n_free * kMinProbability || need > n_free * kMaxProbability) {
    // The untouched entries cannot absorb the change; pin them at the bound
    // they violate and fit the targeted entries into what is left.
    const double bound = need < n_free * kMinProbability ? kMinProbability : kMaxProbability;
    for (std::uint32_t bits = untouched; bits != 0; bits &= bits - 1) {
      row[static_cast<std::size_t>(std::countr_zero(bits))] = bound;
    }
    scale_clipped(row, targeted, 1.0 - n_free * bound);
  } else {
    scale_clipped(row, untouched, need);
  }
}

}  // namespace

void clamp_and_renormalize(std::span<double> row, std::span<const bool> targeted) {
  assert(row.size() == targeted.size() && row.size() >= 2 && row.size() <= 32);
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < row.size(); ++j) mask |= targeted[j] ? 1U << j : 0U;
  renormalize_row(row, mask);
}

double table_mutual_information(const ProbabilityTable& table) {
  const std::size_t rows = table.rows();
  const std::size_t cols = table.cols();
  if (rows == 0 || cols == 0) return 0.0;
  auto plogp = [](double p) { return p > 0.0 ? p * std::log2(p) : 0.0; };

  std::vector<double> marginal(cols, 0.0);
  double conditional = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t o = 0; o < cols; ++o) {
      marginal[o] += table.at(i, o);
      conditional -= plogp(table.at(i, o));
    }
  }
  conditional /= static_cast<double>(rows);
  double h_y = 0.0;
  for (double m : marginal) h_y -= plogp(m / static_cast<double>(rows));
  return std::max(0.0, h_y - conditional);
}

FeedbackGate::FeedbackGate(GateWiring wiring, ProbabilityTable table, std::uint8_t positive_source,
                           std::uint8_t negative_source, std::size_t depth, std::array<double, kMaxDepth> deltas)
    : wiring_(wiring),
      table_(table),
      birth_table_(std::move(table)),
      positive_source_(positive_source),
      negative_source_(negative_source),
      deltas_(deltas),
      buffer_(depth) {
  if (depth < 1 || depth > kMaxDepth) throw std::invalid_argument("feedback depth must be in [1, 4]");
}

std::uint32_t FeedbackGate::eval(std::uint32_t input, bool positive, bool negative, Rng& rng) {
  if (positive) apply_feedback(+1, rng);
  if (negative) apply_feedback(-1, rng);
  const std::uint32_t output = sample_row(table_.row(input), rng);
  buffer_.push({static_cast<std::uint8_t>(input), static_cast<std::uint8_t>(output)});
  return output;
}

void FeedbackGate::apply_feedback(int sign, Rng& rng) {
  if (frozen_ || buffer_.empty()) return;
  std::array<double, kMaxDepth> steps{};
  for (std::size_t k = 0; k < buffer_.size(); ++k) steps[k] = rng.uniform01() * deltas_[k];
  apply_feedback(sign, std::span<const double>(steps.data(), buffer_.size()));
}

void FeedbackGate::apply_feedback(int sign, std::span<const double> steps) {
  if (frozen_) return;
  const std::size_t count = std::min(steps.size(), buffer_.size());

  std::array<std::uint8_t, kMaxDepth> touched_rows{};
  std::array<std::uint32_t, kMaxDepth> targeted{};
  std::size_t n_touched = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const TableEntry e = buffer_[k];
    table_.at(e.row, e.col) += static_cast<double>(sign) * steps[k];
    std::size_t slot = 0;
    while (slot < n_touched && touched_rows[slot] != e.row) ++slot;
    if (slot == n_touched) touched_rows[n_touched++] = e.row;
    targeted[slot] |= 1U << e.col;
  }
  for (std::size_t slot = 0; slot < n_touched; ++slot) renormalize_row(table_.row(touched_rows[slot]), targeted[slot]);
}

GateKind kind_of(const Gate& gate) { return static_cast<GateKind>(gate.index()); }

const GateWiring& wiring_of(const Gate& gate) {
  return std::visit(
      [](const auto& g) -> const GateWiring& {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, FeedbackGate>) {
          return g.wiring();
        } else {
          return g.wiring;
        }
      },
      gate);
}

namespace {

ProbabilityTable decode_table(std::span<const std::uint8_t> bytes, std::size_t rows, std::size_t cols) {
  std::vector<double> p(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double total = 0.0;
    for (std::size_t o = 0; o < cols; ++o) total += bytes[i * cols + o] + 1.0;
    for (std::size_t o = 0; o < cols; ++o) p[i * cols + o] = (bytes[i * cols + o] + 1.0) / total;
  }
  return {rows, cols, std::move(p)};
}

}  // namespace

Gate decode_gate(const GeneSpan& span, std::size_t n_nodes) {
  const auto& p = span.payload;
  if (p.size() < layout::kPlainTable ||
      p.size() < layout::payload_size(span.kind, p[layout::kInputCount], p[layout::kOutputCount])) {
    throw std::invalid_argument("gene payload too short");
  }
  GateWiring w;
  w.n_inputs = static_cast<std::uint8_t>(layout::arity(p[layout::kInputCount]));
  w.n_outputs = static_cast<std::uint8_t>(layout::arity(p[layout::kOutputCount]));
  for (std::size_t k = 0; k < w.n_inputs; ++k) {
    w.inputs[k] = static_cast<std::uint8_t>(p[layout::kInputAddresses + k] % n_nodes);
  }
  for (std::size_t k = 0; k < w.n_outputs; ++k) {
    w.outputs[k] = static_cast<std::uint8_t>(p[layout::kOutputAddresses + k] % n_nodes);
  }
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  const std::span<const std::uint8_t> bytes(p);

  switch (span.kind) {
    case GateKind::Deterministic: {
      DeterministicGate g{w, std::vector<std::uint8_t>(rows)};
      for (std::size_t i = 0; i < rows; ++i) {
        g.table[i] = static_cast<std::uint8_t>(p[layout::kPlainTable + i] % cols);
      }
      return g;
    }
    case GateKind::Probabilistic:
      return ProbabilisticGate{w, decode_table(bytes.subspan(layout::kPlainTable), rows, cols)};
    case GateKind::Feedback: {
      std::array<double, FeedbackGate::kMaxDepth> deltas{};
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        deltas[k] = p[layout::kDeltas + k] / 255.0 * FeedbackGate::kMaxDelta;
      }
      return FeedbackGate(w, decode_table(bytes.subspan(layout::kFeedbackTable), rows, cols),
                          static_cast<std::uint8_t>(p[layout::kPositiveSource] % n_nodes),
                          static_cast<std::uint8_t>(p[layout::kNegativeSource] % n_nodes),
                          layout::arity(p[layout::kDepth]), deltas);
    }
  }
  throw std::invalid_argument("unknown gate kind");
}

namespace {

std::string join(std::span<const std::uint8_t> v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(v[k]);
  }
  return s;
}

std::string fixed9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

}  // namespace

std::string dump_table(const ProbabilityTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += "row " + std::to_string(i) + ":";
    for (double v : table.row(i)) out += " " + fixed9(v);
    out += '\n';
  }
  return out;
}

std::string dump_gate(const Gate& gate, std::size_t index) {
  const GateWiring& w = wiring_of(gate);
  std::string out = "gate " + std::to_string(index) + " " + std::string(to_string(kind_of(gate))) +
                    " in=" + join(w.input_nodes()) + " out=" + join(w.output_nodes());
  if (const auto* d = std::get_if<DeterministicGate>(&gate)) {
    out += '\n';
    for (std::size_t i = 0; i < d->table.size(); ++i) {
      out += "row " + std::to_string(i) + ": " + std::to_string(d->table[i]) + '\n';
    }
  } else if (const auto* pg = std::get_if<ProbabilisticGate>(&gate)) {
    out += '\n' + dump_table(pg->table);
  } else {
    const auto& f = std::get<FeedbackGate>(gate);
    out += " pos=" + std::to_string(f.positive_source()) + " neg=" + std::to_string(f.negative_source()) +
           " depth=" + std::to_string(f.depth()) + " deltas=";
    for (std::size_t k = 0; k < f.deltas().size(); ++k) out += (k ? "," : "") + fixed9(f.deltas()[k]);
    out += '\n' + dump_table(f.table());
  }
  return out;
}

}  // namespace fbmb
