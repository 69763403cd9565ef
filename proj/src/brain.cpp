#include "fbmb/brain.hpp"

namespace fbmb {

Brain Brain::build(const Genome& genome, GateKindSet recognized) {
  std::vector<Gate> gates;
  for (const GeneSpan& span : extract_genes(genome, recognized)) gates.push_back(decode_gate(span));
  return Brain(std::move(gates));
}

std::uint8_t Brain::step(std::uint8_t sensors, Rng& rng) {
  const auto read = static_cast<std::uint16_t>((nodes_ & ~0xFU) | (sensors & 0xFU));
  std::uint16_t next = 0;
  for (Gate& gate : gates_) {
    switch (gate.index()) {
      case 0: {
        const auto& g = *std::get_if<DeterministicGate>(&gate);
        next |= g.wiring.write(g.eval(g.wiring.read(read)));
        break;
      }
      case 1: {
        const auto& g = *std::get_if<ProbabilisticGate>(&gate);
        next |= g.wiring.write(g.eval(g.wiring.read(read), rng));
        break;
      }
      default: {
        auto& g = *std::get_if<FeedbackGate>(&gate);
        const bool positive = (read >> g.positive_source()) & 1U;
        const bool negative = (read >> g.negative_source()) & 1U;
        next |= g.wiring().write(g.eval(g.wiring().read(read), positive, negative, rng));
        break;
      }
    }
  }
  nodes_ = next;
  return static_cast<std::uint8_t>(((nodes_ >> kFirstOutput) & 1U) << 1 | ((nodes_ >> (kFirstOutput + 1)) & 1U));
}

void Brain::reset() {
  nodes_ = 0;
  for (Gate& gate : gates_) {
    if (auto* f = std::get_if<FeedbackGate>(&gate)) f->reset();
  }
}

void Brain::freeze_feedback() {
  for (Gate& gate : gates_) {
    if (auto* f = std::get_if<FeedbackGate>(&gate)) f->freeze();
  }
}

std::size_t Brain::count(GateKind kind) const {
  std::size_t n = 0;
  for (const Gate& gate : gates_) n += kind_of(gate) == kind ? 1 : 0;
  return n;
}

std::vector<ProbabilityTable> Brain::feedback_tables() const {
  std::vector<ProbabilityTable> tables;
  for (const Gate& gate : gates_) {
    if (const auto* f = std::get_if<FeedbackGate>(&gate)) tables.push_back(f->table());
  }
  return tables;
}

std::vector<ProbabilityTable> Brain::feedback_birth_tables() const {
  std::vector<ProbabilityTable> tables;
  for (const Gate& gate : gates_) {
    if (const auto* f = std::get_if<FeedbackGate>(&gate)) tables.push_back(f->birth_table());
  }
  return tables;
}

}  // namespace fbmb
