#include "fbmb/genome.hpp"

#include <algorithm>

namespace fbmb {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Deterministic:
      return "deterministic";
    case GateKind::Probabilistic:
      return "probabilistic";
    case GateKind::Feedback:
      return "feedback";
  }
  return "unknown";
}

GateKindSet GateKindSet::parse(std::string_view text) {
  bool d = false, p = false, f = false;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view token = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (token == "all") {
      d = p = f = true;
    } else if (token == "deterministic") {
      d = true;
    } else if (token == "probabilistic") {
      p = true;
    } else if (token == "feedback") {
      f = true;
    } else {
      for (char c : token) {
        switch (c) {
          case 'd':
            d = true;
            break;
          case 'p':
            p = true;
            break;
          case 'f':
            f = true;
            break;
          default:
            throw std::invalid_argument("unknown gate kind '" + std::string(token) + "'");
        }
      }
    }
  }
  GateKindSet set(d, p, f);
  if (set.empty()) throw std::invalid_argument("gate kind set is empty");
  return set;
}

std::string GateKindSet::to_string() const {
  std::string s;
  if (contains(GateKind::Deterministic)) s += 'd';
  if (contains(GateKind::Probabilistic)) s += 'p';
  if (contains(GateKind::Feedback)) s += 'f';
  return s;
}

std::string Genome::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(sites_.size() * 2);
  for (std::uint8_t b : sites_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Genome Genome::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex genome has odd length");
  std::vector<std::uint8_t> sites(hex.size() / 2);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex character in genome");
    sites[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return Genome(std::move(sites));
}

Genome random_genome(std::size_t length, std::size_t n_codons, Rng& rng) {
  if (length < 2 * n_codons + layout::kPlainTable + 2) {
    throw InvalidLength("genome of length " + std::to_string(length) + " cannot hold " +
                        std::to_string(n_codons) + " start codons");
  }
  std::vector<std::uint8_t> sites(length);
  for (auto& s : sites) s = rng.byte();

  std::vector<std::size_t> taken;
  taken.reserve(n_codons);
  for (std::size_t c = 0; c < n_codons; ++c) {
    std::size_t pos = 0;
    for (;;) {
      pos = rng.below(length - 1);
      const bool clash = std::any_of(taken.begin(), taken.end(), [pos](std::size_t t) {
        return pos + 1 >= t && pos <= t + 1;
      });
      if (!clash) break;
    }
    taken.push_back(pos);
    const StartCodon codon = start_codon(kGateKinds[c % kGateKinds.size()]);
    sites[pos] = codon.first;
    sites[pos + 1] = codon.second;
  }
  return Genome(std::move(sites));
}

Genome mutate(const Genome& parent, const MutationParams& params, Rng& rng, MutationLog* log) {
  std::vector<std::uint8_t> sites(parent.sites().begin(), parent.sites().end());

  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (rng.bernoulli(params.point_rate)) {
      sites[i] = rng.byte();
      if (log) {
        ++log->point_mutations;
        log->point_sites.push_back(i);
      }
    }
  }

  if (sites.size() < params.max_length && rng.bernoulli(params.duplication_rate)) {
    const auto len = static_cast<std::size_t>(
        rng.range(static_cast<std::int64_t>(params.duplication_min), static_cast<std::int64_t>(params.duplication_max)));
    const std::size_t from = rng.below(sites.size());
    const std::size_t to = rng.below(sites.size() + 1);
    if (sites.size() + len <= params.max_length) {
      std::vector<std::uint8_t> stretch(len);
      for (std::size_t k = 0; k < len; ++k) stretch[k] = sites[(from + k) % sites.size()];
      sites.insert(sites.begin() + static_cast<std::ptrdiff_t>(to), stretch.begin(), stretch.end());
      if (log) log->duplicated = true;
    }
  }

  if (sites.size() > params.min_length && rng.bernoulli(params.deletion_rate)) {
    const auto len = static_cast<std::size_t>(
        rng.range(static_cast<std::int64_t>(params.deletion_min), static_cast<std::int64_t>(params.deletion_max)));
    if (sites.size() >= params.min_length + len) {
      const std::size_t at = rng.below(sites.size() - len + 1);
      sites.erase(sites.begin() + static_cast<std::ptrdiff_t>(at),
                  sites.begin() + static_cast<std::ptrdiff_t>(at + len));
      if (log) log->deleted = true;
    }
  }
  return Genome(std::move(sites));
}

std::vector<GeneSpan> extract_genes(const Genome& genome, GateKindSet recognized) {
  std::vector<GeneSpan> genes;
  const std::size_t n = genome.size();
  if (n < 2) return genes;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::uint8_t a = genome[i];
    if (a < 42 || a > 44) continue;
    const auto kind = static_cast<GateKind>(a - 42);
    if (genome[i + 1] != start_codon(kind).second || !recognized.contains(kind)) continue;

    const std::size_t begin = i + 2;
    const std::size_t size = layout::payload_size(kind, genome.circular(begin + layout::kInputCount),
                                                  genome.circular(begin + layout::kOutputCount));
    std::vector<std::uint8_t> payload(size);
    for (std::size_t k = 0; k < size; ++k) payload[k] = genome.circular(begin + k);
    genes.push_back({kind, i, std::move(payload)});
  }
  return genes;
}

}  // namespace fbmb
