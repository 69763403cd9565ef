#include "fbmb/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fbmb {

std::vector<int> dijkstra_distances(const Grid& grid, Position goal) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  std::vector<int> dist(static_cast<std::size_t>(rows * cols), kUnreachable);
  if (grid.is_wall(goal)) return dist;

  // Every edge costs 1, so the priority queue reduces to one bucket per
  // distance and only the current and next buckets are ever non-empty.
  std::vector<int> bucket{static_cast<int>(grid.index(goal))};
  std::vector<int> next;
  bucket.reserve(dist.size());
  next.reserve(dist.size());
  dist[grid.index(goal)] = 0;
  for (int d = 1; !bucket.empty(); ++d) {
    next.clear();
    auto relax = [&](int q) {
      const auto uq = static_cast<std::size_t>(q);
      if (dist[uq] == kUnreachable && !grid.wall_at(uq)) {
        dist[uq] = d;
        next.push_back(q);
      }
    };
    for (const int idx : bucket) {
      const int r = idx / cols;
      const int c = idx - r * cols;
      if (r > 0) relax(idx - cols);
      if (c < cols - 1) relax(idx + 1);
      if (r < rows - 1) relax(idx + cols);
      if (c > 0) relax(idx - 1);
    }
    bucket.swap(next);
  }
  return dist;
}

World::World(Grid grid, Position goal, std::vector<int> distance, std::vector<Heading> arrows)
    : grid_(std::move(grid)), goal_(goal), distance_(std::move(distance)), arrows_(std::move(arrows)) {}

const std::vector<Position>& World::tiles_at(int d) const {
  if (cached_distance_ != d) {
    cached_tiles_.clear();
    for (int r = 0; r < grid_.rows(); ++r) {
      for (int c = 0; c < grid_.cols(); ++c) {
        if (distance_[grid_.index({r, c})] == d) cached_tiles_.push_back({r, c});
      }
    }
    cached_distance_ = d;
  }
  return cached_tiles_;
}

std::size_t World::count_at(int d) const {
  return static_cast<std::size_t>(std::count(distance_.begin(), distance_.end(), d));
}

std::string World::to_text() const {
  static constexpr std::array<char, 4> kArrows = {'^', '>', 'v', '<'};
  std::string out;
  out.reserve(static_cast<std::size_t>(grid_.rows() * (grid_.cols() + 1)));
  for (int r = 0; r < grid_.rows(); ++r) {
    for (int c = 0; c < grid_.cols(); ++c) {
      const Position p{r, c};
      if (grid_.is_wall(p)) {
        out += '#';
      } else if (p == goal_) {
        out += 'G';
      } else if (distance(p) == kUnreachable) {
        out += '.';
      } else {
        out += kArrows[static_cast<std::size_t>(arrow(p))];
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<Heading> label_arrows(const Grid& grid, const std::vector<int>& distance, Rng& rng) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  std::vector<Heading> arrows(distance.size(), Heading::North);
  std::array<Heading, 4> closer{};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int idx = r * cols + c;
      const int d = distance[static_cast<std::size_t>(idx)];
      if (d == kUnreachable || d == 0) continue;
      // Walls carry kUnreachable, so they never match d - 1.
      auto closer_at = [&](int q) { return distance[static_cast<std::size_t>(q)] == d - 1; };
      std::size_t n = 0;
      if (r > 0 && closer_at(idx - cols)) closer[n++] = Heading::North;
      if (c < cols - 1 && closer_at(idx + 1)) closer[n++] = Heading::East;
      if (r < rows - 1 && closer_at(idx + cols)) closer[n++] = Heading::South;
      if (c > 0 && closer_at(idx - 1)) closer[n++] = Heading::West;
      arrows[static_cast<std::size_t>(idx)] = n == 1 ? closer[0] : closer[rng.below(n)];
    }
  }
  return arrows;
}

World generate_world(const WorldParams& params, Rng& rng) {
  if (params.size < 3) throw std::invalid_argument("world size must be at least 3");
  for (;;) {
    Grid grid(params.size, params.size);
    std::vector<Position> open;
    open.reserve(static_cast<std::size_t>(params.size * params.size));
    for (int r = 0; r < params.size; ++r) {
      for (int c = 0; c < params.size; ++c) {
        const bool border = r == 0 || c == 0 || r == params.size - 1 || c == params.size - 1;
        const bool wall = border || rng.bernoulli(params.wall_probability);
        grid.set_wall({r, c}, wall);
        if (!wall) open.push_back({r, c});
      }
    }
    if (open.empty()) continue;
    const Position goal = open[rng.below(open.size())];
    std::vector<int> distance = dijkstra_distances(grid, goal);
    if (std::find(distance.begin(), distance.end(), params.start_distance) == distance.end()) continue;
    std::vector<Heading> arrows = label_arrows(grid, distance, rng);
    return World(std::move(grid), goal, std::move(distance), std::move(arrows));
  }
}

std::uint8_t perceive(const World& world, const AgentState& agent) {
  const int relative = (static_cast<int>(world.arrow(agent.position)) - static_cast<int>(agent.heading) + 4) % 4;
  return static_cast<std::uint8_t>(1U << relative);
}

AgentState apply_action(const World& world, AgentState agent, Action action) {
  switch (action) {
    case Action::Forward: {
      const Position next = step_towards(agent.position, agent.heading);
      if (!world.is_wall(next)) agent.position = next;
      break;
    }
    case Action::TurnLeft:
      agent.heading = rotate(agent.heading, -1);
      break;
    case Action::TurnRight:
      agent.heading = rotate(agent.heading, 1);
      break;
    case Action::DoNothing:
      break;
  }
  return agent;
}

AgentState place_agent(const World& world, int start_distance, Rng& rng) {
  const auto& tiles = world.tiles_at(start_distance);
  if (tiles.empty()) throw std::logic_error("world has no tile at the start distance");
  AgentState agent;
  agent.position = tiles[rng.below(tiles.size())];
  agent.heading = static_cast<Heading>(rng.below(4));
  return agent;
}

Mapping::Mapping(int index) : index_(index) {
  if (index < 0 || index >= kCount) throw std::out_of_range("mapping index must be in [0, 24)");
  std::array<Action, 4> perm = {Action::Forward, Action::TurnLeft, Action::TurnRight, Action::DoNothing};
  for (int k = 0; k < index; ++k) std::next_permutation(perm.begin(), perm.end());
  actions_ = perm;
}

std::uint8_t Mapping::option_for(Action action) const {
  for (std::uint8_t o = 0; o < 4; ++o) {
    if (actions_[o] == action) return o;
  }
  return 0;
}

}  // namespace fbmb
