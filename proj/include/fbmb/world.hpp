#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fbmb/rng.hpp"

namespace fbmb {

/// Absolute directions; north is decreasing row.
enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

enum class Action : std::uint8_t { Forward = 0, TurnLeft = 1, TurnRight = 2, DoNothing = 3 };

struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(Position, Position) = default;
};

constexpr Position step_towards(Position p, Heading h) {
  constexpr std::array<int, 4> dr = {-1, 0, 1, 0};
  constexpr std::array<int, 4> dc = {0, 1, 0, -1};
  const auto k = static_cast<std::size_t>(h);
  return {p.row + dr[k], p.col + dc[k]};
}

constexpr Heading rotate(Heading h, int quarter_turns_clockwise) {
  return static_cast<Heading>(((static_cast<int>(h) + quarter_turns_clockwise) % 4 + 4) % 4);
}

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Rectangular wall map.
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols) : rows_(rows), cols_(cols), wall_(static_cast<std::size_t>(rows * cols), 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool contains(Position p) const { return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_; }
  std::size_t index(Position p) const { return static_cast<std::size_t>(p.row * cols_ + p.col); }
  bool is_wall(Position p) const { return !contains(p) || wall_[index(p)] != 0; }
  void set_wall(Position p, bool wall) { wall_[index(p)] = wall ? 1 : 0; }
  bool wall_at(std::size_t index) const { return wall_[index] != 0; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> wall_;
};

/// 4-connected unit-cost shortest path length from every tile to `goal`,
/// computed with Dijkstra's algorithm. Walls and disconnected tiles are
/// kUnreachable. Indexed by Grid::index.
std::vector<int> dijkstra_distances(const Grid& grid, Position goal);

struct WorldParams {
  int size = 64;
  double wall_probability = 1.0 / 7.0;
  int start_distance = 32;
};

/// Maze with its goal, distance field and per-tile arrows.
class World {
 public:
  World(Grid grid, Position goal, std::vector<int> distance, std::vector<Heading> arrows);

  const Grid& grid() const { return grid_; }
  Position goal() const { return goal_; }
  bool is_wall(Position p) const { return grid_.is_wall(p); }
  int distance(Position p) const { return distance_[grid_.index(p)]; }
  Heading arrow(Position p) const { return arrows_[grid_.index(p)]; }
  /// All open tiles whose distance equals d, row-major.
  const std::vector<Position>& tiles_at(int d) const;
  std::size_t count_at(int d) const;

  /// `#` wall, `G` goal, `^>v<` arrows, `.` for open tiles cut off from the goal.
  std::string to_text() const;

 private:
  Grid grid_;
  Position goal_;
  std::vector<int> distance_;
  std::vector<Heading> arrows_;
  mutable int cached_distance_ = -1;
  mutable std::vector<Position> cached_tiles_;
};

/// Assigns each reachable tile with distance > 0 an arrow towards a
/// neighbour one step closer, uniformly among ties.
std::vector<Heading> label_arrows(const Grid& grid, const std::vector<int>& distance, Rng& rng);

/// Border walls, interior walls with the given probability, a uniform goal,
/// Dijkstra labels. Regenerates until some tile sits at start_distance.
World generate_world(const WorldParams& params, Rng& rng);

struct AgentState {
  Position position;
  Heading heading = Heading::North;

  friend bool operator==(AgentState, AgentState) = default;
};

/// Sensor bit k is set for the arrow's direction relative to the heading:
/// 0 forward, 1 right, 2 backward, 3 left.
std::uint8_t perceive(const World& world, const AgentState& agent);

AgentState apply_action(const World& world, AgentState agent, Action action);

/// Uniform tile at start distance, uniform heading.
AgentState place_agent(const World& world, int start_distance, Rng& rng);

/// One of the 24 bijections from options (brain output pairs 00, 01, 10, 11)
/// to actions. Index k is the k-th permutation of
/// (Forward, TurnLeft, TurnRight, DoNothing) in lexicographic order.
class Mapping {
 public:
  static constexpr int kCount = 24;

  /// Throws std::out_of_range for indices outside [0, 24).
  explicit Mapping(int index);

  int index() const { return index_; }
  Action action_for(std::uint8_t option) const { return actions_[option & 3U]; }
  /// Option that triggers `action`.
  std::uint8_t option_for(Action action) const;

 private:
  int index_;
  std::array<Action, 4> actions_{};
};

}  // namespace fbmb
