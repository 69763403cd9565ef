#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "fbmb/world.hpp"

using namespace fbmb;

namespace {

// Plain breadth-first search as an independent distance oracle.
std::vector<int> bfs(const Grid& g, Position goal) {
  std::vector<int> d(static_cast<std::size_t>(g.rows() * g.cols()), kUnreachable);
  if (g.is_wall(goal)) return d;
  std::deque<Position> q{goal};
  d[g.index(goal)] = 0;
  while (!q.empty()) {
    const Position p = q.front();
    q.pop_front();
    for (int h = 0; h < 4; ++h) {
      const Position n = step_towards(p, static_cast<Heading>(h));
      if (g.is_wall(n) || d[g.index(n)] != kUnreachable) continue;
      d[g.index(n)] = d[g.index(p)] + 1;
      q.push_back(n);
    }
  }
  return d;
}

Grid random_grid(int size, double p, Rng& rng) {
  Grid g(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) g.set_wall({r, c}, rng.bernoulli(p));
  return g;
}

// 1 x n corridor inside a border
World corridor(int length) {
  Grid g(3, length + 2);
  for (int c = 0; c < length + 2; ++c) {
    g.set_wall({0, c}, true);
    g.set_wall({2, c}, true);
  }
  g.set_wall({1, 0}, true);
  g.set_wall({1, length + 1}, true);
  const Position goal{1, 1};
  auto dist = dijkstra_distances(g, goal);
  Rng rng(0);
  auto arrows = label_arrows(g, dist, rng);
  return World(g, goal, dist, arrows);
}

}  // namespace

TEST(Dijkstra, MatchesBreadthFirstSearch) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g = random_grid(16, 0.3, rng);
    const Position goal{static_cast<int>(rng.below(16)), static_cast<int>(rng.below(16))};
    ASSERT_EQ(dijkstra_distances(g, goal), bfs(g, goal)) << "trial " << trial;
  }
}

TEST(Dijkstra, CorridorDistances) {
  const World w = corridor(10);
  for (int c = 1; c <= 10; ++c) EXPECT_EQ(w.distance({1, c}), c - 1);
  EXPECT_EQ(w.distance({0, 3}), kUnreachable);
}

TEST(Dijkstra, EnclosedGoalReachesNothing) {
  Grid g(5, 5);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) g.set_wall({r, c}, !(r == 2 && c == 2) && !(r == 0 && c == 0));
  const auto d = dijkstra_distances(g, {2, 2});
  EXPECT_EQ(d[g.index({2, 2})], 0);
  EXPECT_EQ(d[g.index({0, 0})], kUnreachable);
}

TEST(GenerateWorld, ArrowsPointOneStepCloser) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const World w = generate_world({32, 1.0 / 7.0, 16}, rng);
    EXPECT_GE(w.count_at(16), 1u);
    EXPECT_EQ(w.distance(w.goal()), 0);
    for (int r = 0; r < 32; ++r) {
      for (int c = 0; c < 32; ++c) {
        const Position p{r, c};
        if (w.is_wall(p) || w.distance(p) == kUnreachable || w.distance(p) == 0) continue;
        const Position n = step_towards(p, w.arrow(p));
        ASSERT_FALSE(w.is_wall(n));
        ASSERT_EQ(w.distance(n), w.distance(p) - 1);
      }
    }
  }
}

TEST(GenerateWorld, BorderIsWalledAndInteriorRateMatches) {
  Rng rng(8);
  std::size_t walls = 0, interior = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const World w = generate_world({64, 1.0 / 7.0, 32}, rng);
    for (int i = 0; i < 64; ++i) {
      EXPECT_TRUE(w.is_wall({0, i}) && w.is_wall({63, i}) && w.is_wall({i, 0}) && w.is_wall({i, 63}));
    }
    for (int r = 1; r < 63; ++r) {
      for (int c = 1; c < 63; ++c) {
        walls += w.is_wall({r, c}) ? 1 : 0;
        ++interior;
      }
    }
  }
  EXPECT_NEAR(static_cast<double>(walls) / static_cast<double>(interior), 1.0 / 7.0, 0.01);
}

TEST(GenerateWorld, TiesAreBrokenUniformly) {
  // open 3x3 room, goal in a corner: the far corner has two closer neighbours
  Grid g(5, 5);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) g.set_wall({r, c}, r == 0 || c == 0 || r == 4 || c == 4);
  const auto d = dijkstra_distances(g, {1, 1});
  Rng rng(5);
  int north = 0;
  constexpr int kDraws = 4000;
  for (int i = 0; i < kDraws; ++i) north += label_arrows(g, d, rng)[g.index({3, 3})] == Heading::North ? 1 : 0;
  EXPECT_NEAR(north / static_cast<double>(kDraws), 0.5, 0.03);
}

TEST(Perceive, ExactlyOneBitAndRotationEquivariance) {
  const World w = corridor(6);  // every arrow points west
  const Position p{1, 4};
  EXPECT_EQ(perceive(w, {p, Heading::West}), 0b0001);   // forward
  EXPECT_EQ(perceive(w, {p, Heading::South}), 0b0010);  // right
  EXPECT_EQ(perceive(w, {p, Heading::East}), 0b0100);   // backward
  EXPECT_EQ(perceive(w, {p, Heading::North}), 0b1000);  // left
  Rng rng(2);
  const World big = generate_world({32, 1.0 / 7.0, 16}, rng);
  for (int r = 1; r < 31; ++r) {
    for (int c = 1; c < 31; ++c) {
      const Position q{r, c};
      if (big.is_wall(q) || big.distance(q) == kUnreachable || big.distance(q) == 0) continue;
      for (int h = 0; h < 4; ++h) {
        const std::uint8_t s = perceive(big, {q, static_cast<Heading>(h)});
        ASSERT_EQ(__builtin_popcount(s), 1);
        // turning the agent right rotates the relative arrow one step left
        const std::uint8_t turned = perceive(big, {q, rotate(static_cast<Heading>(h), 1)});
        ASSERT_EQ(turned, static_cast<std::uint8_t>(((s >> 1) | (s << 3)) & 0xF));
      }
    }
  }
}

TEST(ApplyAction, MovesTurnsAndBumps) {
  const World w = corridor(6);
  const AgentState a{{1, 3}, Heading::West};
  EXPECT_EQ(apply_action(w, a, Action::Forward).position, (Position{1, 2}));
  EXPECT_EQ(apply_action(w, a, Action::TurnLeft).heading, Heading::South);
  EXPECT_EQ(apply_action(w, a, Action::TurnRight).heading, Heading::North);
  EXPECT_EQ(apply_action(w, a, Action::DoNothing), a);
  const AgentState facing_wall{{1, 3}, Heading::North};
  EXPECT_EQ(apply_action(w, facing_wall, Action::Forward), facing_wall);
}

TEST(PlaceAgent, StartsAtTheRequestedDistance) {
  Rng rng(4);
  const World w = generate_world({32, 1.0 / 7.0, 16}, rng);
  std::set<int> headings;
  for (int i = 0; i < 200; ++i) {
    const AgentState a = place_agent(w, 16, rng);
    ASSERT_EQ(w.distance(a.position), 16);
    headings.insert(static_cast<int>(a.heading));
  }
  EXPECT_EQ(headings.size(), 4u);
}

TEST(Mapping, TwentyFourDistinctBijections) {
  std::set<std::array<Action, 4>> seen;
  for (int k = 0; k < Mapping::kCount; ++k) {
    const Mapping m(k);
    std::array<Action, 4> a{};
    std::set<Action> actions;
    for (std::uint8_t o = 0; o < 4; ++o) {
      a[o] = m.action_for(o);
      actions.insert(a[o]);
      EXPECT_EQ(m.option_for(a[o]), o);
    }
    EXPECT_EQ(actions.size(), 4u);
    seen.insert(a);
  }
  EXPECT_EQ(seen.size(), 24u);
  EXPECT_EQ(Mapping(0).action_for(0), Action::Forward);
  EXPECT_EQ(Mapping(0).action_for(3), Action::DoNothing);
  EXPECT_THROW(Mapping(24), std::out_of_range);
  EXPECT_THROW(Mapping(-1), std::out_of_range);
}

TEST(World, TextRendering) {
  EXPECT_EQ(corridor(3).to_text(), "#####\n#G<<#\n#####\n");
}
