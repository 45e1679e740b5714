#include <gtest/gtest.h>

#include <random>

#include "hypercube/astar.hpp"
#include "hypercube/oracle.hpp"
#include "support.hpp"

using namespace hypercube;
using namespace testing_support;

TEST(Properties, EveryMoveIsReversible) {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 5; ++d)
    for (int k = 1; k <= d; ++k) {
      const Hypercube cube(d, k);
      for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rings = 1 + rng() % ((1u << d) - 1);
        const Configuration c = random_configuration(d, rings, rng);
        for (const Move& m : legal_moves(c, cube)) {
          const Configuration next = apply_move(c, m, cube);
          ASSERT_TRUE(is_legal(next, m.reversed(), cube));
          ASSERT_EQ(apply_move(next, m.reversed(), cube), c);
        }
      }
    }
}

TEST(Properties, BranchingLowerBound) {
  std::mt19937_64 rng(41);
  for (int d = 2; d <= 5; ++d)
    for (int k = 1; k < d; ++k) {
      const Hypercube cube(d, k);
      for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t rings = 1 + rng() % ((1u << d) - 1);
        const auto moves = legal_moves(random_configuration(d, rings, rng), cube);
        if (!moves.empty()) {
          ASSERT_GE(moves.size(), (1u << k) - 1) << "d=" << d << " k=" << k;
        }
      }
    }
}

TEST(Properties, HeuristicAdmissibleAndMonotoneOnLevelZero) {
  const Puzzle base = fixture("d3-row1");
  for (int k = 1; k <= 2; ++k) {
    const Puzzle p = base.with_k(k);
    const Hypercube cube = p.cube();
    // Distances to the target from every configuration of its component (naive oracle).
    const auto dist = naive::distances(to_state(p.target), 3, k);
    ASSERT_TRUE(dist.count(to_state(p.start)));
    for (const auto& [s, d_true] : dist) {
      const Configuration c = from_state(s);
      const int h = heuristic(c, p.target, k);
      ASSERT_LE(h, d_true);
      for (const Move& m : legal_moves(c, cube)) ASSERT_LE(h, 1 + heuristic(apply_move(c, m, cube), p.target, k));
    }
  }
}

TEST(Properties, AStarMatchesBfsOnRandomSolvableInstances) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = trial < 40 ? 3 : 4;
    const int k = 1 + trial % 2;
    const std::size_t rings = d == 3 ? 4 : 5;
    const Configuration target = random_configuration(d, rings, rng);
    const Hypercube cube(d, k);
    const Configuration start = random_walk(target, cube, 30, rng);
    const Puzzle p = make_puzzle(d, k, start, target);
    const BfsResult b = bfs_shortest_path(p, 50'000'000);
    const AStarResult a = astar_solve(p);
    ASSERT_EQ(b.status, SearchStatus::solved);
    ASSERT_EQ(a.status, SearchStatus::solved);
    EXPECT_EQ(a.moves, *b.moves());
    EXPECT_EQ(replay(start, a.path, cube), target);
  }
}
