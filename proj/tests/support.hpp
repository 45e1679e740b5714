#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hypercube/puzzle.hpp"
#include "naive.hpp"

namespace testing_support {

using namespace hypercube;

inline Puzzle fixture(const std::string& name) {
  return load_puzzle(std::string(HYPERCUBE_FIXTURE_DIR) + "/" + name + ".json");
}

inline naive::State to_state(const Configuration& c) { return {c.placement().begin(), c.placement().end()}; }

inline Configuration from_state(const naive::State& s) { return Configuration({s.begin(), s.end()}); }

/// L distinct vertices of Q^d, uniformly.
inline Configuration random_configuration(int d, std::size_t rings, std::mt19937_64& rng) {
  std::vector<Vertex> all(std::size_t{1} << d);
  std::iota(all.begin(), all.end(), Vertex{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(rings);
  return Configuration(all);
}

inline Puzzle make_puzzle(int d, int k, const Configuration& start, const Configuration& target) {
  Puzzle p;
  p.d = d;
  p.k = k;
  p.l = static_cast<int>((1u << d) - start.size());
  for (std::size_t i = 0; i < start.size(); ++i) p.colours.push_back("prgbyocmkn"[i]);
  p.start = start;
  p.target = target;
  p.validate();
  return p;
}

/// Target reached by a random walk from `from`, so it is solvable by construction.
inline Configuration random_walk(Configuration from, const Hypercube& cube, int steps, std::mt19937_64& rng) {
  for (int s = 0; s < steps; ++s) {
    const auto moves = legal_moves(from, cube);
    if (moves.empty()) break;
    const Move& m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    from = from.relocated(m.colour, m.to);
  }
  return from;
}

}  // namespace testing_support
