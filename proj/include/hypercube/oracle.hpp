#pragma once

// Breadth-first ground truth over the configuration graph.
//
// The move relation is symmetric, so everything reachable from a start is one
// connected component. A target is reported unreachable only after that whole
// component has been exhausted.

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypercube/core.hpp"
#include "hypercube/puzzle.hpp"

namespace hypercube {

/// Packs a configuration into one 64-bit word, d bits per ring.
/// Search structures key on this; it needs d * L <= 64.
class StateCodec {
 public:
  StateCodec(int d, std::size_t rings) : bits_(d), rings_(rings) {
    if (static_cast<std::size_t>(d) * rings > 64)
      throw PuzzleError(ErrorCode::invalid_dimension,
                        "state of " + std::to_string(rings) + " rings in Q^" + std::to_string(d) +
                            " does not pack into 64 bits");
  }

  std::uint64_t encode(const Configuration& c) const {
    std::uint64_t key = 0;
    for (std::size_t i = rings_; i-- > 0;) key = (key << bits_) | c[static_cast<ColourId>(i)];
    return key;
  }

  Configuration decode(std::uint64_t key) const {
    std::vector<Vertex> placement(rings_);
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    for (std::size_t i = 0; i < rings_; ++i) {
      placement[i] = static_cast<Vertex>(key & mask);
      key >>= bits_;
    }
    return Configuration(std::move(placement));
  }

 private:
  int bits_;
  std::size_t rings_;
};

enum class SearchStatus { solved, unsolvable, budget_exceeded };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::solved: return "solved";
    case SearchStatus::unsolvable: return "unsolvable";
    case SearchStatus::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

struct BfsResult {
  SearchStatus status = SearchStatus::unsolvable;
  std::vector<Configuration> path;  // start .. target inclusive when solved
  std::size_t explored = 0;         // distinct configurations discovered

  std::optional<int> moves() const {
    if (status != SearchStatus::solved) return std::nullopt;
    return static_cast<int>(path.size()) - 1;
  }
};

/// Shortest path from p.start to p.target. "unsolvable" means the start's
/// whole component was enumerated without meeting the target.
inline BfsResult bfs_shortest_path(const Puzzle& p, std::size_t node_budget) {
  const Hypercube cube = p.cube();
  const StateCodec codec(p.d, p.rings());
  const std::uint64_t start = codec.encode(p.start);
  const std::uint64_t goal = codec.encode(p.target);

  BfsResult result;
  std::unordered_map<std::uint64_t, std::uint64_t> parent;
  parent.reserve(1024);
  parent.emplace(start, start);
  std::deque<std::uint64_t> frontier{start};
  bool found = start == goal;

  while (!found && !frontier.empty()) {
    const std::uint64_t key = frontier.front();
    frontier.pop_front();
    const Configuration c = codec.decode(key);
    for_each_move(c, cube, [&](const Move& m) {
      if (found) return;
      const std::uint64_t next = codec.encode(c.relocated(m.colour, m.to));
      if (!parent.emplace(next, key).second) return;
      if (next == goal) found = true;
      frontier.push_back(next);
    });
    if (!found && parent.size() > node_budget) {
      result.status = SearchStatus::budget_exceeded;
      result.explored = parent.size();
      return result;
    }
  }

  result.explored = parent.size();
  if (!found) return result;

  result.status = SearchStatus::solved;
  for (std::uint64_t key = goal;; key = parent.at(key)) {
    result.path.push_back(codec.decode(key));
    if (key == start) break;
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

/// BFS distance from `from` to every configuration of its component.
/// Returns nullopt when the component exceeds node_budget.
inline std::optional<std::unordered_map<std::uint64_t, int>> component_distances(
    const Configuration& from, const Hypercube& cube, const StateCodec& codec,
    std::size_t node_budget) {
  std::unordered_map<std::uint64_t, int> dist;
  const std::uint64_t origin = codec.encode(from);
  dist.emplace(origin, 0);
  std::deque<std::uint64_t> frontier{origin};
  while (!frontier.empty()) {
    const std::uint64_t key = frontier.front();
    frontier.pop_front();
    const int here = dist.at(key);
    const Configuration c = codec.decode(key);
    for_each_move(c, cube, [&](const Move& m) {
      const std::uint64_t next = codec.encode(c.relocated(m.colour, m.to));
      if (dist.emplace(next, here + 1).second) frontier.push_back(next);
    });
    if (dist.size() > node_budget) return std::nullopt;
  }
  return dist;
}

/// Converts a configuration path into the moves between consecutive entries.
inline std::vector<Move> moves_along(const std::vector<Configuration>& path) {
  std::vector<Move> out;
  for (std::size_t i = 1; i < path.size(); ++i) out.push_back(*move_between(path[i - 1], path[i]));
  return out;
}

/// Replays moves from `from`; nullopt if any move is illegal.
inline std::optional<Configuration> replay(const Configuration& from, const std::vector<Move>& moves,
                                           const Hypercube& cube) {
  Configuration c = from;
  for (const Move& m : moves) {
    if (!is_legal(c, m, cube)) return std::nullopt;
    c = c.relocated(m.colour, m.to);
  }
  return c;
}

}  // namespace hypercube
