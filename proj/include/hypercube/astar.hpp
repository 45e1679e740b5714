#pragma once

// Exact shortest-solution search.
//
// f = g + h where g counts moves from the start and h is the sum over rings
// of ceil(hamming(vertex, target vertex) / k). One k-move flips at most k
// coordinates of one ring, so h never overestimates and changes by at most
// one per move. Closed nodes are therefore final and never reopened.

#include <cassert>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "hypercube/core.hpp"
#include "hypercube/cpu_time.hpp"
#include "hypercube/oracle.hpp"
#include "hypercube/puzzle.hpp"

namespace hypercube {

inline int heuristic(const Configuration& c, const Configuration& t, int k) {
  if (c.size() != t.size())
    throw PuzzleError(ErrorCode::palette_mismatch, "heuristic on configurations of different size");
  int out = 0;
  for (ColourId i = 0; i < c.size(); ++i) out += (hamming_vertices(c[i], t[i]) + k - 1) / k;
  return out;
}

struct AStarBudget {
  std::size_t max_generated = 50'000'000;
  double max_cpu_seconds = 3600.0;
};

struct AStarResult {
  SearchStatus status = SearchStatus::unsolvable;
  std::vector<Move> path;
  int moves = 0;
  std::size_t expanded = 0;
  std::size_t generated = 0;
  double elapsed = 0.0;  // thread CPU seconds
};

namespace detail {

struct AStarNode {
  std::uint64_t key;
  std::uint32_t parent;
  std::uint32_t g;
  std::uint32_t h;
  bool closed;
};

struct OpenEntry {
  std::uint32_t f;
  std::uint32_t h;
  std::uint64_t order;  // insertion counter, FIFO among equal (f, h)
  std::uint32_t node;
  std::uint32_t g;

  // std::priority_queue is a max-heap; "greater" means lower priority.
  friend bool operator<(const OpenEntry& a, const OpenEntry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.order > b.order;
  }
};

}  // namespace detail

inline AStarResult astar_solve(const Puzzle& p, const AStarBudget& budget = {}) {
  CpuStopwatch clock;
  const Hypercube cube = p.cube();
  const StateCodec codec(p.d, p.rings());
  const std::uint64_t goal = codec.encode(p.target);
  constexpr std::uint32_t kNoParent = UINT32_MAX;

  std::vector<detail::AStarNode> nodes;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::priority_queue<detail::OpenEntry> open;
  std::uint64_t order = 0;

  auto add_node = [&](std::uint64_t key, const Configuration& c, std::uint32_t parent, std::uint32_t g) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    const auto h = static_cast<std::uint32_t>(heuristic(c, p.target, p.k));
    nodes.push_back({key, parent, g, h, false});
    index.emplace(key, id);
    open.push({g + h, h, order++, id, g});
  };

  AStarResult result;
  add_node(codec.encode(p.start), p.start, kNoParent, 0);

  auto finish = [&](SearchStatus status) {
    result.status = status;
    result.generated = nodes.size();
    result.elapsed = clock.elapsed();
    return result;
  };

  while (!open.empty()) {
    const detail::OpenEntry top = open.top();
    open.pop();
    detail::AStarNode& node = nodes[top.node];
    if (node.closed || top.g != node.g) continue;  // stale entry

    if (node.key == goal) {
      std::vector<Configuration> chain;
      for (std::uint32_t id = top.node; id != kNoParent; id = nodes[id].parent)
        chain.push_back(codec.decode(nodes[id].key));
      std::reverse(chain.begin(), chain.end());
      result.path = moves_along(chain);
      result.moves = static_cast<int>(result.path.size());
      return finish(SearchStatus::solved);
    }

    node.closed = true;
    ++result.expanded;
    const std::uint32_t g_next = node.g + 1;
    const std::uint64_t key = node.key;
    const std::uint32_t self = top.node;
    const Configuration c = codec.decode(key);

    for_each_move(c, cube, [&](const Move& m) {
      const Configuration next = c.relocated(m.colour, m.to);
      const std::uint64_t next_key = codec.encode(next);
      auto it = index.find(next_key);
      if (it == index.end()) {
        add_node(next_key, next, self, g_next);
        return;
      }
      detail::AStarNode& known = nodes[it->second];
      if (g_next >= known.g) return;
      // A consistent heuristic never finds a shorter path to a closed node.
      assert(!known.closed);
      known.g = g_next;
      known.parent = self;
      open.push({g_next + known.h, known.h, order++, it->second, g_next});
    });

    if (nodes.size() > budget.max_generated) return finish(SearchStatus::budget_exceeded);
    if ((result.expanded & 255) == 0 && clock.elapsed() > budget.max_cpu_seconds)
      return finish(SearchStatus::budget_exceeded);
  }
  return finish(SearchStatus::unsolvable);
}

}  // namespace hypercube
