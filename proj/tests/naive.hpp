#pragma once

// Deliberately naive reference implementations used as test oracles. They
// share no code with the library: faces are built from explicit coordinate
// subsets, occupancy is a std::set and search keys are plain vectors.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

namespace naive {

using State = std::vector<int>;  // entry i = vertex of ring i

inline std::vector<std::vector<int>> coordinate_subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = next; i < d; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Vertices of the face through v spanned by `coords`.
inline std::set<int> face_through(int v, const std::vector<int>& coords) {
  std::set<int> out{v};
  for (int c : coords) {
    std::set<int> grown = out;
    for (int u : out) grown.insert(u ^ (1 << c));
    out = grown;
  }
  return out;
}

/// (ring, to) pairs sorted by ring then destination.
inline std::vector<std::pair<int, int>> moves(const State& s, int d, int k) {
  std::set<int> occupied(s.begin(), s.end());
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    for (const auto& coords : coordinate_subsets(d, k)) {
      const auto face = face_through(s[i], coords);
      bool free = true;
      for (int u : face)
        if (u != s[i] && occupied.count(u)) free = false;
      if (!free) continue;
      for (int u : face)
        if (u != s[i]) out.insert({i, u});
    }
  }
  return {out.begin(), out.end()};
}

/// Distance from `from` to every state of its component.
inline std::map<State, int> distances(const State& from, int d, int k) {
  std::map<State, int> dist{{from, 0}};
  std::queue<State> q;
  q.push(from);
  while (!q.empty()) {
    State s = q.front();
    q.pop();
    for (auto [ring, to] : moves(s, d, k)) {
      State n = s;
      n[ring] = to;
      if (dist.emplace(n, dist[s] + 1).second) q.push(n);
    }
  }
  return dist;
}

inline std::optional<int> distance(const State& from, const State& to, int d, int k) {
  const auto dist = distances(from, d, k);
  auto it = dist.find(to);
  if (it == dist.end()) return std::nullopt;
  return it->second;
}

inline int popcount(unsigned x) {
  int n = 0;
  for (; x; x >>= 1) n += x & 1;
  return n;
}

}  // namespace naive
