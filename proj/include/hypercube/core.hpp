#pragma once

// Hypercube geometry, ring configurations and k-face move legality.
//
// A vertex of Q^d is the integer whose d low bits are its binary label; two
// vertices are adjacent iff they differ in one bit. A k-face is the set of
// vertices obtained by fixing d-k coordinates and letting k coordinates vary.
// A ring may slide anywhere on a k-face when no other ring sits on that face.
//
// Occupancy is tracked as a 64-bit vertex mask, so dimensions are capped at
// kMaxDimension = 6.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypercube {

using Vertex = std::uint32_t;
using ColourId = std::uint32_t;
using VertexMask = std::uint64_t;

inline constexpr int kMaxDimension = 6;

enum class ErrorCode {
  invalid_dimension,
  vertex_out_of_range,
  duplicate_vertex,
  palette_mismatch,
  illegal_move,
  parse_error,
  fixture_corrupt,
  no_consistent_assignment,
  io_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::vertex_out_of_range: return "vertex-out-of-range";
    case ErrorCode::duplicate_vertex: return "duplicate-vertex";
    case ErrorCode::palette_mismatch: return "palette-mismatch";
    case ErrorCode::illegal_move: return "illegal-move";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::fixture_corrupt: return "fixture-corrupt";
    case ErrorCode::no_consistent_assignment: return "no-consistent-assignment";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

class PuzzleError : public std::runtime_error {
 public:
  PuzzleError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr VertexMask vertex_bit(Vertex v) { return VertexMask{1} << v; }

inline std::size_t vertex_count(int d) { return std::size_t{1} << d; }

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return out;
}

inline void check_dimensions(int d, int k) {
  if (d < 1 || d > kMaxDimension)
    throw PuzzleError(ErrorCode::invalid_dimension,
                      "d=" + std::to_string(d) + " outside [1, " + std::to_string(kMaxDimension) + "]");
  if (k < 1 || k > d)
    throw PuzzleError(ErrorCode::invalid_dimension,
                      "k=" + std::to_string(k) + " outside [1, d=" + std::to_string(d) + "]");
}

inline void check_vertex(Vertex v, int d) {
  if (v >= vertex_count(d))
    throw PuzzleError(ErrorCode::vertex_out_of_range,
                      "vertex " + std::to_string(v) + " not in Q^" + std::to_string(d));
}

/// Bitwise Hamming distance between two vertex labels.
inline int hamming_vertices(Vertex u, Vertex v) { return std::popcount(u ^ v); }

/// A k-dimensional face: all vertices reachable from `base` by flipping any
/// subset of the coordinates in `dims`. The base has every dims-bit cleared,
/// so each geometric face has one representation.
struct Face {
  Vertex base = 0;
  std::uint32_t dims = 0;  // coordinate mask, popcount == k

  int dimension() const { return std::popcount(dims); }

  bool contains(Vertex v) const { return (v & ~dims) == base; }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    out.reserve(std::size_t{1} << dimension());
    // Ascending enumeration of the submasks of dims.
    std::uint32_t sub = 0;
    do {
      out.push_back(base | sub);
      sub = (sub - dims) & dims;
    } while (sub != 0);
    return out;
  }

  VertexMask vertex_mask() const {
    VertexMask mask = 0;
    for (Vertex v : vertices()) mask |= vertex_bit(v);
    return mask;
  }

  friend bool operator==(const Face&, const Face&) = default;
};

/// Every canonical k-face of Q^d containing v, ordered by ascending dims mask.
inline std::vector<Face> faces_containing(Vertex v, int d, int k) {
  check_dimensions(d, k);
  check_vertex(v, d);
  std::vector<Face> out;
  out.reserve(binomial(d, k));
  const std::uint32_t all = (std::uint32_t{1} << d) - 1;
  for (std::uint32_t dims = 1; dims <= all; ++dims) {
    if (std::popcount(dims) != k) continue;
    out.push_back(Face{v & ~dims, dims});
  }
  return out;
}

/// Colour-indexed ring placement: entry i is the vertex holding ring i.
class Configuration {
 public:
  Configuration() = default;

  explicit Configuration(std::vector<Vertex> placement) : placement_(std::move(placement)) {
    for (std::size_t i = 0; i < placement_.size(); ++i) {
      const Vertex v = placement_[i];
      if (v >= 64)
        throw PuzzleError(ErrorCode::vertex_out_of_range, "vertex " + std::to_string(v));
      if (occupied_ & vertex_bit(v))
        throw PuzzleError(ErrorCode::duplicate_vertex,
                          "two rings on vertex " + std::to_string(v));
      occupied_ |= vertex_bit(v);
    }
  }

  std::size_t size() const { return placement_.size(); }
  Vertex operator[](ColourId colour) const { return placement_[colour]; }
  std::span<const Vertex> placement() const { return placement_; }
  VertexMask occupied() const { return occupied_; }
  bool is_occupied(Vertex v) const { return (occupied_ & vertex_bit(v)) != 0; }

  /// Ring index sitting on v, if any.
  std::optional<ColourId> ring_at(Vertex v) const {
    if (!is_occupied(v)) return std::nullopt;
    auto it = std::find(placement_.begin(), placement_.end(), v);
    return static_cast<ColourId>(it - placement_.begin());
  }

  /// Copy with ring `colour` moved to `to`. Caller guarantees `to` is free.
  Configuration relocated(ColourId colour, Vertex to) const {
    Configuration out = *this;
    out.occupied_ &= ~vertex_bit(out.placement_[colour]);
    out.occupied_ |= vertex_bit(to);
    out.placement_[colour] = to;
    return out;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.placement_ == b.placement_;
  }

 private:
  std::vector<Vertex> placement_;
  VertexMask occupied_ = 0;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Vertex v : c.placement()) {
      h ^= v + 1;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Move {
  ColourId colour = 0;
  Vertex from = 0;
  Vertex to = 0;

  Move reversed() const { return Move{colour, to, from}; }

  friend bool operator==(const Move&, const Move&) = default;
};

/// Count of colours whose ring sits on a different vertex in `c` than in `t`.
inline int mismatch_distance(const Configuration& c, const Configuration& t) {
  if (c.size() != t.size())
    throw PuzzleError(ErrorCode::palette_mismatch,
                      std::to_string(c.size()) + " rings vs " + std::to_string(t.size()));
  int out = 0;
  for (std::size_t i = 0; i < c.size(); ++i) out += c[i] != t[i];
  return out;
}

/// Precomputed face masks of Q^d for one k. faces_of(v) lists the vertex
/// masks of the C(d,k) faces through v, in faces_containing order.
class Hypercube {
 public:
  Hypercube(int d, int k) : d_(d), k_(k) {
    check_dimensions(d, k);
    faces_per_vertex_ = static_cast<std::size_t>(binomial(d, k));
    face_masks_.reserve(vertex_count(d) * faces_per_vertex_);
    for (Vertex v = 0; v < vertex_count(d); ++v)
      for (const Face& f : faces_containing(v, d, k)) face_masks_.push_back(f.vertex_mask());
  }

  int dimension() const { return d_; }
  int face_dimension() const { return k_; }
  std::size_t vertices() const { return vertex_count(d_); }
  std::size_t faces_per_vertex() const { return faces_per_vertex_; }

  std::span<const VertexMask> faces_of(Vertex v) const {
    return {face_masks_.data() + v * faces_per_vertex_, faces_per_vertex_};
  }

  /// True when the face through `v` with mask `face` holds no ring but the one at v.
  static bool is_free(VertexMask face, Vertex v, VertexMask occupied) {
    return (face & occupied) == vertex_bit(v);
  }

  /// Union of destinations reachable by ring at v through any free face.
  VertexMask destinations(Vertex v, VertexMask occupied) const {
    VertexMask out = 0;
    for (VertexMask face : faces_of(v))
      if (is_free(face, v, occupied)) out |= face;
    return out & ~vertex_bit(v);
  }

 private:
  int d_;
  int k_;
  std::size_t faces_per_vertex_ = 0;
  std::vector<VertexMask> face_masks_;
};

/// Calls fn(move) for every legal k-move out of c, ordered by colour then
/// destination. Destinations reachable through several free faces appear once.
template <typename Fn>
void for_each_move(const Configuration& c, const Hypercube& cube, Fn&& fn) {
  for (ColourId i = 0; i < c.size(); ++i) {
    const Vertex from = c[i];
    VertexMask dest = cube.destinations(from, c.occupied());
    while (dest) {
      const Vertex to = static_cast<Vertex>(std::countr_zero(dest));
      dest &= dest - 1;
      fn(Move{i, from, to});
    }
  }
}

inline std::vector<Move> legal_moves(const Configuration& c, const Hypercube& cube) {
  std::vector<Move> out;
  for_each_move(c, cube, [&](const Move& m) { out.push_back(m); });
  return out;
}

inline bool is_legal(const Configuration& c, const Move& m, const Hypercube& cube) {
  if (m.colour >= c.size() || c[m.colour] != m.from || m.from == m.to) return false;
  if (m.to >= cube.vertices()) return false;
  return (cube.destinations(m.from, c.occupied()) & vertex_bit(m.to)) != 0;
}

/// Applies a legal move; throws illegal-move otherwise.
inline Configuration apply_move(const Configuration& c, const Move& m, const Hypercube& cube) {
  if (m.colour >= c.size())
    throw PuzzleError(ErrorCode::illegal_move, "no ring with colour id " + std::to_string(m.colour));
  if (c[m.colour] != m.from)
    throw PuzzleError(ErrorCode::illegal_move,
                      "ring " + std::to_string(m.colour) + " is at " + std::to_string(c[m.colour]) +
                          ", not " + std::to_string(m.from));
  if (m.to < cube.vertices() && c.is_occupied(m.to) && m.to != m.from)
    throw PuzzleError(ErrorCode::illegal_move, "destination " + std::to_string(m.to) + " is occupied");
  if (!is_legal(c, m, cube))
    throw PuzzleError(ErrorCode::illegal_move,
                      "no free " + std::to_string(cube.face_dimension()) + "-face joins " +
                          std::to_string(m.from) + " and " + std::to_string(m.to));
  return c.relocated(m.colour, m.to);
}

/// The single move turning `a` into `b`, if they differ in exactly one ring.
inline std::optional<Move> move_between(const Configuration& a, const Configuration& b) {
  std::optional<Move> out;
  for (ColourId i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (out) return std::nullopt;
    out = Move{i, a[i], b[i]};
  }
  return out;
}

}  // namespace hypercube

template <>
struct std::hash<hypercube::Configuration> : hypercube::ConfigurationHash {};
