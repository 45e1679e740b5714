#pragma once

// Puzzle definition and its on-disk JSON format.
//
//   {
//     "d": 3,
//     "k": 2,
//     "l": 4,
//     "colours": ["p", "r", "g", "b"],
//     "start": [[1, "p"], [4, "r"], [6, "g"], [5, "b"]],
//     "target": [[1, "p"], [5, "r"], [4, "g"], [6, "b"]],
//     "name": "d3-row1",
//     "level": "0"
//   }
//
// `colours` fixes the colour ids; `start`/`target` pairs may come in any order
// and are reindexed by colour. The serializer always emits pairs in colour-id
// order, so parse(serialize(p)) round-trips byte for byte.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercube/core.hpp"

namespace hypercube {

/// Display codes in legend order; 'w' (white) is the unlabelled vertex colour.
inline constexpr std::string_view kLegend = "prgbyo";

struct Puzzle {
  int d = 3;
  int k = 1;
  int l = 4;
  std::vector<char> colours;
  Configuration start;
  Configuration target;
  std::string name;
  std::optional<std::string> level;

  std::size_t rings() const { return colours.size(); }

  Hypercube cube() const { return Hypercube(d, k); }

  /// Same puzzle played under a different face dimension.
  Puzzle with_k(int new_k) const {
    Puzzle out = *this;
    out.k = new_k;
    out.validate();
    return out;
  }

  std::optional<ColourId> colour_id(char code) const {
    for (std::size_t i = 0; i < colours.size(); ++i)
      if (colours[i] == code) return static_cast<ColourId>(i);
    return std::nullopt;
  }

  void validate() const {
    check_dimensions(d, k);
    const long total = static_cast<long>(vertex_count(d));
    if (l < 1 || l > total)
      throw PuzzleError(ErrorCode::invalid_dimension,
                        "l=" + std::to_string(l) + " outside [1, 2^d]");
    const std::size_t ring_count = static_cast<std::size_t>(total - l);
    if (ring_count < 1)
      throw PuzzleError(ErrorCode::invalid_dimension, "puzzle has no rings (l = 2^d)");
    if (colours.size() != ring_count)
      throw PuzzleError(ErrorCode::palette_mismatch,
                        std::to_string(colours.size()) + " colours but 2^d - l = " +
                            std::to_string(ring_count));
    for (std::size_t i = 0; i < colours.size(); ++i) {
      if (colours[i] == 'w')
        throw PuzzleError(ErrorCode::palette_mismatch, "'w' is the unlabelled colour");
      for (std::size_t j = 0; j < i; ++j)
        if (colours[i] == colours[j])
          throw PuzzleError(ErrorCode::palette_mismatch,
                            std::string("colour '") + colours[i] + "' listed twice");
    }
    if (start.size() != ring_count || target.size() != ring_count)
      throw PuzzleError(ErrorCode::palette_mismatch, "start/target ring count differs from palette");
    for (Vertex v : start.placement()) check_vertex(v, d);
    for (Vertex v : target.placement()) check_vertex(v, d);
  }

  friend bool operator==(const Puzzle&, const Puzzle&) = default;
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

inline std::string pairs_to_text(const Configuration& c, const std::vector<char>& colours) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(c[i]) + ", \"" + colours[i] + "\"]";
  }
  return out + "]";
}

inline Configuration pairs_from_json(const nlohmann::json& arr, const std::vector<char>& colours,
                                     const std::string& field) {
  auto fail = [&](const std::string& msg) {
    throw PuzzleError(ErrorCode::parse_error, "field '" + field + "': " + msg);
  };
  if (!arr.is_array()) fail("expected an array of [vertex, colour] pairs");
  if (arr.size() != colours.size())
    fail(std::to_string(arr.size()) + " pairs for " + std::to_string(colours.size()) + " colours");
  std::vector<std::optional<Vertex>> slots(colours.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    const std::string where = "entry " + std::to_string(i);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_string())
      fail(where + " is not a [vertex:int, colour:string] pair");
    const auto vertex = pair[0].get<long long>();
    const auto code = pair[1].get<std::string>();
    if (vertex < 0 || vertex >= 64)
      throw PuzzleError(ErrorCode::vertex_out_of_range,
                        "field '" + field + "' " + where + ": vertex " + std::to_string(vertex));
    if (code.size() != 1) fail(where + ": colour code must be one letter");
    auto it = std::find(colours.begin(), colours.end(), code[0]);
    if (it == colours.end()) fail(where + ": colour '" + code + "' not in palette");
    auto& slot = slots[static_cast<std::size_t>(it - colours.begin())];
    if (slot) fail(where + ": colour '" + code + "' placed twice");
    slot = static_cast<Vertex>(vertex);
  }
  std::vector<Vertex> placement;
  placement.reserve(slots.size());
  for (const auto& s : slots) placement.push_back(*s);
  try {
    return Configuration(std::move(placement));
  } catch (const PuzzleError& e) {
    throw PuzzleError(e.code(), "field '" + field + "': " + e.what());
  }
}

}  // namespace detail

inline std::string serialize_puzzle(const Puzzle& p) {
  std::string out = "{\n";
  out += "  \"d\": " + std::to_string(p.d) + ",\n";
  out += "  \"k\": " + std::to_string(p.k) + ",\n";
  out += "  \"l\": " + std::to_string(p.l) + ",\n";
  out += "  \"colours\": [";
  for (std::size_t i = 0; i < p.colours.size(); ++i) {
    if (i) out += ", ";
    out += std::string("\"") + p.colours[i] + "\"";
  }
  out += "],\n";
  out += "  \"start\": " + detail::pairs_to_text(p.start, p.colours) + ",\n";
  out += "  \"target\": " + detail::pairs_to_text(p.target, p.colours);
  if (!p.name.empty()) out += ",\n  \"name\": " + nlohmann::json(p.name).dump();
  if (p.level) out += ",\n  \"level\": " + nlohmann::json(*p.level).dump();
  out += "\n}\n";
  return out;
}

inline Puzzle puzzle_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) { throw PuzzleError(ErrorCode::parse_error, msg); };
  if (!j.is_object()) fail("puzzle must be a JSON object");
  for (const char* key : {"d", "k", "l", "colours", "start", "target"})
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  Puzzle p;
  for (auto [key, slot] : {std::pair{"d", &p.d}, std::pair{"k", &p.k}, std::pair{"l", &p.l}}) {
    if (!j[key].is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
    *slot = j[key].get<int>();
  }
  check_dimensions(p.d, p.k);
  if (!j["colours"].is_array()) fail("field 'colours' must be an array");
  for (const auto& c : j["colours"]) {
    if (!c.is_string() || c.get<std::string>().size() != 1)
      fail("field 'colours': every entry must be a one-letter string");
    p.colours.push_back(c.get<std::string>()[0]);
  }
  p.start = detail::pairs_from_json(j["start"], p.colours, "start");
  p.target = detail::pairs_from_json(j["target"], p.colours, "target");
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("field 'name' must be a string");
    p.name = j["name"].get<std::string>();
  }
  if (j.contains("level")) {
    if (!j["level"].is_string()) fail("field 'level' must be a string");
    p.level = j["level"].get<std::string>();
  }
  p.validate();
  return p;
}

inline Puzzle parse_puzzle(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PuzzleError(ErrorCode::parse_error,
                      "line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  return puzzle_from_json(j);
}

inline Puzzle load_puzzle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PuzzleError(ErrorCode::fixture_corrupt, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_puzzle(buf.str());
  } catch (const PuzzleError& e) {
    throw PuzzleError(e.code(), path + ": " + e.what());
  }
}

/// JSON value of a configuration as [vertex, colour] pairs in colour order.
inline nlohmann::json configuration_json(const Configuration& c, const std::vector<char>& colours) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < c.size(); ++i)
    out.push_back({c[i], std::string(1, colours[i])});
  return out;
}

inline nlohmann::json move_json(const Move& m, const std::vector<char>& colours) {
  return {{"colour", std::string(1, colours.at(m.colour))}, {"from", m.from}, {"to", m.to}};
}

}  // namespace hypercube
