#pragma once

// Session-based HTTP/JSON play service. Every endpoint is a plain member
// function returning {status, body}; mount() wires them onto an httplib
// server under /api/v1.
//
// Locking: the session table mutex is held only to look a session up, create
// or evict one. Each session has its own mutex, so requests on one session
// are serialized while other sessions (and hint searches) proceed.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "httplib.h"

#include "hypercube/astar.hpp"
#include "hypercube/core.hpp"
#include "hypercube/oracle.hpp"
#include "hypercube/puzzle.hpp"

namespace hypercube {

struct ApiReply {
  int status = 200;
  nlohmann::json body;
};

inline ApiReply api_error(int status, std::string code, std::string message,
                          nlohmann::json detail = nlohmann::json::object()) {
  return {status, {{"code", std::move(code)}, {"message", std::move(message)}, {"detail", std::move(detail)}}};
}

struct ServiceOptions {
  std::chrono::seconds session_ttl{3600};
  double hint_cpu_seconds = 5.0;
  std::size_t hint_max_generated = 50'000'000;
  std::size_t hint_cache_limit = 100'000;
};

struct Session {
  std::string id;
  Puzzle puzzle;
  Configuration current;
  std::vector<Move> history;
  std::chrono::system_clock::time_point created;
};

/// Why `m` is not a legal move from `c`, naming the occupied faces.
inline ApiReply explain_illegal(const Puzzle& p, const Configuration& c, const Move& m) {
  const std::string colour(1, p.colours.at(m.colour));
  nlohmann::json detail = {{"move", move_json(m, p.colours)}, {"k", p.k}};
  if (c[m.colour] != m.from) {
    detail["reason"] = "ring-not-at-source";
    return api_error(409, "illegal-move",
                     "ring " + colour + " is at " + std::to_string(c[m.colour]) + ", not " + std::to_string(m.from),
                     detail);
  }
  if (m.to >= vertex_count(p.d)) {
    detail["reason"] = "vertex-out-of-range";
    return api_error(409, "illegal-move", "vertex " + std::to_string(m.to) + " is not on the board", detail);
  }

  auto occupant = [&](Vertex v) { return std::string(1, p.colours[*c.ring_at(v)]) + "@" + std::to_string(v); };
  std::string summary;
  auto faces = nlohmann::json::array();
  for (const Face& f : faces_containing(m.from, p.d, p.k)) {
    if (!f.contains(m.to)) continue;
    auto blockers = nlohmann::json::array();
    std::string names;
    for (Vertex v : f.vertices()) {
      if (v == m.from || !c.is_occupied(v)) continue;
      blockers.push_back({{"colour", std::string(1, p.colours[*c.ring_at(v)])}, {"vertex", v}});
      names += (names.empty() ? "" : " ") + occupant(v);
    }
    faces.push_back({{"vertices", f.vertices()}, {"occupied_by", blockers}});
    std::string verts;
    for (Vertex v : f.vertices()) verts += (verts.empty() ? "" : ",") + std::to_string(v);
    summary += "; face {" + verts + "} holds " + names;
  }
  detail["faces"] = faces;

  std::string message = "ring " + colour + " cannot move " + std::to_string(m.from) + " -> " + std::to_string(m.to);
  if (faces.empty()) {
    detail["reason"] = "no-shared-face";
    message += ": no " + std::to_string(p.k) + "-face contains both vertices";
  } else if (c.is_occupied(m.to)) {
    detail["reason"] = "destination-occupied";
    message += ": destination holds " + occupant(m.to) + summary;
  } else {
    detail["reason"] = "face-occupied";
    message += ": every " + std::to_string(p.k) + "-face joining them is occupied" + summary;
  }
  return api_error(409, "illegal-move", message, detail);
}

class PlayService {
 public:
  using Clock = std::chrono::steady_clock;

  explicit PlayService(std::vector<Puzzle> fixtures, ServiceOptions options = {})
      : fixtures_(std::move(fixtures)), options_(options), id_rng_(std::random_device{}()) {}

  ApiReply list_puzzles() const {
    auto out = nlohmann::json::array();
    for (const Puzzle& p : fixtures_) {
      nlohmann::json entry = {{"name", p.name}, {"d", p.d}, {"k", p.k}, {"l", p.l}};
      entry["level"] = p.level ? nlohmann::json(*p.level) : nlohmann::json(nullptr);
      out.push_back(entry);
    }
    return {200, {{"puzzles", out}}};
  }

  /// Body: {"puzzle": "<fixture name>" | {inline puzzle}, "k": optional int}.
  ApiReply create_session(const std::string& body) {
    evict_idle(Clock::now());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body.empty() ? "{}" : body);
    } catch (const nlohmann::json::parse_error& e) {
      return api_error(400, "bad-request", "request body is not valid JSON", {{"parser", e.what()}});
    }
    if (!j.is_object() || !j.contains("puzzle"))
      return api_error(400, "bad-request", "expected {\"puzzle\": name-or-object}");

    Puzzle puzzle;
    try {
      if (j["puzzle"].is_string()) {
        const std::string name = j["puzzle"].get<std::string>();
        auto it = std::find_if(fixtures_.begin(), fixtures_.end(), [&](const Puzzle& p) { return p.name == name; });
        if (it == fixtures_.end()) return api_error(404, "not-found", "no fixture named '" + name + "'");
        puzzle = *it;
      } else {
        puzzle = puzzle_from_json(j["puzzle"]);
      }
      if (j.contains("k") && !j["k"].is_null()) {
        if (!j["k"].is_number_integer()) return api_error(422, "invalid-puzzle", "k must be an integer");
        puzzle = puzzle.with_k(j["k"].get<int>());
      }
    } catch (const PuzzleError& e) {
      return api_error(422, "invalid-puzzle", e.what(), {{"error", to_string(e.code())}});
    } catch (const nlohmann::json::exception& e) {
      return api_error(422, "invalid-puzzle", e.what());
    }

    auto slot = std::make_shared<Slot>();
    slot->session = Session{new_id(), puzzle, puzzle.start, {}, std::chrono::system_clock::now()};
    slot->last_used = Clock::now();
    const std::string id = slot->session.id;
    {
      std::lock_guard lock(sessions_mutex_);
      sessions_[id] = slot;
    }
    std::lock_guard lock(slot->mutex);
    ApiReply reply{201, summary_json(slot->session)};
    reply.body["state"] = state_json(slot->session);
    return reply;
  }

  ApiReply get_state(const std::string& id) {
    auto slot = find(id);
    if (!slot) return not_found(id);
    std::lock_guard lock(slot->mutex);
    return {200, state_json(slot->session)};
  }

  /// Body: {"colour": "r", "from": 4, "to": 5}. Colour may also be a ring index.
  ApiReply apply(const std::string& id, const std::string& body) {
    auto slot = find(id);
    if (!slot) return not_found(id);
    std::lock_guard lock(slot->mutex);
    Session& s = slot->session;

    Move m;
    try {
      const auto j = nlohmann::json::parse(body);
      if (!j.is_object() || !j.contains("colour") || !j.contains("from") || !j.contains("to"))
        return api_error(400, "bad-request", "expected {\"colour\", \"from\", \"to\"}");
      if (j["colour"].is_string()) {
        const std::string code = j["colour"].get<std::string>();
        const auto cid = code.size() == 1 ? s.puzzle.colour_id(code[0]) : std::nullopt;
        if (!cid) return api_error(400, "bad-request", "unknown colour '" + code + "'");
        m.colour = *cid;
      } else {
        m.colour = j["colour"].get<ColourId>();
        if (m.colour >= s.puzzle.rings()) return api_error(400, "bad-request", "ring index out of range");
      }
      m.from = j["from"].get<Vertex>();
      m.to = j["to"].get<Vertex>();
    } catch (const nlohmann::json::exception& e) {
      return api_error(400, "bad-request", "malformed move body", {{"parser", e.what()}});
    }

    const Hypercube cube = s.puzzle.cube();
    if (!is_legal(s.current, m, cube)) return explain_illegal(s.puzzle, s.current, m);
    s.current = apply_move(s.current, m, cube);
    s.history.push_back(m);
    return {200, state_json(s)};
  }

  ApiReply undo(const std::string& id) {
    auto slot = find(id);
    if (!slot) return not_found(id);
    std::lock_guard lock(slot->mutex);
    Session& s = slot->session;
    if (s.history.empty()) return api_error(409, "nothing-to-undo", "session is at its start configuration");
    s.current = apply_move(s.current, s.history.back().reversed(), s.puzzle.cube());
    s.history.pop_back();
    return {200, state_json(s)};
  }

  /// First move of a shortest path from the current configuration.
  ApiReply hint(const std::string& id) {
    auto slot = find(id);
    if (!slot) return not_found(id);
    std::lock_guard lock(slot->mutex);
    const Session& s = slot->session;
    if (s.current == s.puzzle.target) return {200, {{"move", nullptr}, {"optimal_remaining", 0}}};

    const std::string key = cache_key(s.puzzle, s.current);
    std::optional<CachedHint> cached;
    {
      std::lock_guard lock_cache(cache_mutex_);
      if (auto it = hint_cache_.find(key); it != hint_cache_.end()) cached = it->second;
    }
    if (!cached) {
      Puzzle from_here = s.puzzle;
      from_here.start = s.current;
      const AStarResult res = astar_solve(from_here, {options_.hint_max_generated, options_.hint_cpu_seconds});
      if (res.status == SearchStatus::budget_exceeded)
        return api_error(503, "budget-exceeded", "hint search exceeded its budget",
                         {{"expanded", res.expanded}, {"cpu_seconds", res.elapsed}});
      cached = CachedHint{res.status == SearchStatus::solved,
                          res.path.empty() ? std::nullopt : std::optional<Move>(res.path.front()), res.moves};
      std::lock_guard lock_cache(cache_mutex_);
      if (hint_cache_.size() >= options_.hint_cache_limit) hint_cache_.clear();
      hint_cache_.emplace(key, *cached);
    }
    if (!cached->solvable)
      return api_error(422, "unsolvable", "target is unreachable from the current configuration",
                       {{"k", s.puzzle.k}});
    return {200, {{"move", move_json(*cached->first, s.puzzle.colours)}, {"optimal_remaining", cached->remaining}}};
  }

  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t evict_idle(Clock::time_point now) {
    std::lock_guard lock(sessions_mutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second->last_used > options_.session_ttl) {
        it = sessions_.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
    return dropped;
  }

  std::size_t session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
  }

  /// Registers the /api/v1 routes. A non-empty static_dir is served at "/".
  void mount(httplib::Server& server, const std::string& static_dir = "") {
    using httplib::Request;
    using httplib::Response;
    auto send = [](Response& res, const ApiReply& reply) {
      res.status = reply.status;
      res.set_content(reply.body.dump(), "application/json");
    };
    auto guard = [send](auto&& handler) {
      return [send, handler](const Request& req, Response& res) {
        try {
          send(res, handler(req));
        } catch (const std::exception& e) {
          send(res, api_error(500, "internal", e.what()));
        }
      };
    };
    const std::string session = R"(/api/v1/sessions/([0-9a-f]+))";
    server.Get("/api/v1/puzzles", guard([this](const Request&) { return list_puzzles(); }));
    server.Post("/api/v1/sessions", guard([this](const Request& req) { return create_session(req.body); }));
    server.Get(session, guard([this](const Request& req) { return get_state(req.matches[1]); }));
    server.Post(session + "/moves", guard([this](const Request& req) { return apply(req.matches[1], req.body); }));
    server.Post(session + "/undo", guard([this](const Request& req) { return undo(req.matches[1]); }));
    server.Get(session + "/hint", guard([this](const Request& req) { return hint(req.matches[1]); }));
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
      throw PuzzleError(ErrorCode::io_error, "static directory " + static_dir + " not found");
  }

 private:
  struct Slot {
    std::mutex mutex;
    Session session;
    Clock::time_point last_used;  // guarded by sessions_mutex_
  };

  struct CachedHint {
    bool solvable;
    std::optional<Move> first;
    int remaining;
  };

  std::shared_ptr<Slot> find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_used = Clock::now();
    return it->second;
  }

  static ApiReply not_found(const std::string& id) {
    return api_error(404, "not-found", "no session '" + id + "'");
  }

  std::string new_id() {
    std::lock_guard lock(id_mutex_);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(id_rng_()),
                  static_cast<unsigned long long>(id_rng_()));
    return buf;
  }

  static std::string cache_key(const Puzzle& p, const Configuration& c) {
    std::string key = std::to_string(p.d) + ':' + std::to_string(p.k);
    for (Vertex v : p.target.placement()) key += ',' + std::to_string(v);
    key += '|';
    for (Vertex v : c.placement()) key += ',' + std::to_string(v);
    return key;
  }

  static nlohmann::json summary_json(const Session& s) {
    const Puzzle& p = s.puzzle;
    nlohmann::json out = {{"id", s.id},
                          {"name", p.name},
                          {"d", p.d},
                          {"k", p.k},
                          {"l", p.l},
                          {"colours", nlohmann::json::array()},
                          {"start", configuration_json(p.start, p.colours)},
                          {"target", configuration_json(p.target, p.colours)}};
    for (char c : p.colours) out["colours"].push_back(std::string(1, c));
    out["level"] = p.level ? nlohmann::json(*p.level) : nlohmann::json(nullptr);
    return out;
  }

  static nlohmann::json state_json(const Session& s) {
    const Puzzle& p = s.puzzle;
    auto history = nlohmann::json::array();
    for (const Move& m : s.history) history.push_back(move_json(m, p.colours));
    auto legal = nlohmann::json::array();
    for (const Move& m : legal_moves(s.current, p.cube())) legal.push_back(move_json(m, p.colours));
    return {{"id", s.id},
            {"current", configuration_json(s.current, p.colours)},
            {"history", history},
            {"move_count", s.history.size()},
            {"solved", s.current == p.target},
            {"legal", legal}};
  }

  std::vector<Puzzle> fixtures_;
  ServiceOptions options_;

  mutable std::mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Slot>> sessions_;

  std::mutex cache_mutex_;
  std::unordered_map<std::string, CachedHint> hint_cache_;

  std::mutex id_mutex_;
  std::mt19937_64 id_rng_;
};

}  // namespace hypercube
