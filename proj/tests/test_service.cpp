#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "hypercube/bench.hpp"
#include "hypercube/service.hpp"
#include "support.hpp"

using namespace hypercube;
using namespace testing_support;
using nlohmann::json;

namespace {

PlayService make_service(ServiceOptions options = {}) {
  return PlayService(load_fixtures(HYPERCUBE_FIXTURE_DIR), options);
}

std::string create(PlayService& s, const std::string& name, std::optional<int> k = std::nullopt) {
  json body = {{"puzzle", name}};
  if (k) body["k"] = *k;
  const ApiReply r = s.create_session(body.dump());
  EXPECT_EQ(r.status, 201) << r.body.dump();
  return r.body["id"].get<std::string>();
}

std::string move_body(const std::string& colour, int from, int to) {
  return json{{"colour", colour}, {"from", from}, {"to", to}}.dump();
}

Configuration current_of(const json& state, const Puzzle& p) {
  std::vector<Vertex> placement(p.rings());
  for (const auto& pair : state["current"])
    placement[*p.colour_id(pair[1].get<std::string>()[0])] = pair[0].get<Vertex>();
  return Configuration(placement);
}

void expect_error_shape(const ApiReply& r, int status) {
  EXPECT_EQ(r.status, status) << r.body.dump();
  EXPECT_TRUE(r.body.contains("code"));
  EXPECT_TRUE(r.body.contains("message"));
  EXPECT_TRUE(r.body.contains("detail"));
}

}  // namespace

TEST(Service, ListsFixtures) {
  PlayService s = make_service();
  const ApiReply r = s.list_puzzles();
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["puzzles"].size(), 8u);
  EXPECT_EQ(r.body["puzzles"][0]["name"], "d3-row1");
  EXPECT_EQ(r.body["puzzles"][0]["level"], "0");
}

TEST(Service, CreateSession) {
  PlayService s = make_service();
  const ApiReply r = s.create_session(R"({"puzzle": "d3-row1", "k": 2})");
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["d"], 3);
  EXPECT_EQ(r.body["k"], 2);
  EXPECT_EQ(r.body["l"], 4);
  EXPECT_EQ(r.body["colours"].size(), 4u);
  EXPECT_EQ(r.body["start"].size(), 4u);
  EXPECT_EQ(r.body["target"].size(), 4u);
  EXPECT_EQ(r.body["state"]["move_count"], 0);

  expect_error_shape(s.create_session(R"({"puzzle": "nope"})"), 404);
  expect_error_shape(s.create_session(R"({"puzzle": {"d": 3, "k": 1, "l": 6, "colours": ["p", "r"],
      "start": [[1, "p"], [1, "r"]], "target": [[0, "p"], [2, "r"]]}})"),
                     422);
  expect_error_shape(s.create_session(R"({"puzzle": "d3-row1", "k": 9})"), 422);
  expect_error_shape(s.create_session("{oops"), 400);

  const ApiReply inline_ok = s.create_session(json{{"puzzle", json::parse(serialize_puzzle(fixture("d4-row1")))}}.dump());
  EXPECT_EQ(inline_ok.status, 201);
  EXPECT_EQ(inline_ok.body["d"], 4);
}

TEST(Service, SessionsAreIsolated) {
  PlayService s = make_service();
  const std::string a = create(s, "d3-row1", 2);
  const std::string b = create(s, "d3-row1", 2);
  EXPECT_NE(a, b);
  ASSERT_EQ(s.apply(a, move_body("p", 1, 3)).status, 200);
  EXPECT_EQ(s.get_state(a).body["move_count"], 1);
  EXPECT_EQ(s.get_state(b).body["move_count"], 0);
  expect_error_shape(s.get_state("ffff"), 404);
}

TEST(Service, StateReportsLegalMoves) {
  PlayService s = make_service();
  const std::string id = create(s, "d3-row1", 2);
  const ApiReply fresh = s.get_state(id);
  ASSERT_EQ(fresh.status, 200);
  EXPECT_EQ(fresh.body["legal"].size(), 6u);
  EXPECT_FALSE(fresh.body["solved"].get<bool>());

  // Legal list mirrors the library, spelled with colour codes.
  const Puzzle p = fixture("d3-row1").with_k(2);
  json expected = json::array();
  for (const Move& m : legal_moves(p.start, p.cube())) expected.push_back(move_json(m, p.colours));
  EXPECT_EQ(fresh.body["legal"], expected);
}

TEST(Service, ApplyAndUndo) {
  PlayService s = make_service();
  const std::string id = create(s, "d3-row1", 2);
  const ApiReply before = s.get_state(id);

  const ApiReply moved = s.apply(id, move_body("p", 1, 3));
  ASSERT_EQ(moved.status, 200);
  EXPECT_EQ(moved.body["move_count"], 1);
  EXPECT_EQ(moved.body["history"][0], (json{{"colour", "p"}, {"from", 1}, {"to", 3}}));

  const ApiReply undone = s.undo(id);
  ASSERT_EQ(undone.status, 200);
  EXPECT_EQ(undone.body["current"], before.body["current"]);
  EXPECT_EQ(undone.body["move_count"], 0);
  expect_error_shape(s.undo(id), 409);
  expect_error_shape(s.undo("0123"), 404);
  expect_error_shape(s.apply("0123", move_body("p", 1, 3)), 404);
  expect_error_shape(s.apply(id, "{}"), 400);
  expect_error_shape(s.apply(id, move_body("z", 1, 3)), 400);
}

TEST(Service, IllegalMoveNamesTheOccupiedFaces) {
  PlayService s = make_service();
  const std::string id = create(s, "d3-row1", 2);
  const ApiReply before = s.get_state(id);

  const ApiReply r = s.apply(id, move_body("r", 4, 5));
  expect_error_shape(r, 409);
  EXPECT_EQ(r.body["code"], "illegal-move");
  EXPECT_EQ(r.body["detail"]["reason"], "destination-occupied");
  // Two squares of the cube join 4 and 5; both hold other rings.
  ASSERT_EQ(r.body["detail"]["faces"].size(), 2u);
  for (const auto& f : r.body["detail"]["faces"]) EXPECT_FALSE(f["occupied_by"].empty());
  EXPECT_NE(r.body["message"].get<std::string>().find("b@5"), std::string::npos);

  const ApiReply blocked = s.apply(id, move_body("r", 4, 0));
  expect_error_shape(blocked, 409);
  EXPECT_EQ(blocked.body["detail"]["reason"], "face-occupied");
  EXPECT_NE(blocked.body["message"].get<std::string>().find("p@1"), std::string::npos);

  const ApiReply wrong_source = s.apply(id, move_body("p", 0, 2));
  EXPECT_EQ(wrong_source.body["detail"]["reason"], "ring-not-at-source");

  EXPECT_EQ(s.get_state(id).body, before.body);
}

TEST(Service, HintExamples) {
  PlayService s = make_service();
  const std::string level0 = create(s, "d3-row1", 1);
  const ApiReply h = s.hint(level0);
  ASSERT_EQ(h.status, 200);
  EXPECT_EQ(h.body["optimal_remaining"], 4);
  EXPECT_FALSE(h.body["move"].is_null());

  expect_error_shape(s.hint(create(s, "d3-row4")), 422);

  const ApiReply inline_solved = s.create_session(json{{"puzzle", json::parse(R"({"d": 3, "k": 1, "l": 7,
      "colours": ["p"], "start": [[2, "p"]], "target": [[2, "p"]]})")}}.dump());
  ASSERT_EQ(inline_solved.status, 201);
  const ApiReply done = s.hint(inline_solved.body["id"].get<std::string>());
  EXPECT_EQ(done.status, 200);
  EXPECT_EQ(done.body["optimal_remaining"], 0);
  EXPECT_TRUE(done.body["move"].is_null());
  EXPECT_TRUE(s.get_state(inline_solved.body["id"].get<std::string>()).body["solved"].get<bool>());
}

TEST(Service, HintedPlayCountsDownToSolved) {
  PlayService s = make_service();
  for (const char* name : {"d3-row1", "d3-row3", "d4-row2"}) {
    const std::string id = create(s, name);
    int remaining = s.hint(id).body["optimal_remaining"].get<int>();
    const int optimum = remaining;
    while (remaining > 0) {
      const json move = s.hint(id).body["move"];
      ASSERT_EQ(s.apply(id, move.dump()).status, 200);
      const int next = s.hint(id).body["optimal_remaining"].get<int>();
      ASSERT_EQ(next, remaining - 1) << name;
      remaining = next;
    }
    const json state = s.get_state(id).body;
    EXPECT_TRUE(state["solved"].get<bool>());
    EXPECT_EQ(state["move_count"], optimum);
    EXPECT_FALSE(state["legal"].empty());
  }
}

TEST(Service, HintBudgetExceededIs503) {
  ServiceOptions options;
  options.hint_max_generated = 3;
  PlayService s = make_service(options);
  expect_error_shape(s.hint(create(s, "d4-row2")), 503);
}

TEST(Service, RandomRequestsKeepHistoryReplayable) {
  PlayService s = make_service();
  std::mt19937_64 rng(77);
  for (const char* name : {"d3-row1", "d4-row1", "d5-row1"}) {
    const Puzzle p = fixture(name);
    const std::string id = create(s, name);
    for (int step = 0; step < 300; ++step) {
      const int action = static_cast<int>(rng() % 10);
      if (action == 0) {
        s.undo(id);
      } else if (action < 5) {
        const json legal = s.get_state(id).body["legal"];
        if (legal.empty()) continue;
        EXPECT_EQ(s.apply(id, legal[rng() % legal.size()].dump()).status, 200);
      } else {
        const std::string colour(1, p.colours[rng() % p.colours.size()]);
        s.apply(id, move_body(colour, static_cast<int>(rng() % (1u << p.d)), static_cast<int>(rng() % (1u << p.d))));
      }
      const json state = s.get_state(id).body;
      std::vector<Move> history;
      for (const auto& m : state["history"])
        history.push_back({*p.colour_id(m["colour"].get<std::string>()[0]), m["from"], m["to"]});
      ASSERT_EQ(replay(p.start, history, p.cube()), current_of(state, p));
      ASSERT_EQ(state["move_count"], history.size());
    }
  }
}

TEST(Service, IdleSessionsAreEvicted) {
  PlayService s = make_service();
  const std::string id = create(s, "d3-row1");
  EXPECT_EQ(s.evict_idle(PlayService::Clock::now()), 0u);
  EXPECT_EQ(s.evict_idle(PlayService::Clock::now() + std::chrono::hours(2)), 1u);
  EXPECT_EQ(s.session_count(), 0u);
  EXPECT_EQ(s.get_state(id).status, 404);
}

TEST(Service, ConcurrentSessionsStayIndependent) {
  PlayService s = make_service();
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(create(s, "d3-row2", 1));
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (int i = 0; i < 2 * (t + 1); ++i) {
        const json legal = s.get_state(ids[static_cast<std::size_t>(t)]).body["legal"];
        s.apply(ids[static_cast<std::size_t>(t)], legal[0].dump());
        s.hint(ids[static_cast<std::size_t>(t)]);
      }
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) EXPECT_EQ(s.get_state(ids[static_cast<std::size_t>(t)]).body["move_count"], 2 * (t + 1));
}

TEST(ServiceHttp, LoopbackOptimalSolveAndStaticBundle) {
  const auto bundle = std::filesystem::temp_directory_path() / "hypercube-test-bundle";
  std::filesystem::create_directories(bundle);
  std::ofstream(bundle / "index.html") << "<html>bundle</html>";

  PlayService service = make_service();
  httplib::Server server;
  service.mount(server, bundle.string());
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto puzzles = client.Get("/api/v1/puzzles");
  ASSERT_TRUE(puzzles);
  EXPECT_EQ(puzzles->status, 200);
  EXPECT_EQ(puzzles->get_header_value("Content-Type"), "application/json");

  auto created = client.Post("/api/v1/sessions", R"({"puzzle": "d3-row1", "k": 2})", "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];
  const std::string base = "/api/v1/sessions/" + id;

  // Illegal red move leaves the state untouched.
  const std::string before = client.Get(base)->body;
  auto illegal = client.Post(base + "/moves", move_body("r", 4, 5), "application/json");
  ASSERT_TRUE(illegal);
  EXPECT_EQ(illegal->status, 409);
  EXPECT_EQ(json::parse(illegal->body)["code"], "illegal-move");
  EXPECT_EQ(client.Get(base)->body, before);

  // Follow hints to an optimal six-move solve.
  for (int i = 0; i < 6; ++i) {
    auto hint = client.Get(base + "/hint");
    ASSERT_TRUE(hint);
    ASSERT_EQ(hint->status, 200);
    const json h = json::parse(hint->body);
    EXPECT_EQ(h["optimal_remaining"], 6 - i);
    auto moved = client.Post(base + "/moves", h["move"].dump(), "application/json");
    ASSERT_EQ(moved->status, 200);
  }
  const json done = json::parse(client.Get(base)->body);
  EXPECT_TRUE(done["solved"].get<bool>());
  EXPECT_EQ(done["move_count"], 6);

  auto undo = client.Post(base + "/undo", "", "application/json");
  EXPECT_EQ(undo->status, 200);
  EXPECT_EQ(json::parse(undo->body)["move_count"], 5);

  auto missing = client.Get("/api/v1/sessions/00ff");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["code"], "not-found");

  auto index = client.Get("/index.html");
  ASSERT_TRUE(index);
  EXPECT_EQ(index->status, 200);
  EXPECT_EQ(index->body, "<html>bundle</html>");

  server.stop();
  listener.join();
}
