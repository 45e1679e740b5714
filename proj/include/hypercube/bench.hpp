#pragma once

// Benchmark harness: fixtures, seeded run batches, CSV records and summaries,
// and difficulty-level identification against the published optima.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercube/astar.hpp"
#include "hypercube/ea.hpp"
#include "hypercube/oracle.hpp"
#include "hypercube/puzzle.hpp"
#include "hypercube/rl.hpp"

namespace hypercube {

enum class Method { astar, ea, rl, oracle };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::astar: return "astar";
    case Method::ea: return "ea";
    case Method::rl: return "rl";
    case Method::oracle: return "bfs-oracle";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "astar") return Method::astar;
  if (s == "ea") return Method::ea;
  if (s == "rl") return Method::rl;
  if (s == "oracle" || s == "bfs-oracle") return Method::oracle;
  return std::nullopt;
}

// ---------------------------------------------------------------- fixtures

inline std::vector<Puzzle> load_fixtures(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw PuzzleError(ErrorCode::fixture_corrupt, "fixture directory " + dir.string() + " not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Puzzle> out;
  for (const auto& f : files) {
    try {
      out.push_back(load_puzzle(f.string()));
    } catch (const PuzzleError& e) {
      throw PuzzleError(ErrorCode::fixture_corrupt, e.what());
    }
    if (out.back().name.empty()) out.back().name = f.stem().string();
  }
  return out;
}

inline const Puzzle* find_fixture(const std::vector<Puzzle>& fixtures, const std::string& name) {
  for (const Puzzle& p : fixtures)
    if (p.name == name) return &p;
  return nullptr;
}

// ------------------------------------------------------- level identification

/// Published exact optima per difficulty level, indexed [level][k - 1].
struct ReferenceOptima {
  int d;
  std::vector<std::vector<int>> levels;
};

inline const std::vector<ReferenceOptima>& reference_optima() {
  static const std::vector<ReferenceOptima> table = {
      {3, {{4, 6}, {6, 7}, {10, 9}}},
      {4, {{4, 6, 8}, {8, 7, 9}, {6, 6, 10}, {8, 7, 10}}},
  };
  return table;
}

struct FixtureOptima {
  std::string name;
  int d = 0;
  std::vector<std::optional<int>> optima;  // index k - 1; nullopt = unreachable
  std::optional<std::string> label;
};

struct DimensionAssignment {
  int d = 0;
  bool consistent = false;
  std::string message;
};

struct LevelReport {
  std::vector<FixtureOptima> fixtures;
  std::vector<DimensionAssignment> dimensions;

  bool consistent() const {
    return std::all_of(dimensions.begin(), dimensions.end(),
                       [](const DimensionAssignment& a) { return a.consistent; });
  }

  std::optional<std::string> label_of(const std::string& name) const {
    for (const auto& f : fixtures)
      if (f.name == name) return f.label;
    return std::nullopt;
  }
};

/// Labels fixtures by matching their exact optima for k = 1..d-1 against the
/// reference columns. A fixture unreachable under its own k is "impossible".
/// Dimensions without reference data are left unlabelled.
inline LevelReport identify_levels(const std::vector<Puzzle>& fixtures,
                                   std::size_t node_budget = 50'000'000) {
  LevelReport report;
  for (const ReferenceOptima& ref : reference_optima()) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fixtures.size(); ++i)
      if (fixtures[i].d == ref.d) rows.push_back(i);
    if (rows.empty()) continue;

    const std::size_t first = report.fixtures.size();
    std::vector<std::size_t> candidates;  // report indices needing a level
    for (std::size_t i : rows) {
      const Puzzle& p = fixtures[i];
      FixtureOptima f{p.name, p.d, {}, std::nullopt};
      for (int k = 1; k < p.d; ++k) {
        const BfsResult r = bfs_shortest_path(p.with_k(k), node_budget);
        if (r.status == SearchStatus::budget_exceeded)
          throw PuzzleError(ErrorCode::no_consistent_assignment,
                            p.name + ": oracle budget exceeded at k=" + std::to_string(k));
        f.optima.push_back(r.moves());
      }
      const auto& own = f.optima[static_cast<std::size_t>(std::min(p.k, p.d - 1) - 1)];
      if (!own) f.label = "impossible";
      else candidates.push_back(report.fixtures.size());
      report.fixtures.push_back(std::move(f));
    }

    // Injective assignment candidate -> level by backtracking.
    std::vector<int> chosen(candidates.size(), -1);
    std::vector<bool> used(ref.levels.size(), false);
    auto matches = [&](std::size_t c, std::size_t level) {
      const auto& optima = report.fixtures[candidates[c]].optima;
      for (std::size_t k = 0; k < optima.size(); ++k)
        if (!optima[k] || *optima[k] != ref.levels[level][k]) return false;
      return true;
    };
    std::function<bool(std::size_t)> assign = [&](std::size_t c) {
      if (c == candidates.size()) return true;
      for (std::size_t level = 0; level < ref.levels.size(); ++level) {
        if (used[level] || !matches(c, level)) continue;
        used[level] = true;
        chosen[c] = static_cast<int>(level);
        if (assign(c + 1)) return true;
        used[level] = false;
      }
      return false;
    };

    DimensionAssignment result{ref.d, assign(0), {}};
    if (result.consistent) {
      for (std::size_t c = 0; c < candidates.size(); ++c)
        report.fixtures[candidates[c]].label = std::to_string(chosen[c]);
      result.message = "assignment found";
    } else {
      std::ostringstream msg;
      msg << "no injective assignment of d=" << ref.d << " fixtures to reference levels;";
      for (std::size_t i = first; i < report.fixtures.size(); ++i) {
        msg << ' ' << report.fixtures[i].name << " optima (";
        for (std::size_t k = 0; k < report.fixtures[i].optima.size(); ++k) {
          if (k) msg << ',';
          const auto& o = report.fixtures[i].optima[k];
          msg << (o ? std::to_string(*o) : "-");
        }
        msg << ')';
      }
      result.message = msg.str();
      for (std::size_t c : candidates) report.fixtures[c].label.reset();
    }
    report.dimensions.push_back(std::move(result));
  }
  return report;
}

// ------------------------------------------------------------------ records

struct RunRecord {
  std::string method;
  int d = 0;
  int k = 0;
  int l = 0;
  std::string puzzle_name;
  int run_index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<int> moves;
  double cpu_seconds = 0.0;
  nlohmann::json extra = nlohmann::json::object();

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr std::string_view kRecordHeader =
    "method,d,k,l,puzzle_name,run_index,seed,success,moves,cpu_seconds,extra_json";

namespace detail {

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line, std::size_t row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw PuzzleError(ErrorCode::parse_error, "row " + std::to_string(row) + ": unterminated quote");
  return fields;
}

inline std::string format_seconds(double s) {
  std::ostringstream out;
  out.precision(9);
  out << std::fixed << s;
  return out.str();
}

}  // namespace detail

inline std::string record_line(const RunRecord& r) {
  std::ostringstream out;
  out << r.method << ',' << r.d << ',' << r.k << ',' << r.l << ',' << detail::csv_quote(r.puzzle_name)
      << ',' << r.run_index << ',' << r.seed << ',' << (r.success ? 1 : 0) << ','
      << (r.moves ? std::to_string(*r.moves) : "") << ',' << detail::format_seconds(r.cpu_seconds) << ','
      << detail::csv_quote(r.extra.dump());
  return out.str();
}

inline void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordHeader << '\n';
  for (const RunRecord& r : records) out << record_line(r) << '\n';
}

inline std::vector<RunRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader)
    throw PuzzleError(ErrorCode::parse_error, "row 1: expected header '" + std::string(kRecordHeader) + "'");
  std::vector<RunRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = detail::csv_split(line, row);
    auto fail = [&](const std::string& what) {
      throw PuzzleError(ErrorCode::parse_error, "row " + std::to_string(row) + ": " + what);
    };
    if (f.size() != 11) fail("expected 11 fields, got " + std::to_string(f.size()));
    try {
      RunRecord r;
      r.method = f[0];
      r.d = std::stoi(f[1]);
      r.k = std::stoi(f[2]);
      r.l = std::stoi(f[3]);
      r.puzzle_name = f[4];
      r.run_index = std::stoi(f[5]);
      r.seed = std::stoull(f[6]);
      if (f[7] != "0" && f[7] != "1") fail("success must be 0 or 1");
      r.success = f[7] == "1";
      if (!f[8].empty()) r.moves = std::stoi(f[8]);
      r.cpu_seconds = std::stod(f[9]);
      r.extra = nlohmann::json::parse(f[10]);
      if (r.success != r.moves.has_value()) fail("success flag disagrees with moves column");
      out.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      fail("malformed number");
    } catch (const std::out_of_range&) {
      fail("number out of range");
    } catch (const nlohmann::json::parse_error&) {
      fail("malformed extra_json");
    }
  }
  return out;
}

// ---------------------------------------------------------------- summaries

enum class MedianRule { lower_middle, mean_of_middle };

struct SummaryRow {
  std::string method;
  int d = 0;
  int k = 0;
  std::string level;
  std::string puzzle_name;
  int runs = 0;
  double success_rate = 0.0;
  std::optional<int> min;
  std::optional<int> max;
  std::optional<double> median;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

inline std::optional<double> median_of(std::vector<int> values, MedianRule rule) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1 || rule == MedianRule::lower_middle) return values[(n - 1) / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

/// Groups by (method, d, k, puzzle) in first-appearance order.
inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records,
                                         MedianRule rule = MedianRule::lower_middle) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<int>> successes;
  std::vector<int> wins;
  for (const RunRecord& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
      return s.method == r.method && s.d == r.d && s.k == r.k && s.puzzle_name == r.puzzle_name;
    });
    if (it == rows.end()) {
      SummaryRow s;
      s.method = r.method;
      s.d = r.d;
      s.k = r.k;
      s.puzzle_name = r.puzzle_name;
      s.level = r.extra.contains("level") ? r.extra["level"].get<std::string>() : "-";
      rows.push_back(s);
      successes.emplace_back();
      wins.push_back(0);
      it = rows.end() - 1;
    }
    const auto i = static_cast<std::size_t>(it - rows.begin());
    ++it->runs;
    if (r.success) {
      ++wins[i];
      successes[i].push_back(*r.moves);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].success_rate = static_cast<double>(wins[i]) / rows[i].runs;
    if (!successes[i].empty()) {
      rows[i].min = *std::min_element(successes[i].begin(), successes[i].end());
      rows[i].max = *std::max_element(successes[i].begin(), successes[i].end());
      rows[i].median = median_of(successes[i], rule);
    }
  }
  return rows;
}

inline constexpr std::string_view kSummaryHeader = "method,d,k,level,puzzle_name,runs,success_rate,min,max,median";

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& s : rows) {
    std::ostringstream median;
    if (s.median) median << *s.median;
    out << s.method << ',' << s.d << ',' << s.k << ',' << detail::csv_quote(s.level) << ','
        << detail::csv_quote(s.puzzle_name) << ',' << s.runs << ',' << s.success_rate << ','
        << (s.min ? std::to_string(*s.min) : "") << ',' << (s.max ? std::to_string(*s.max) : "") << ','
        << median.str() << '\n';
  }
}

// --------------------------------------------------------------- execution

struct MethodParams {
  AStarBudget astar;
  EAParams ea;
  RLParams rl;
  std::size_t oracle_budget = 50'000'000;
  double cpu_cap = 60.0;  // seconds per run; applies to every method
};

struct RunOutcome {
  RunRecord record;
  std::optional<std::vector<Move>> path;
};

/// One seeded solve. Per-run exceptions become failed records.
inline RunOutcome run_one(Method method, const Puzzle& p, int run_index, std::uint64_t seed,
                          const MethodParams& params) {
  RunOutcome out;
  RunRecord& r = out.record;
  r.method = to_string(method);
  r.d = p.d;
  r.k = p.k;
  r.l = p.l;
  r.puzzle_name = p.name;
  r.run_index = run_index;
  r.seed = seed;
  if (p.level) r.extra["level"] = *p.level;

  CpuStopwatch clock;
  try {
    switch (method) {
      case Method::astar: {
        AStarBudget budget = params.astar;
        budget.max_cpu_seconds = std::min(budget.max_cpu_seconds, params.cpu_cap);
        const AStarResult res = astar_solve(p, budget);
        r.extra["status"] = to_string(res.status);
        r.extra["expanded"] = res.expanded;
        r.extra["generated"] = res.generated;
        if (res.status == SearchStatus::solved) {
          r.moves = res.moves;
          out.path = res.path;
        }
        break;
      }
      case Method::ea: {
        EAParams ea = params.ea;
        ea.seed = seed;
        ea.max_cpu_seconds = std::min(ea.max_cpu_seconds, params.cpu_cap);
        const EAResult res = evolve(p, ea);
        r.extra["status"] = to_string(res.status);
        r.extra["generations"] = res.generations_used;
        if (res.timed_out) r.extra["timed_out"] = true;
        r.moves = res.best_moves;
        out.path = res.best_path;
        break;
      }
      case Method::rl: {
        RLParams rl = params.rl;
        rl.seed = seed;
        rl.max_cpu_seconds = std::min(rl.max_cpu_seconds, params.cpu_cap);
        const RLResult res = rl_solve(p, rl);
        r.extra["status"] = to_string(res.status);
        r.extra["episodes"] = res.episodes_run;
        r.extra["seeded"] = res.seeded;
        if (res.timed_out) r.extra["timed_out"] = true;
        r.moves = res.best_moves;
        out.path = res.best_path;
        break;
      }
      case Method::oracle: {
        const BfsResult res = bfs_shortest_path(p, params.oracle_budget);
        r.extra["status"] = to_string(res.status);
        r.extra["explored"] = res.explored;
        r.moves = res.moves();
        if (res.moves()) out.path = moves_along(res.path);
        break;
      }
    }
  } catch (const std::exception& e) {
    r.extra["error"] = e.what();
    r.moves.reset();
    out.path.reset();
  }
  r.cpu_seconds = clock.elapsed();
  r.success = r.moves.has_value();
  return out;
}

struct BenchPlan {
  Method method = Method::astar;
  std::vector<Puzzle> puzzles;
  std::vector<int> k_values;  // empty: each puzzle's own k
  int runs = 20;
  std::uint64_t base_seed = 0;
  MethodParams params;
  unsigned jobs = 1;
};

/// Executes every (puzzle, k, run) on a bounded worker pool. Records come back
/// in plan order regardless of scheduling.
inline std::vector<RunRecord> run_benchmark(const BenchPlan& plan) {
  struct Task {
    Puzzle puzzle;
    int run;
  };
  std::vector<Task> tasks;
  for (const Puzzle& base : plan.puzzles) {
    std::vector<int> ks = plan.k_values;
    if (ks.empty()) ks.push_back(base.k);
    for (int k : ks) {
      if (k < 1 || k > base.d) continue;
      const Puzzle p = base.with_k(k);
      for (int r = 0; r < plan.runs; ++r) tasks.push_back({p, r});
    }
  }

  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      records[i] = run_one(plan.method, t.puzzle, t.run, plan.base_seed + static_cast<std::uint64_t>(t.run),
                           plan.params)
                       .record;
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(plan.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

/// Writes records.csv and summary.csv under `out_dir`.
inline std::vector<SummaryRow> write_benchmark(const std::filesystem::path& out_dir,
                                               const std::vector<RunRecord>& records,
                                               MedianRule rule = MedianRule::lower_middle) {
  std::filesystem::create_directories(out_dir);
  std::ofstream rec(out_dir / "records.csv", std::ios::binary);
  if (!rec) throw PuzzleError(ErrorCode::io_error, "cannot write " + (out_dir / "records.csv").string());
  write_records(rec, records);
  const auto rows = summarize(records, rule);
  std::ofstream sum(out_dir / "summary.csv", std::ios::binary);
  if (!sum) throw PuzzleError(ErrorCode::io_error, "cannot write " + (out_dir / "summary.csv").string());
  write_summary(sum, rows);
  return rows;
}

}  // namespace hypercube
