// puzzle: command-line front end for the solvers, benchmark harness and
// play service.
//
// Exit codes: 0 success, 1 usage, 2 fixture or IO error,
// 3 no consistent level assignment.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypercube/bench.hpp"
#include "hypercube/service.hpp"

#ifndef HYPERCUBE_FIXTURE_DIR
#define HYPERCUBE_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace hypercube;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInconsistent = 3;

struct SolverFlags {
  std::string method = "astar";
  std::uint64_t seed = 0;
  double cpu_cap = 60.0;
  std::size_t max_generated = 50'000'000;
  bool literal_face_choice = false;
  MethodParams params;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--method", f.method, "astar | ea | rl | oracle")
      ->check(CLI::IsMember({"astar", "ea", "rl", "oracle", "bfs-oracle"}));
  cmd->add_option("--seed", f.seed, "base seed (PUZZLE_SEED overrides)");
  cmd->add_option("--cpu-cap", f.cpu_cap, "CPU seconds per run")->check(CLI::PositiveNumber);
  cmd->add_option("--max-generated", f.max_generated, "A* node budget");

  auto& ea = f.params.ea;
  cmd->add_option("--pop", ea.population, "EA population N");
  cmd->add_option("--gens", ea.generations, "EA generations T");
  cmd->add_option("--zipf-c", ea.zipf_c, "EA mutation-mode exponent");
  cmd->add_flag("--strict-paper-fitness", ea.strict_paper_fitness, "EA: use 1/(1+L-h) fitness");
  cmd->add_flag("--literal-face-choice", f.literal_face_choice,
                "EA: pick among all faces, then reject occupied ones");

  auto& rl = f.params.rl;
  cmd->add_option("--branch", rl.branch_count, "RL seeded configurations P");
  cmd->add_option("--iters", rl.iterations, "RL episodes I");
  cmd->add_option("--decay", rl.decay, "RL decay");
  cmd->add_option("--default-weight", rl.default_weight, "RL weight of unseen configurations");
  cmd->add_option("--episode-cap", rl.episode_cap_initial, "RL step cap before the first win");
}

// --alpha means the selection weight for EA and the learning rate for RL.
void apply_alpha(SolverFlags& f, const std::optional<double>& alpha) {
  if (!alpha) return;
  f.params.ea.alpha = *alpha;
  f.params.rl.learning_rate = *alpha;
}

void finalize(SolverFlags& f) {
  if (const char* env = std::getenv("PUZZLE_SEED")) f.seed = std::stoull(env);
  f.params.cpu_cap = f.cpu_cap;
  f.params.astar.max_generated = f.max_generated;
  f.params.ea.face_choice = f.literal_face_choice ? FaceChoice::any_face : FaceChoice::free_faces;
  f.params.ea.validate();
  f.params.rl.validate();
}

void print_summary(const std::vector<SummaryRow>& rows) { write_summary(std::cout, rows); }

MedianRule parse_median(const std::string& s) {
  return s == "mean" ? MedianRule::mean_of_middle : MedianRule::lower_middle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercube sliding puzzle solvers and benchmark harness"};
  app.require_subcommand(1);

  // solve
  SolverFlags solve_flags;
  std::optional<double> solve_alpha;
  std::string solve_file;
  std::optional<int> solve_k;
  auto* solve = app.add_subcommand("solve", "solve one puzzle file");
  solve->add_option("--puzzle", solve_file, "puzzle file")->required();
  solve->add_option("--k", solve_k, "override face dimension");
  solve->add_option("--alpha", solve_alpha, "EA selection weight / RL learning rate");
  add_solver_flags(solve, solve_flags);

  // bench
  SolverFlags bench_flags;
  std::optional<double> bench_alpha;
  std::string bench_fixtures = HYPERCUBE_FIXTURE_DIR;
  std::string bench_out;
  std::vector<std::string> bench_names;
  std::vector<int> bench_k;
  int bench_runs = 20;
  unsigned bench_jobs = 1;
  std::string bench_median = "lower";
  auto* bench = app.add_subcommand("bench", "seeded run batches over fixtures");
  bench->add_option("--fixtures", bench_fixtures, "fixture directory");
  bench->add_option("--out", bench_out, "output directory for records.csv and summary.csv");
  bench->add_option("--runs", bench_runs, "runs per (puzzle, k)")->check(CLI::NonNegativeNumber);
  bench->add_option("--puzzle", bench_names, "restrict to fixture names");
  bench->add_option("--k", bench_k, "face dimensions to run (default: each fixture's own)")->delimiter(',');
  bench->add_option("--jobs", bench_jobs, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--median", bench_median, "lower | mean")->check(CLI::IsMember({"lower", "mean"}));
  bench->add_option("--alpha", bench_alpha, "EA selection weight / RL learning rate");
  add_solver_flags(bench, bench_flags);

  // identify-levels
  std::string levels_fixtures = HYPERCUBE_FIXTURE_DIR;
  std::size_t levels_budget = 50'000'000;
  auto* levels = app.add_subcommand("identify-levels", "label fixtures by their exact optima");
  levels->add_option("--fixtures", levels_fixtures, "fixture directory");
  levels->add_option("--budget", levels_budget, "oracle node budget per search");

  // summarize
  std::string summary_records;
  std::string summary_out;
  std::string summary_median = "lower";
  auto* summarize_cmd = app.add_subcommand("summarize", "summarize a records.csv file");
  summarize_cmd->add_option("records", summary_records, "records.csv")->required();
  summarize_cmd->add_option("--out", summary_out, "also write the summary here");
  summarize_cmd->add_option("--median", summary_median, "lower | mean")
      ->check(CLI::IsMember({"lower", "mean"}));

  // sweep
  SolverFlags sweep_flags;
  std::string sweep_file;
  std::optional<int> sweep_k;
  std::vector<double> sweep_c = {1.2, 1.5, 1.8, 2.2, 3.0};
  int sweep_runs = 5;
  auto* sweep = app.add_subcommand("sweep", "EA runs over a list of Zipf exponents");
  sweep->add_option("--puzzle", sweep_file, "puzzle file")->required();
  sweep->add_option("--k", sweep_k, "override face dimension");
  sweep->add_option("--c", sweep_c, "Zipf exponents")->delimiter(',');
  sweep->add_option("--runs", sweep_runs, "runs per exponent")->check(CLI::PositiveNumber);
  add_solver_flags(sweep, sweep_flags);

  // serve
  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  std::string serve_fixtures = HYPERCUBE_FIXTURE_DIR;
  std::string serve_static;
  double serve_hint_cpu = 5.0;
  auto* serve = app.add_subcommand("serve", "run the play service");
  serve->add_option("--port", serve_port, "listen port");
  serve->add_option("--host", serve_host, "listen address");
  serve->add_option("--fixtures", serve_fixtures, "fixture directory");
  serve->add_option("--static", serve_static, "directory served at /");
  serve->add_option("--hint-cpu", serve_hint_cpu, "CPU seconds per hint search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) {
      apply_alpha(solve_flags, solve_alpha);
      finalize(solve_flags);
      Puzzle p = load_puzzle(solve_file);
      if (p.name.empty()) p.name = std::filesystem::path(solve_file).stem().string();
      if (solve_k) p = p.with_k(*solve_k);
      const Method method = *parse_method(solve_flags.method);
      const RunOutcome out = run_one(method, p, 0, solve_flags.seed, solve_flags.params);
      nlohmann::json j = {{"method", out.record.method},   {"puzzle", p.name},
                          {"d", p.d},                      {"k", p.k},
                          {"success", out.record.success}, {"cpu_seconds", out.record.cpu_seconds},
                          {"extra", out.record.extra}};
      j["moves"] = out.record.moves ? nlohmann::json(*out.record.moves) : nlohmann::json(nullptr);
      auto path = nlohmann::json::array();
      if (out.path)
        for (const Move& m : *out.path) path.push_back(move_json(m, p.colours));
      j["path"] = path;
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*bench) {
      apply_alpha(bench_flags, bench_alpha);
      finalize(bench_flags);
      BenchPlan plan;
      plan.method = *parse_method(bench_flags.method);
      plan.params = bench_flags.params;
      plan.base_seed = bench_flags.seed;
      plan.runs = bench_runs;
      plan.k_values = bench_k;
      plan.jobs = bench_jobs;
      for (Puzzle& p : load_fixtures(bench_fixtures)) {
        if (!bench_names.empty() && std::find(bench_names.begin(), bench_names.end(), p.name) == bench_names.end())
          continue;
        plan.puzzles.push_back(std::move(p));
      }
      if (!bench_names.empty() && plan.puzzles.size() != bench_names.size())
        throw PuzzleError(ErrorCode::fixture_corrupt, "some --puzzle names are not in " + bench_fixtures);
      const auto records = run_benchmark(plan);
      const MedianRule rule = parse_median(bench_median);
      if (bench_out.empty()) {
        write_records(std::cout, records);
      } else {
        print_summary(write_benchmark(bench_out, records, rule));
      }
      return 0;
    }

    if (*levels) {
      const LevelReport report = identify_levels(load_fixtures(levels_fixtures), levels_budget);
      for (const FixtureOptima& f : report.fixtures) {
        std::cout << f.name << " d=" << f.d << " optima(k=1..";
        std::cout << f.optima.size() << ")=";
        for (std::size_t k = 0; k < f.optima.size(); ++k)
          std::cout << (k ? "," : "") << (f.optima[k] ? std::to_string(*f.optima[k]) : "-");
        std::cout << " level=" << f.label.value_or("?") << '\n';
      }
      for (const DimensionAssignment& a : report.dimensions)
        std::cout << "d=" << a.d << ": " << (a.consistent ? "consistent" : "INCONSISTENT") << ": " << a.message
                  << '\n';
      if (!report.consistent()) {
        std::cerr << "error: no-consistent-assignment\n";
        return kExitInconsistent;
      }
      return 0;
    }

    if (*summarize_cmd) {
      std::ifstream in(summary_records, std::ios::binary);
      if (!in) throw PuzzleError(ErrorCode::io_error, "cannot open " + summary_records);
      const auto rows = summarize(read_records(in), parse_median(summary_median));
      print_summary(rows);
      if (!summary_out.empty()) {
        std::ofstream out(summary_out, std::ios::binary);
        if (!out) throw PuzzleError(ErrorCode::io_error, "cannot write " + summary_out);
        write_summary(out, rows);
      }
      return 0;
    }

    if (*sweep) {
      finalize(sweep_flags);
      Puzzle p = load_puzzle(sweep_file);
      if (p.name.empty()) p.name = std::filesystem::path(sweep_file).stem().string();
      if (sweep_k) p = p.with_k(*sweep_k);
      std::cout << "zipf_c,runs,success_rate,min,max,median\n";
      for (double c : sweep_c) {
        MethodParams params = sweep_flags.params;
        params.ea.zipf_c = c;
        std::vector<RunRecord> records;
        for (int r = 0; r < sweep_runs; ++r)
          records.push_back(run_one(Method::ea, p, r, sweep_flags.seed + static_cast<std::uint64_t>(r), params).record);
        const SummaryRow s = summarize(records).front();
        std::cout << c << ',' << s.runs << ',' << s.success_rate << ',' << (s.min ? std::to_string(*s.min) : "")
                  << ',' << (s.max ? std::to_string(*s.max) : "") << ',';
        if (s.median) std::cout << *s.median;
        std::cout << '\n';
      }
      return 0;
    }

    if (*serve) {
      ServiceOptions options;
      options.hint_cpu_seconds = serve_hint_cpu;
      PlayService service(load_fixtures(serve_fixtures), options);
      httplib::Server server;
      service.mount(server, serve_static);
      std::cerr << "listening on " << serve_host << ':' << serve_port << '\n';
      if (!server.listen(serve_host, serve_port)) {
        std::cerr << "error: cannot listen on " << serve_host << ':' << serve_port << '\n';
        return kExitIo;
      }
      return 0;
    }
  } catch (const PuzzleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::no_consistent_assignment: return kExitInconsistent;
      case ErrorCode::fixture_corrupt:
      case ErrorCode::io_error:
      case ErrorCode::parse_error: return kExitIo;
      default: return kExitUsage;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
