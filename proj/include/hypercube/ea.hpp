#pragma once

// Evolutionary search: a population of agents random-walks from the start.
// Each generation keeps the fittest 10% unchanged, resamples the rest with
// probability proportional to their selection force, and mutates every
// resampled agent with a Zipf-distributed number of move attempts.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "hypercube/core.hpp"
#include "hypercube/cpu_time.hpp"
#include "hypercube/oracle.hpp"
#include "hypercube/puzzle.hpp"
#include "hypercube/rng.hpp"

namespace hypercube {

/// 1 / (1 + mismatches). Reaches 1 exactly at the target.
inline double fitness(const Configuration& c, const Configuration& t) {
  return 1.0 / (1.0 + mismatch_distance(c, t));
}

/// The fitness formula as printed, 1 / (1 + L - mismatches). It peaks when
/// every ring is misplaced; kept only for audit runs.
inline double printed_fitness(const Configuration& c, const Configuration& t) {
  return 1.0 / (1.0 + static_cast<double>(c.size()) - mismatch_distance(c, t));
}

inline double selection_force(double fitness_value, int move_count, double alpha) {
  return alpha * fitness_value + (1.0 - alpha) / (1.0 + move_count);
}

/// Mutation-mode distribution: P(n) proportional to n^-c on {1..L}.
class ZipfSampler {
 public:
  ZipfSampler(double exponent, int support) : exponent_(exponent), support_(support) {
    if (!(exponent > 0.0) || support < 1)
      throw std::invalid_argument("zipf needs c > 0 and L >= 1");
    std::vector<double> weights(static_cast<std::size_t>(support));
    for (int n = 1; n <= support; ++n) weights[static_cast<std::size_t>(n - 1)] = std::pow(n, -exponent);
    norm_ = std::accumulate(weights.begin(), weights.end(), 0.0);
    dist_ = std::discrete_distribution<int>(weights.begin(), weights.end());
  }

  int operator()(Rng& rng) { return dist_(rng) + 1; }

  double probability(int n) const {
    if (n < 1 || n > support_) return 0.0;
    return std::pow(n, -exponent_) / norm_;
  }

  int support() const { return support_; }

 private:
  double exponent_;
  int support_;
  double norm_ = 1.0;
  std::discrete_distribution<int> dist_;
};

inline int zipf_sample(double c, int L, Rng& rng) { return ZipfSampler(c, L)(rng); }

struct Agent {
  Configuration config;
  std::vector<Move> moves;

  int move_count() const { return static_cast<int>(moves.size()); }
};

enum class FaceChoice {
  free_faces,  // uniform over the ring's free faces; blocked only if it has none
  any_face,    // uniform over all C(d,k) faces, blocked when the chosen one is occupied
};

/// Up to `attempts` relocation tries: pick a ring uniformly, pick a face
/// through it per `choice`, and slide to a uniformly chosen other vertex of
/// that face. Blocked attempts leave the agent untouched.
inline void mutate_agent(Agent& agent, const Hypercube& cube, int attempts, Rng& rng,
                         FaceChoice choice = FaceChoice::free_faces) {
  const auto rings = agent.config.size();
  if (rings == 0) return;
  std::uniform_int_distribution<std::size_t> pick_ring(0, rings - 1);
  std::uniform_int_distribution<std::size_t> pick_face(0, cube.faces_per_vertex() - 1);
  const int others = (1 << cube.face_dimension()) - 1;
  std::uniform_int_distribution<int> pick_slot(0, others - 1);
  std::vector<VertexMask> free_faces;
  free_faces.reserve(cube.faces_per_vertex());

  for (int a = 0; a < attempts; ++a) {
    const auto ring = static_cast<ColourId>(pick_ring(rng));
    const Vertex from = agent.config[ring];
    const VertexMask occupied = agent.config.occupied();
    VertexMask face = 0;
    if (choice == FaceChoice::any_face) {
      face = cube.faces_of(from)[pick_face(rng)];
      if (!Hypercube::is_free(face, from, occupied)) continue;
    } else {
      free_faces.clear();
      for (VertexMask f : cube.faces_of(from))
        if (Hypercube::is_free(f, from, occupied)) free_faces.push_back(f);
      if (free_faces.empty()) continue;
      face = free_faces[std::uniform_int_distribution<std::size_t>(0, free_faces.size() - 1)(rng)];
    }
    VertexMask rest = face & ~vertex_bit(from);
    for (int skip = pick_slot(rng); skip > 0; --skip) rest &= rest - 1;
    const auto to = static_cast<Vertex>(std::countr_zero(rest));
    agent.config = agent.config.relocated(ring, to);
    agent.moves.push_back(Move{ring, from, to});
  }
}

struct EAParams {
  int population = 1000;
  int generations = 1000;
  double zipf_c = 1.8;
  double alpha = 0.2;
  double elite_fraction = 0.1;
  std::uint64_t seed = 0;
  bool strict_paper_fitness = false;
  FaceChoice face_choice = FaceChoice::free_faces;
  double max_cpu_seconds = std::numeric_limits<double>::infinity();
  bool check_invariants = false;

  int elite_count() const { return static_cast<int>(std::floor(population * elite_fraction)); }

  void validate() const {
    if (population < 2) throw std::invalid_argument("population must be >= 2");
    if (generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (!(zipf_c > 0.0)) throw std::invalid_argument("zipf c must be > 0");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
    const int kappa = elite_count();
    if (kappa < 0 || kappa >= population) throw std::invalid_argument("elite count must be in [0, N)");
  }
};

enum class StochasticStatus { solved, exhausted };

inline const char* to_string(StochasticStatus s) {
  return s == StochasticStatus::solved ? "solved" : "exhausted";
}

struct EAResult {
  StochasticStatus status = StochasticStatus::exhausted;
  std::optional<int> best_moves;
  std::optional<std::vector<Move>> best_path;
  int generations_used = 0;
  double elapsed = 0.0;
  bool timed_out = false;
};

struct GenerationStats {
  int generation = 0;
  std::size_t population = 0;
  int elites = 0;
  double best_fitness = 0.0;
};

inline EAResult evolve(const Puzzle& p, const EAParams& params,
                       const std::function<void(const GenerationStats&)>& observer = {}) {
  params.validate();
  CpuStopwatch clock;
  const Hypercube cube = p.cube();
  Rng rng = make_rng(params.seed);
  ZipfSampler modes(params.zipf_c, static_cast<int>(p.rings()));
  const auto N = static_cast<std::size_t>(params.population);
  const auto kappa = static_cast<std::size_t>(params.elite_count());

  auto score = [&](const Configuration& c) {
    return params.strict_paper_fitness ? printed_fitness(c, p.target) : fitness(c, p.target);
  };

  std::vector<Agent> population(N, Agent{p.start, {}});
  std::vector<double> fit(N);
  std::vector<double> force(N);
  std::vector<std::size_t> order(N);
  EAResult result;

  for (int t = 0;; ++t) {
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < N; ++i) {
      fit[i] = score(population[i].config);
      if (population[i].config == p.target &&
          (!winner || population[i].move_count() < population[*winner].move_count()))
        winner = i;
    }
    if (params.check_invariants)
      for (const Agent& a : population)
        if (replay(p.start, a.moves, cube) != a.config)
          throw std::logic_error("agent move log does not replay to its configuration");
    if (observer)
      observer({t, population.size(), static_cast<int>(kappa), *std::max_element(fit.begin(), fit.end())});

    result.generations_used = t;
    if (winner) {
      result.status = StochasticStatus::solved;
      result.best_moves = population[*winner].move_count();
      result.best_path = population[*winner].moves;
      break;
    }
    if (t >= params.generations) break;
    if (clock.elapsed() > params.max_cpu_seconds) {
      result.timed_out = true;
      break;
    }

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
    for (std::size_t i = 0; i < N; ++i)
      force[i] = selection_force(fit[i], population[i].move_count(), params.alpha);
    std::discrete_distribution<std::size_t> select(force.begin(), force.end());

    std::vector<Agent> next;
    next.reserve(N);
    for (std::size_t e = 0; e < kappa; ++e) next.push_back(population[order[e]]);
    for (std::size_t s = kappa; s < N; ++s) {
      Agent child = population[select(rng)];
      mutate_agent(child, cube, modes(rng), rng, params.face_choice);
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  result.elapsed = clock.elapsed();
  return result;
}

}  // namespace hypercube
