#pragma once

// Tabular weighted-walk search with rewards delayed to the end of an episode.
//
// A breadth-first sweep out of the target seeds weights 1, 1/2, 1/4, ... by
// layer. Each episode walks from the start, picking successors with
// probability proportional to their weight, and is cut off once it runs
// longer than the best path known so far. Afterwards every configuration
// (C, step c) on the walk is updated:
//
//   loss: w <- (1 - a) * w * decay^c
//   win:  w <- (1 - a)^c * w + a * decay^c
//
// The target keeps weight 1 throughout.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypercube/core.hpp"
#include "hypercube/cpu_time.hpp"
#include "hypercube/ea.hpp"
#include "hypercube/puzzle.hpp"
#include "hypercube/rng.hpp"

namespace hypercube {

class WeightTable {
 public:
  WeightTable(Configuration target, double default_weight)
      : target_(std::move(target)), default_weight_(default_weight) {
    weights_.emplace(target_, 1.0);
  }

  double get(const Configuration& c) const {
    auto it = weights_.find(c);
    return it == weights_.end() ? default_weight_ : it->second;
  }

  void set(const Configuration& c, double w) {
    if (c == target_) return;
    weights_[c] = w;
  }

  bool contains(const Configuration& c) const { return weights_.count(c) != 0; }
  std::size_t size() const { return weights_.size(); }
  double default_weight() const { return default_weight_; }
  const Configuration& target() const { return target_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [c, w] : weights_) fn(c, w);
  }

 private:
  Configuration target_;
  double default_weight_;
  std::unordered_map<Configuration, double, ConfigurationHash> weights_;
};

struct RLParams {
  int branch_count = 1000;
  int iterations = 1000;
  double learning_rate = 0.05;
  double decay = 0.95;
  double default_weight = 1e-3;
  std::uint64_t seed = 0;
  int episode_cap_initial = 100'000;
  double max_cpu_seconds = std::numeric_limits<double>::infinity();

  void validate() const {
    if (branch_count < 1) throw std::invalid_argument("branch count P must be >= 1");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate < 1.0))
      throw std::invalid_argument("learning rate must lie in (0, 1)");
    if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("decay must lie in (0, 1]");
    if (!(default_weight > 0.0)) throw std::invalid_argument("default weight must be > 0");
    if (episode_cap_initial < 1) throw std::invalid_argument("episode cap must be >= 1");
  }
};

/// Layered BFS out of the target: layer c gets weight 2^-c. Stops after the
/// layer during which at least `branch_count` configurations became weighted.
inline WeightTable seed_weights(const Puzzle& p, const Hypercube& cube, int branch_count,
                                double default_weight) {
  WeightTable table(p.target, default_weight);
  std::vector<Configuration> layer{p.target};
  double weight = 1.0;
  while (static_cast<int>(table.size()) < branch_count && !layer.empty()) {
    weight *= 0.5;
    std::vector<Configuration> next;
    for (const Configuration& c : layer) {
      for_each_move(c, cube, [&](const Move& m) {
        Configuration succ = c.relocated(m.colour, m.to);
        if (table.contains(succ)) return;
        table.set(succ, weight);
        next.push_back(std::move(succ));
      });
    }
    layer = std::move(next);
  }
  return table;
}

/// Weighted pick among the legal successors of c; nullopt at a dead end.
inline std::optional<Move> choose_successor(const Configuration& c, const Hypercube& cube,
                                            const WeightTable& w, Rng& rng) {
  std::vector<Move> moves;
  std::vector<double> cumulative;
  double total = 0.0;
  for_each_move(c, cube, [&](const Move& m) {
    total += w.get(c.relocated(m.colour, m.to));
    moves.push_back(m);
    cumulative.push_back(total);
  });
  if (moves.empty()) return std::nullopt;
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return moves[static_cast<std::size_t>(it - cumulative.begin())];
}

struct Episode {
  std::vector<std::pair<Configuration, int>> visited;  // (configuration, step) before each move
  std::vector<Move> moves;
  bool win = false;
};

/// One walk from the start. Runs while step <= limit; reaching the target
/// within the limit is a win, running past it or hitting a dead end a loss.
inline Episode run_episode(const Puzzle& p, const Hypercube& cube, const WeightTable& w, int limit,
                           Rng& rng) {
  Episode ep;
  Configuration current = p.start;
  int step = 0;
  while (current != p.target && step <= limit) {
    const auto move = choose_successor(current, cube, w, rng);
    if (!move) break;
    ep.visited.emplace_back(current, step);
    ep.moves.push_back(*move);
    current = current.relocated(move->colour, move->to);
    ++step;
  }
  ep.win = current == p.target && step <= limit;
  return ep;
}

/// Applies the delayed reward or punishment to every (C, c) on the walk.
/// Win updates are capped at 1, the target's weight.
inline void update_weights(WeightTable& w, const std::vector<std::pair<Configuration, int>>& visited,
                           bool win, double learning_rate, double decay) {
  for (const auto& [c, step] : visited) {
    const double old = w.get(c);
    const double discount = std::pow(decay, step);
    const double updated = win ? std::pow(1.0 - learning_rate, step) * old + learning_rate * discount
                               : (1.0 - learning_rate) * old * discount;
    w.set(c, std::min(updated, 1.0));
  }
}

struct RLResult {
  StochasticStatus status = StochasticStatus::exhausted;
  std::optional<int> best_moves;
  std::optional<std::vector<Move>> best_path;
  int episodes_run = 0;
  std::size_t seeded = 0;
  double elapsed = 0.0;
  bool timed_out = false;
};

inline RLResult rl_solve(const Puzzle& p, const RLParams& params,
                         const std::function<void(int episode, std::optional<int> best)>& observer = {}) {
  params.validate();
  CpuStopwatch clock;
  const Hypercube cube = p.cube();
  Rng rng = make_rng(params.seed);
  WeightTable weights = seed_weights(p, cube, params.branch_count, params.default_weight);

  RLResult result;
  result.seeded = weights.size();
  for (int i = 0; i < params.iterations; ++i) {
    if (clock.elapsed() > params.max_cpu_seconds) {
      result.timed_out = true;
      break;
    }
    const int limit = result.best_moves.value_or(params.episode_cap_initial);
    Episode ep = run_episode(p, cube, weights, limit, rng);
    update_weights(weights, ep.visited, ep.win, params.learning_rate, params.decay);
    ++result.episodes_run;
    if (ep.win && (!result.best_moves || static_cast<int>(ep.moves.size()) < *result.best_moves)) {
      result.best_moves = static_cast<int>(ep.moves.size());
      result.best_path = std::move(ep.moves);
      result.status = StochasticStatus::solved;
    }
    if (observer) observer(i, result.best_moves);
  }
  result.elapsed = clock.elapsed();
  return result;
}

}  // namespace hypercube
