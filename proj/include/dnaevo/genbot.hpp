#pragma once

// GenBot: a genetic algorithm that evolves groups of synthetic accounts whose
// LCS curve mimics the curve of a target (legitimate) group.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/lcs_engine.hpp"
#include "dnaevo/rng.hpp"

namespace dnaevo {

/// How LCS curves become distributions for the fitness. `anchored` keeps the
/// curve's height (see anchored_distribution); `shape` normalizes it away.
enum class CurveNormalization { anchored, shape };

inline const char* to_string(CurveNormalization n) { return n == CurveNormalization::anchored ? "anchored" : "shape"; }

inline CurveNormalization parse_normalization(std::string_view text) {
  if (text == "anchored") return CurveNormalization::anchored;
  if (text == "shape") return CurveNormalization::shape;
  fail_config("unknown curve normalization '" + std::string(text) + "', expected anchored or shape");
}

inline CurveDistribution curve_distribution(std::span<const double> values, CurveNormalization mode,
                                            std::size_t seq_len, double epsilon) {
  return mode == CurveNormalization::anchored ? anchored_distribution(values, seq_len, epsilon)
                                              : curve_to_distribution(values, epsilon);
}

struct GaConfig {
  std::size_t pop_size = 30;
  std::size_t max_gen = 20'000;
  double mut_prob = 0.0002;
  std::size_t num_urco = 2;
  std::size_t num_uco = 12;
  std::size_t group_size = 0;  // U: members per individual
  std::size_t seq_len = 0;     // T: bases per member
  std::uint64_t rng_seed = 1;
  double epsilon = kDefaultSmoothing;
  CurveNormalization normalization = CurveNormalization::anchored;
  // Worker threads for fitness evaluation. Results do not depend on it.
  std::size_t threads = 1;

  void validate() const {
    if (pop_size < 2) fail_config("pop_size must be at least 2");
    if (!(mut_prob > 0.0 && mut_prob < 1.0)) fail_config("mut_prob must lie in (0, 1)");
    if (seq_len < 2) fail_config("seq_len must be at least 2");
    if (group_size < 2) fail_config("group_size must be at least 2");
    if (!(epsilon > 0.0)) fail_config("epsilon must be positive");
    if (threads == 0) fail_config("threads must be at least 1");
  }
};

/// Base roles for the biased mutation: `favoured` is the tweet base that C/T
/// mutate into, `others` are the two bases it can mutate back to.
struct MutationBases {
  char favoured = 'A';
  std::array<char, 2> others{'C', 'T'};

  static MutationBases from(const Alphabet& alphabet) {
    return {alphabet.base_for("tweet"), {alphabet.base_for("reply"), alphabet.base_for("retweet")}};
  }
};

struct Individual {
  Group group;
  double fitness = 0.0;
};

struct Population {
  std::vector<Individual> individuals;
  std::size_t generation = 0;

  std::size_t size() const noexcept { return individuals.size(); }
  double best_fitness() const {
    double best = individuals.front().fitness;
    for (const auto& ind : individuals) best = std::min(best, ind.fitness);
    return best;
  }
  double mean_fitness() const {
    double sum = 0.0;
    for (const auto& ind : individuals) sum += ind.fitness;
    return sum / static_cast<double>(individuals.size());
  }
  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t j = 1; j < individuals.size(); ++j)
      if (individuals[j].fitness < individuals[best].fitness) best = j;
    return best;
  }
};

struct RunTrace {
  std::vector<double> best;  // index g = generation g, 0 is the initial population
  std::vector<double> mean;
  Population final_population;
  std::size_t evaluations = 0;
  std::array<std::size_t, 3> accepted{0, 0, 0};  // mutation, group crossover, user crossover
  double elapsed_seconds = 0.0;
};

/// Scores groups against a fixed target curve. Smaller is better.
class Fitness {
 public:
  Fitness(const LcsCurve& target, double epsilon, CurveNormalization mode, std::size_t seq_len)
      : group_size_(target.group_size),
        seq_len_(seq_len),
        epsilon_(epsilon),
        mode_(mode),
        target_(distribution(target.values())) {}

  double operator()(const Group& g) const { return distance(lcs_curve(g)); }

  double distance(const LcsCurve& curve) const {
    if (curve.group_size != group_size_)
      fail_input("group has " + std::to_string(curve.group_size) + " members, target curve expects " +
                 std::to_string(group_size_));
    return distance(curve.values());
  }

  /// Distance of an arbitrary real-valued curve (e.g. a population average).
  double distance(const std::vector<double>& values) const { return kl_distance(distribution(values), target_); }

  std::size_t group_size() const noexcept { return group_size_; }

 private:
  CurveDistribution distribution(const std::vector<double>& values) const {
    return curve_distribution(values, mode_, seq_len_, epsilon_);
  }

  std::size_t group_size_;
  std::size_t seq_len_;
  double epsilon_;
  CurveNormalization mode_;
  CurveDistribution target_;
};

/// KL distance between the LCS curve of `g` and `target_curve`. Anchored
/// normalization uses the longest member of `g` as the sequence length.
inline double fit(const Group& g, const LcsCurve& target_curve, double epsilon = kDefaultSmoothing,
                  CurveNormalization mode = CurveNormalization::anchored) {
  std::size_t len = 0;
  for (const auto& m : g.members) len = std::max(len, m.size());
  return Fitness(target_curve, epsilon, mode, len)(g);
}

/// Mutates one group in place: each position mutates with probability
/// `prob`. A mutating C or T becomes A; a mutating A becomes C or T with
/// equal probability, decided by a second draw. Bases outside those roles
/// never change. One draw per position, plus one per mutating A.
/// Returns the number of changed positions.
inline std::size_t mutate_group(Group& g, double prob, Rng& rng, const MutationBases& bases = {}) {
  std::size_t changed = 0;
  for (auto& member : g.members) {
    for (char& c : member) {
      if (!(rng.uniform() < prob)) continue;
      if (c == bases.others[0] || c == bases.others[1]) {
        c = bases.favoured;
        ++changed;
      } else if (c == bases.favoured) {
        c = rng.uniform() < 0.5 ? bases.others[0] : bases.others[1];
        ++changed;
      }
    }
  }
  return changed;
}

/// Population-wide mutation sweep in individual, member, position order.
/// Fitness values are carried over unchanged.
inline Population mutate(const Population& p, double prob, Rng& rng, const MutationBases& bases = {}) {
  Population out = p;
  for (auto& ind : out.individuals) mutate_group(ind.group, prob, rng, bases);
  return out;
}

/// Group-level one-point crossover. The first `r` members come from one
/// parent and the rest from the other; 1 <= r < U.
inline std::pair<Group, Group> gco(const Group& gx, const Group& gy, std::size_t r) {
  if (gx.size() != gy.size()) fail_input("group crossover needs equally sized parents");
  if (r < 1 || r >= gx.size())
    fail_input("group crossover point " + std::to_string(r) + " outside [1, " + std::to_string(gx.size() - 1) + "]");
  Group xy = gx, yx = gy;
  for (std::size_t i = r; i < gx.size(); ++i) {
    xy[i] = gy[i];
    yx[i] = gx[i];
  }
  return {std::move(xy), std::move(yx)};
}

namespace detail {

inline void check_user_crossover(const DnaSequence& ux, const DnaSequence& uy, std::size_t r) {
  if (ux.size() != uy.size()) fail_input("user crossover needs equally long sequences");
  if (r < 1 || r >= ux.size())
    fail_input("user crossover point " + std::to_string(r) + " outside [1, " + std::to_string(ux.size() - 1) + "]");
}

}  // namespace detail

/// User-level one-point crossover: prefixes of length r are kept, tails swapped.
inline std::pair<DnaSequence, DnaSequence> uco(const DnaSequence& ux, const DnaSequence& uy, std::size_t r) {
  detail::check_user_crossover(ux, uy, r);
  std::string xy = ux.str(), yx = uy.str();
  std::copy(uy.begin() + static_cast<std::ptrdiff_t>(r), uy.end(), xy.begin() + static_cast<std::ptrdiff_t>(r));
  std::copy(ux.begin() + static_cast<std::ptrdiff_t>(r), ux.end(), yx.begin() + static_cast<std::ptrdiff_t>(r));
  return {DnaSequence(std::move(xy)), DnaSequence(std::move(yx))};
}

/// User-level reverse crossover. With L = |ux| and 1-based i:
///   xy[i] = ux[i] for i <= r, uy[L - i + 1] otherwise;
///   yx[i] = uy[L - i + 1] for i <= r, ux[i] otherwise.
inline std::pair<DnaSequence, DnaSequence> urco(const DnaSequence& ux, const DnaSequence& uy, std::size_t r) {
  detail::check_user_crossover(ux, uy, r);
  const std::size_t len = ux.size();
  std::string xy(len, '\0'), yx(len, '\0');
  for (std::size_t i = 0; i < len; ++i) {
    const char mirrored = uy[len - 1 - i];
    if (i < r) {
      xy[i] = ux[i];
      yx[i] = mirrored;
    } else {
      xy[i] = mirrored;
      yx[i] = ux[i];
    }
  }
  return {DnaSequence(std::move(xy)), DnaSequence(std::move(yx))};
}

/// Seed member: half favoured base, then a quarter of each other base
/// (1000 A, 500 C, 500 T at length 2000).
inline DnaSequence seed_sequence(std::size_t len, const MutationBases& bases = {}) {
  const std::size_t a = len / 2;
  const std::size_t c = len / 4;
  std::string s;
  s.reserve(len);
  s.append(a, bases.favoured);
  s.append(c, bases.others[0]);
  s.append(len - a - c, bases.others[1]);
  return DnaSequence(std::move(s));
}

inline Group seed_group(std::size_t group_size, std::size_t len, const MutationBases& bases = {}) {
  Group g;
  g.label = "seed";
  g.members.assign(group_size, seed_sequence(len, bases));
  return g;
}

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` threads. Each index is
/// handled exactly once; callers write results by index.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
}

inline std::pair<std::size_t, std::size_t> distinct_pair(Rng& rng, std::size_t n) {
  const std::size_t x = rng.index(n);
  std::size_t y = rng.index(n);
  while (y == x) y = rng.index(n);
  return {x, y};
}

}  // namespace detail

/// Called after each generation with (generation, best, mean).
using ProgressFn = std::function<void(std::size_t, double, double)>;

struct EvolveOptions {
  MutationBases bases{};
  /// Initial individual; seed_group(U, T) when empty.
  Group initial{};
  ProgressFn progress{};
};

/// Evolves a population towards the LCS curve of `target`.
///
/// Each generation runs three phases against the population as it stood at
/// the start of the phase:
///   1. mutate every individual; keep a mutant only if it scores strictly better;
///   2. for every slot k, cross two random parents at group level, apply
///      NUM-URCO reverse crossovers between random distinct members of the
///      offspring, and replace slot k on strict improvement;
///   3. for every slot k, apply NUM-UCO user crossovers to a copy of slot k
///      and replace it on strict improvement.
///
/// All random draws happen on the calling thread in this order: the mutation
/// sweep (individual, member, position); then per slot x, y, the group
/// crossover point, and per reverse crossover the member pair and point;
/// then per slot and per user crossover the member pair and point. Fitness
/// evaluation runs on `cfg.threads` threads without touching the generator,
/// so the result is identical for any thread count.
inline RunTrace evolve(const Group& target, const GaConfig& cfg, const EvolveOptions& opts = {}) {
  cfg.validate();
  if (target.size() != cfg.group_size)
    fail_config("group_size " + std::to_string(cfg.group_size) + " differs from target size " +
                std::to_string(target.size()));
  if (target.uniform_length() != cfg.seq_len)
    fail_config("seq_len " + std::to_string(cfg.seq_len) + " differs from target member length");

  const auto started = std::chrono::steady_clock::now();
  const std::size_t U = cfg.group_size, L = cfg.seq_len;
  const Fitness fitness(lcs_curve(target), cfg.epsilon, cfg.normalization, L);
  Rng rng(cfg.rng_seed);

  Group initial = opts.initial.members.empty() ? seed_group(U, L, opts.bases) : opts.initial;
  if (initial.size() != U || initial.uniform_length() != L)
    fail_config("initial individual does not have " + std::to_string(U) + " members of length " + std::to_string(L));

  RunTrace trace;
  Population& pop = trace.final_population;
  {
    const double v = fitness(initial);
    ++trace.evaluations;
    pop.individuals.assign(cfg.pop_size, Individual{initial, v});
  }
  trace.best.push_back(pop.best_fitness());
  trace.mean.push_back(pop.mean_fitness());

  const std::size_t P = cfg.pop_size;
  std::vector<Group> candidates(P);
  std::vector<char> evaluate(P);
  std::vector<double> scores(P);

  auto settle = [&](std::size_t phase) {
    detail::parallel_for(P, cfg.threads, [&](std::size_t k) {
      if (evaluate[k]) scores[k] = fitness(candidates[k]);
    });
    for (std::size_t k = 0; k < P; ++k) {
      if (!evaluate[k]) continue;
      ++trace.evaluations;
      if (scores[k] < pop.individuals[k].fitness) {
        pop.individuals[k] = Individual{std::move(candidates[k]), scores[k]};
        ++trace.accepted[phase];
      }
    }
  };

  for (std::size_t gen = 1; gen <= cfg.max_gen; ++gen) {
    // Phase 1: mutation. Unchanged mutants cannot improve and are not scored.
    for (std::size_t k = 0; k < P; ++k) {
      candidates[k] = pop.individuals[k].group;
      evaluate[k] = mutate_group(candidates[k], cfg.mut_prob, rng, opts.bases) > 0;
    }
    settle(0);

    // Phase 2: group crossover followed by reverse user crossovers.
    for (std::size_t k = 0; k < P; ++k) {
      const std::size_t x = rng.index(P);
      const std::size_t y = rng.index(P);
      const std::size_t r = static_cast<std::size_t>(rng.uniform_int(1, U - 1));
      Group child = gco(pop.individuals[x].group, pop.individuals[y].group, r).first;
      for (std::size_t t = 0; t < cfg.num_urco; ++t) {
        const auto [ux, uy] = detail::distinct_pair(rng, U);
        const std::size_t cut = static_cast<std::size_t>(rng.uniform_int(1, L - 1));
        auto [xy, yx] = urco(child[ux], child[uy], cut);
        child[ux] = std::move(xy);
        child[uy] = std::move(yx);
      }
      candidates[k] = std::move(child);
      evaluate[k] = 1;
    }
    settle(1);

    // Phase 3: user crossovers within each individual.
    for (std::size_t k = 0; k < P; ++k) {
      Group child = pop.individuals[k].group;
      for (std::size_t t = 0; t < cfg.num_uco; ++t) {
        const auto [ux, uy] = detail::distinct_pair(rng, U);
        const std::size_t cut = static_cast<std::size_t>(rng.uniform_int(1, L - 1));
        auto [xy, yx] = uco(child[ux], child[uy], cut);
        child[ux] = std::move(xy);
        child[uy] = std::move(yx);
      }
      candidates[k] = std::move(child);
      evaluate[k] = cfg.num_uco > 0;
    }
    settle(2);

    pop.generation = gen;
    trace.best.push_back(pop.best_fitness());
    trace.mean.push_back(pop.mean_fitness());
    if (opts.progress) opts.progress(gen, trace.best.back(), trace.mean.back());
  }

  trace.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

/// Point-to-point mean of the LCS curves of a population's groups. With
/// `best_only`, only individuals tied at the best fitness are averaged.
inline std::vector<double> average_curve(const Population& p, bool best_only = false, std::size_t threads = 1) {
  if (p.individuals.empty()) fail_input("empty population");
  std::vector<std::size_t> chosen;
  const double best = p.best_fitness();
  for (std::size_t j = 0; j < p.size(); ++j)
    if (!best_only || p.individuals[j].fitness == best) chosen.push_back(j);

  std::vector<LcsCurve> curves(chosen.size());
  detail::parallel_for(chosen.size(), threads,
                       [&](std::size_t i) { curves[i] = lcs_curve(p.individuals[chosen[i]].group); });
  std::vector<double> mean(curves.front().lengths.size(), 0.0);
  for (const auto& c : curves) {
    if (c.lengths.size() != mean.size()) fail_input("population mixes group sizes");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += static_cast<double>(c.lengths[i]);
  }
  for (double& v : mean) v /= static_cast<double>(curves.size());
  return mean;
}

}  // namespace dnaevo
