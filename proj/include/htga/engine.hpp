#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "htga/bitstring.hpp"
#include "htga/objective.hpp"
#include "htga/params.hpp"
#include "htga/power_law.hpp"
#include "htga/rng.hpp"

namespace htga {

/// Parameters drawn at the top of one heavy-tailed iteration.
struct IterationDraw {
  uint64_t s = 0;       // search radius (0 for algorithms without one)
  uint64_t lambda = 1;  // offspring population size of each phase
  uint32_t ell = 0;     // shared flip count of the mutation phase
};

struct RunResult {
  uint64_t iterations = 0;
  uint64_t evaluations = 0;
  bool success = false;
  int64_t best_fitness = 0;
  uint64_t seed = 0;
};

using IterationObserver =
    std::function<void(const IterationDraw&, uint64_t evals, int64_t fitness)>;

struct RunOptions {
  /// Stop once f(x) >= target; defaults to the objective's global maximum.
  int64_t target_fitness = std::numeric_limits<int64_t>::max();
  /// Populations larger than this are simulated through the aggregated
  /// winner-sampling path instead of offspring-by-offspring loops.
  uint64_t naive_lambda_limit = 4096;
  const IterationObserver* observer = nullptr;
};

/// Scratch buffers shared by the iteration paths of one run.
struct GaWorkspace {
  std::vector<uint32_t> positions, winner_flip_ones, winner_flip_zeros, taken_a, taken_b,
      ones_pos, zeros_pos, index_buf;
  std::vector<double> prob_a, prob_b, conv, cum;
};

struct IterationOutcome {
  IterationDraw draw;
  uint64_t evals = 0;
  bool aborted = false;  // ran out of budget mid-iteration; x untouched
};

/// One full (1+(lambda,lambda)) iteration at explicit parameters: lambda_m
/// mutants sharing one ell, mutation winner by fitness (uniform tie-break),
/// lambda_c biased-crossover offspring, elitist acceptance of the crossover
/// winner. Charges lambda_m + lambda_c evaluations; if that exceeds
/// `max_evals` the iteration is charged up to the budget and aborted.
IterationOutcome ga_iteration(BitString& x, const Objective& obj, uint32_t ell, double c,
                              uint64_t lambda_m, uint64_t lambda_c, uint64_t max_evals,
                              Rng& rng, GaWorkspace& ws, const RunOptions& opt);

/// Heavy-tailed (1+(lambda,lambda)) GA: s ~ pow(beta_s, u_s) sets
/// p = c = min(1, sqrt(s/n)), lambda ~ pow(beta_lambda, u_lambda), 2*lambda
/// evaluations per iteration.
class HeavyTailedGa {
 public:
  HeavyTailedGa(Objective obj, HyperParams hp);

  RunResult run(const BitString& start, uint64_t budget, Rng& rng,
                const RunOptions& opt = {}) const;

  /// One iteration with freshly drawn (s, lambda); exposed for tests.
  IterationOutcome iterate(BitString& x, uint64_t max_evals, Rng& rng, GaWorkspace& ws,
                           const RunOptions& opt = {}) const;

  const PowerLaw& radius_law() const { return law_s_; }
  const PowerLaw& lambda_law() const { return law_lambda_; }

 private:
  Objective obj_;
  HyperParams hp_;
  PowerLaw law_s_;
  PowerLaw law_lambda_;
};

/// Standard (1+(lambda,lambda)) GA with fixed p, c, lambda_m, lambda_c;
/// lambda_m + lambda_c evaluations per iteration.
class StaticGa {
 public:
  StaticGa(Objective obj, StaticParams sp);

  RunResult run(const BitString& start, uint64_t budget, Rng& rng,
                const RunOptions& opt = {}) const;

  IterationOutcome iterate(BitString& x, uint64_t max_evals, Rng& rng, GaWorkspace& ws,
                           const RunOptions& opt = {}) const;

 private:
  Objective obj_;
  StaticParams sp_;
};

/// (1+1) EA with standard-bit-mutation at a fixed or heavy-tailed rate;
/// one evaluation per iteration.
class OnePlusOneEa {
 public:
  OnePlusOneEa(Objective obj, MutationSpec mut);

  RunResult run(const BitString& start, uint64_t budget, Rng& rng,
                const RunOptions& opt = {}) const;

 private:
  Objective obj_;
  MutationSpec mut_;
  std::vector<PowerLaw> rate_law_;  // single element in heavy-tailed mode
};

// Free-function wrappers over the runner classes.
RunResult run_heavy_tailed(const JumpParams& params, const HyperParams& hp,
                           const BitString& start, uint64_t budget, Rng& rng,
                           const RunOptions& opt = {});
RunResult run_static(const JumpParams& params, const StaticParams& sp, const BitString& start,
                     uint64_t budget, Rng& rng, const RunOptions& opt = {});
RunResult run_one_plus_one(const JumpParams& params, const MutationSpec& mut,
                           const BitString& start, uint64_t budget, Rng& rng,
                           const RunOptions& opt = {});

namespace detail {
/// Streaming argmax index with uniform tie-breaking; used by the offspring
/// loops and unit-tested for uniformity directly.
class StreamingArgmax {
 public:
  /// Returns true when the candidate becomes the retained winner.
  bool offer(int64_t fitness, Rng& rng) {
    if (count_ == 0 || fitness > best_) {
      best_ = fitness;
      count_ = 1;
      return true;
    }
    if (fitness < best_) return false;
    ++count_;
    return rng.below(count_) == 0;
  }
  int64_t best() const { return best_; }

 private:
  int64_t best_ = 0;
  uint64_t count_ = 0;
};
}  // namespace detail

}  // namespace htga
