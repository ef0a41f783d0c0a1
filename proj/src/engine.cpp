#include "htga/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "htga/math.hpp"

namespace htga {

namespace {

// Mutation phase, offspring-by-offspring. Fitness needs only the one-bit
// count, so mutants are scored from their flip positions without being
// materialized; the winner's flips are kept, split by the parent bit value.
int64_t naive_mutation_phase(const BitString& x, const Objective& obj, uint32_t ell,
                             uint64_t lambda, Rng& rng, GaWorkspace& ws) {
  const uint32_t n = x.size(), m = x.ones();
  detail::StreamingArgmax argmax;
  ws.winner_flip_ones.clear();
  ws.winner_flip_zeros.clear();
  int64_t winner_fitness = 0;
  for (uint64_t i = 0; i < lambda; ++i) {
    sample_distinct(n, ell, rng, ws.positions);
    uint32_t h = 0;
    for (uint32_t pos : ws.positions) h += x.test(pos);
    int64_t fit = obj.from_ones(m + ell - 2 * h);
    if (argmax.offer(fit, rng)) {
      winner_fitness = fit;
      ws.winner_flip_ones.clear();
      ws.winner_flip_zeros.clear();
      for (uint32_t pos : ws.positions) {
        (x.test(pos) ? ws.winner_flip_ones : ws.winner_flip_zeros).push_back(pos);
      }
    }
  }
  return winner_fitness;
}

// Crossover phase, offspring-by-offspring. Offspring differ from the parent
// only on winner flip positions taken with probability c, so each one is a
// subset of those positions; the winning subset is returned in ws.taken_b.
int64_t naive_crossover_phase(const BitString& x, const Objective& obj, double c,
                              uint64_t lambda, Rng& rng, GaWorkspace& ws) {
  const uint32_t m = x.ones();
  detail::StreamingArgmax argmax;
  ws.taken_b.clear();
  int64_t winner_fitness = obj.from_ones(m);
  for (uint64_t i = 0; i < lambda; ++i) {
    ws.taken_a.clear();
    uint32_t om = m;
    for (uint32_t pos : ws.winner_flip_ones) {
      if (rng.bernoulli(c)) {
        ws.taken_a.push_back(pos);
        --om;
      }
    }
    for (uint32_t pos : ws.winner_flip_zeros) {
      if (rng.bernoulli(c)) {
        ws.taken_a.push_back(pos);
        ++om;
      }
    }
    int64_t fit = obj.from_ones(om);
    if (argmax.offer(fit, rng)) {
      winner_fitness = fit;
      ws.taken_b.swap(ws.taken_a);
    }
  }
  return winner_fitness;
}

// Bin(count, c) probability table; linear-space values from a log recurrence.
void binomial_pmf(uint32_t count, double c, std::vector<double>& out) {
  out.assign(count + 1, 0.0);
  if (c <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (c >= 1.0) {
    out[count] = 1.0;
    return;
  }
  double step = std::log(c) - std::log1p(-c);
  double lp = count * std::log1p(-c);
  for (uint32_t b = 0; b <= count; ++b) {
    out[b] = std::exp(lp);
    if (b < count) lp += std::log((double)(count - b) / (b + 1)) + step;
  }
}

// Draws the index of the maximum of `lambda` iid draws from the distribution
// whose (unnormalized) weights are given in fitness-sorted order:
// P[max <= level j] = (cum_j / total)^lambda, inverted with one uniform.
size_t sample_argmax_level(const std::vector<double>& cum, double lambda, Rng& rng) {
  double total = cum.back();
  double target = total * std::exp(std::log(rng.unit_open()) / lambda);
  size_t lo = 0, hi = cum.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (cum[mid] < target) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Sorts values [0..count) by the fitness of the om they map to and builds the
// cumulative weight vector in ws.cum; returns the sorted index order.
template <typename OmOf>
std::vector<uint32_t> fitness_order(uint32_t count, const std::vector<double>& weight,
                                    const Objective& obj, OmOf om_of, GaWorkspace& ws) {
  std::vector<uint32_t> order(count);
  for (uint32_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return obj.from_ones(om_of(a)) < obj.from_ones(om_of(b));
  });
  ws.cum.resize(count);
  double acc = 0.0;
  for (uint32_t i = 0; i < count; ++i) {
    acc += weight[order[i]];
    ws.cum[i] = acc;
  }
  return order;
}

// Mutation phase without materializing offspring: the winner's flipped-one
// count h is drawn from the distribution of the hypergeometric maximum, then
// a uniformly random mutant with that h is reconstructed.
int64_t aggregated_mutation_phase(const BitString& x, const Objective& obj, uint32_t ell,
                                  double lambda, Rng& rng, GaWorkspace& ws) {
  const uint32_t n = x.size(), m = x.ones();
  const uint32_t h_lo = (uint32_t)std::max<int64_t>(0, (int64_t)ell - (n - m));
  const uint32_t h_hi = std::min(ell, m);
  const uint32_t width = h_hi - h_lo + 1;

  ws.prob_a.assign(width, 0.0);
  double log_total = log_choose(n, ell);
  for (uint32_t i = 0; i < width; ++i) {
    uint32_t h = h_lo + i;
    ws.prob_a[i] =
        std::exp(log_choose(m, h) + log_choose((double)n - m, (double)ell - h) - log_total);
  }
  auto order = fitness_order(
      width, ws.prob_a, obj, [&](uint32_t i) { return m + ell - 2 * (h_lo + i); }, ws);
  uint32_t h = h_lo + order[sample_argmax_level(ws.cum, lambda, rng)];

  x.collect_positions(true, ws.ones_pos);
  x.collect_positions(false, ws.zeros_pos);
  ws.winner_flip_ones.clear();
  ws.winner_flip_zeros.clear();
  sample_distinct(m, h, rng, ws.index_buf);
  for (uint32_t i : ws.index_buf) ws.winner_flip_ones.push_back(ws.ones_pos[i]);
  sample_distinct(n - m, ell - h, rng, ws.index_buf);
  for (uint32_t i : ws.index_buf) ws.winner_flip_zeros.push_back(ws.zeros_pos[i]);
  return obj.from_ones(m + ell - 2 * h);
}

// Crossover phase without materializing offspring. With b1 taken zero-flips
// and b2 taken one-flips an offspring sits at om = m + b1 - b2; the winner's
// om is drawn from the maximum distribution over the (b1, b2) convolution.
int64_t aggregated_crossover_phase(const BitString& x, const Objective& obj, double c,
                                   double lambda, Rng& rng, GaWorkspace& ws) {
  const uint32_t m = x.ones();
  const auto d1 = (uint32_t)ws.winner_flip_ones.size();
  const auto d0 = (uint32_t)ws.winner_flip_zeros.size();

  binomial_pmf(d0, c, ws.prob_a);  // b1: zero-flips taken
  binomial_pmf(d1, c, ws.prob_b);  // b2: one-flips taken
  ws.conv.assign(d0 + d1 + 1, 0.0);
  for (uint32_t b2 = 0; b2 <= d1; ++b2) {
    if (ws.prob_b[b2] == 0.0) continue;
    for (uint32_t b1 = 0; b1 <= d0; ++b1) {
      ws.conv[b1 - b2 + d1] += ws.prob_a[b1] * ws.prob_b[b2];
    }
  }
  auto order = fitness_order(
      d0 + d1 + 1, ws.conv, obj, [&](uint32_t off) { return m + off - d1; }, ws);
  uint32_t offset = order[sample_argmax_level(ws.cum, lambda, rng)];

  // Composition (b1, b2) of the winner, conditional on its offset diagonal.
  int64_t diff = (int64_t)offset - d1;  // b1 - b2
  auto b1_lo = (uint32_t)std::max<int64_t>(0, diff);
  auto b1_hi = (uint32_t)std::min<int64_t>(d0, (int64_t)d1 + diff);
  double u = rng.unit() * ws.conv[offset];
  uint32_t b1 = b1_hi;
  for (uint32_t i = b1_lo; i <= b1_hi; ++i) {
    u -= ws.prob_a[i] * ws.prob_b[(uint32_t)((int64_t)i - diff)];
    if (u <= 0.0) {
      b1 = i;
      break;
    }
  }
  auto b2 = (uint32_t)((int64_t)b1 - diff);

  ws.taken_b.clear();
  sample_distinct(d0, b1, rng, ws.index_buf);
  for (uint32_t i : ws.index_buf) ws.taken_b.push_back(ws.winner_flip_zeros[i]);
  sample_distinct(d1, b2, rng, ws.index_buf);
  for (uint32_t i : ws.index_buf) ws.taken_b.push_back(ws.winner_flip_ones[i]);
  return obj.from_ones(m + b1 - b2);
}

}  // namespace

IterationOutcome ga_iteration(BitString& x, const Objective& obj, uint32_t ell, double c,
                              uint64_t lambda_m, uint64_t lambda_c, uint64_t max_evals,
                              Rng& rng, GaWorkspace& ws, const RunOptions& opt) {
  IterationOutcome out;
  out.draw.ell = ell;
  out.draw.lambda = lambda_m;
  if (lambda_m > max_evals || lambda_c > max_evals - lambda_m) {
    // Not enough budget for the full iteration: the evaluations are spent,
    // the offspring cannot be accepted, so the state stays untouched.
    out.evals = max_evals;
    out.aborted = true;
    return out;
  }
  out.evals = lambda_m + lambda_c;

  const bool aggregate = std::max(lambda_m, lambda_c) > opt.naive_lambda_limit;
  if (aggregate) {
    aggregated_mutation_phase(x, obj, ell, (double)lambda_m, rng, ws);
  } else {
    naive_mutation_phase(x, obj, ell, lambda_m, rng, ws);
  }
  int64_t y_fitness = aggregate
                          ? aggregated_crossover_phase(x, obj, c, (double)lambda_c, rng, ws)
                          : naive_crossover_phase(x, obj, c, lambda_c, rng, ws);
  if (y_fitness >= obj.value(x)) {
    x.flip_all(ws.taken_b);
    assert(obj.value(x) == y_fitness);
  }
  return out;
}

namespace {

template <typename Iterate>
RunResult run_loop(const Objective& obj, BitString x, uint64_t budget, int64_t target,
                   const RunOptions& opt, Iterate&& iterate) {
  RunResult result;
  target = std::min(target, obj.max_value());
  int64_t fitness = obj.value(x);
  result.best_fitness = fitness;
  if (fitness >= target) {
    result.success = true;
    return result;
  }
  GaWorkspace ws;
  while (result.evaluations < budget) {
    IterationOutcome out = iterate(x, budget - result.evaluations, ws);
    result.evaluations += out.evals;
    if (out.aborted) break;
    ++result.iterations;
    int64_t now = obj.value(x);
    assert(now >= fitness);
    fitness = now;
    result.best_fitness = fitness;
    if (opt.observer && *opt.observer) (*opt.observer)(out.draw, out.evals, fitness);
    if (fitness >= target) {
      result.success = true;
      break;
    }
  }
  return result;
}

}  // namespace

HeavyTailedGa::HeavyTailedGa(Objective obj, HyperParams hp)
    : obj_(obj), hp_(hp), law_s_(hp.beta_s, hp.u_s), law_lambda_(hp.beta_lambda, hp.u_lambda) {
  hp_.validate();
}

IterationOutcome HeavyTailedGa::iterate(BitString& x, uint64_t max_evals, Rng& rng,
                                        GaWorkspace& ws, const RunOptions& opt) const {
  uint64_t s = law_s_.sample(rng);
  double rate = std::min(1.0, std::sqrt((double)s / obj_.n));
  uint64_t lambda = law_lambda_.sample(rng);
  uint32_t ell = sample_binomial(obj_.n, rate, rng);
  IterationOutcome out = ga_iteration(x, obj_, ell, rate, lambda, lambda, max_evals, rng, ws, opt);
  out.draw.s = s;
  return out;
}

RunResult HeavyTailedGa::run(const BitString& start, uint64_t budget, Rng& rng,
                             const RunOptions& opt) const {
  return run_loop(obj_, start, budget, opt.target_fitness, opt,
                  [&](BitString& x, uint64_t max_evals, GaWorkspace& ws) {
                    return iterate(x, max_evals, rng, ws, opt);
                  });
}

StaticGa::StaticGa(Objective obj, StaticParams sp) : obj_(obj), sp_(sp) { sp_.validate(); }

IterationOutcome StaticGa::iterate(BitString& x, uint64_t max_evals, Rng& rng, GaWorkspace& ws,
                                   const RunOptions& opt) const {
  uint32_t ell = sample_binomial(obj_.n, sp_.p, rng);
  return ga_iteration(x, obj_, ell, sp_.c, sp_.lambda_m, sp_.lambda_c, max_evals, rng, ws, opt);
}

RunResult StaticGa::run(const BitString& start, uint64_t budget, Rng& rng,
                        const RunOptions& opt) const {
  return run_loop(obj_, start, budget, opt.target_fitness, opt,
                  [&](BitString& x, uint64_t max_evals, GaWorkspace& ws) {
                    return iterate(x, max_evals, rng, ws, opt);
                  });
}

OnePlusOneEa::OnePlusOneEa(Objective obj, MutationSpec mut) : obj_(obj), mut_(mut) {
  if (mut_.kind == MutationSpec::Kind::heavy_tailed) {
    rate_law_.emplace_back(mut_.beta, std::max<uint64_t>(1, obj_.n / 2));
  }
}

RunResult OnePlusOneEa::run(const BitString& start, uint64_t budget, Rng& rng,
                            const RunOptions& opt) const {
  return run_loop(obj_, start, budget, opt.target_fitness, opt,
                  [&](BitString& x, uint64_t max_evals, GaWorkspace& ws) {
                    IterationOutcome out;
                    out.evals = 1;
                    if (max_evals < 1) {
                      out.aborted = true;
                      out.evals = 0;
                      return out;
                    }
                    double rate = mut_.kind == MutationSpec::Kind::standard_rate
                                      ? mut_.chi / obj_.n
                                      : (double)rate_law_[0].sample(rng) / obj_.n;
                    uint32_t ell = sample_binomial(obj_.n, rate, rng);
                    out.draw.ell = ell;
                    sample_distinct(obj_.n, ell, rng, ws.positions);
                    uint32_t h = 0;
                    for (uint32_t pos : ws.positions) h += x.test(pos);
                    uint32_t om = x.ones() + ell - 2 * h;
                    if (obj_.from_ones(om) >= obj_.value(x)) x.flip_all(ws.positions);
                    return out;
                  });
}

RunResult run_heavy_tailed(const JumpParams& params, const HyperParams& hp,
                           const BitString& start, uint64_t budget, Rng& rng,
                           const RunOptions& opt) {
  return HeavyTailedGa(Objective::jump(params), hp).run(start, budget, rng, opt);
}

RunResult run_static(const JumpParams& params, const StaticParams& sp, const BitString& start,
                     uint64_t budget, Rng& rng, const RunOptions& opt) {
  return StaticGa(Objective::jump(params), sp).run(start, budget, rng, opt);
}

RunResult run_one_plus_one(const JumpParams& params, const MutationSpec& mut,
                           const BitString& start, uint64_t budget, Rng& rng,
                           const RunOptions& opt) {
  return OnePlusOneEa(Objective::jump(params), mut).run(start, budget, rng, opt);
}

}  // namespace htga
