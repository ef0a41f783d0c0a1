// Command-line front end: experiment runner, exact escape-probability
// evaluation, the full disturbed-parameter ratio table, hyperparameter
// sweeps, and a quick self-test.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "htga/exact.hpp"
#include "htga/harness.hpp"
#include "htga/power_law.hpp"
#include "htga/stats.hpp"

using namespace htga;

namespace {

std::vector<uint64_t> parse_u64_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  return file;
}

void print_summary(std::ostream& os, const ExperimentConfig& cfg, const SummaryStats& s) {
  os << summary_json(cfg, s) << "\n";
  if (s.wald_warning) {
    std::cerr << "warning: Wald identity gap " << s.wald_gap
              << " exceeds 5% at this trial count\n";
  }
}

// Minimal two-panel SVG rendering of the ratio curves (log2 vertical axis).
void write_ratio_svg(const std::string& path,
                     const std::vector<std::vector<ExactPoint>>& series) {
  std::ofstream svg(path);
  if (!svg) throw ConfigError("cannot open plot file '" + path + "'");
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const double width = 460, height = 420, margin = 45;

  auto panel = [&](double x0, double xmin, double xmax, double ymin_log2, double ymax_log2,
                   auto in_range) {
    svg << "<g transform=\"translate(" << x0 << ",0)\">\n";
    svg << "<rect x=\"" << margin << "\" y=\"10\" width=\"" << width - margin - 10
        << "\" height=\"" << height - margin - 10
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    auto sx = [&](double delta) {
      return margin + (delta - xmin) / (xmax - xmin) * (width - margin - 10);
    };
    auto sy = [&](double ratio) {
      double v = std::log2(ratio);
      return height - margin - (v - ymin_log2) / (ymax_log2 - ymin_log2) * (height - margin - 20);
    };
    for (size_t si = 0; si < series.size(); ++si) {
      svg << "<polyline fill=\"none\" stroke=\"" << colors[si % 4]
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& pt : series[si]) {
        if (!in_range(pt)) continue;
        svg << sx(pt.delta) << "," << sy(pt.ratio) << " ";
      }
      svg << "\"/>\n";
      svg << "<text x=\"" << margin + 8 << "\" y=\"" << 24 + 16 * si << "\" fill=\""
          << colors[si % 4] << "\" font-size=\"12\">k = " << series[si].front().k
          << "</text>\n";
    }
    for (double d = std::ceil(xmin); d <= xmax; d += 2.0) {
      svg << "<text x=\"" << sx(d) << "\" y=\"" << height - margin + 14
          << "\" font-size=\"10\" text-anchor=\"middle\">" << d << "</text>\n";
    }
    svg << "<text x=\"" << (margin + width - 10) / 2 << "\" y=\"" << height - 8
        << "\" font-size=\"11\" text-anchor=\"middle\">delta</text>\n";
    svg << "</g>\n";
  };

  double lo = 0, hi = 0;
  for (const auto& s : series) {
    for (const auto& pt : s) {
      lo = std::min(lo, std::log2(pt.ratio));
      hi = std::max(hi, std::log2(pt.ratio));
    }
  }
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * width + 20
      << "\" height=\"" << height << "\">\n";
  double xmin = 1e9, xmax = -1e9;
  for (const auto& s : series) {
    xmin = std::min(xmin, s.front().delta);
    xmax = std::max(xmax, s.back().delta);
  }
  panel(0, xmin, xmax, lo, hi, [](const ExactPoint&) { return true; });
  panel(width + 20, -2.5, 1.0, -1.0, 8.0, [](const ExactPoint& pt) {
    return pt.delta >= -2.5 && pt.delta <= 1.0 && pt.ratio >= 0.5 && pt.ratio <= 256.0;
  });
  svg << "</svg>\n";
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    failures += !ok;
  };
  check(std::fabs(normalization(1.0, 2) - 2.0 / 3.0) < 1e-12, "normalization pow(1,2)");
  check(std::fabs(PowerLaw(0.0, 3).expectation() - 2.0) < 1e-12, "uniform expectation");
  {
    Rng rng(1);
    PowerLaw law(2.1, 1ULL << 40);
    bool in_range = true;
    for (int i = 0; i < 10000; ++i) {
      uint64_t v = law.sample(rng);
      in_range = in_range && v >= 1 && v <= (1ULL << 40);
    }
    check(in_range, "rejection sampler support");
  }
  {
    auto points = runtime_ratio_sweep(1 << 20, 4);
    bool found = false;
    for (const auto& pt : points) {
      if (pt.delta == 0.5) found = std::fabs(pt.ratio / 2.550 - 1.0) < 2e-3;
    }
    check(found, "ratio table spot value (k = 4, delta = 0.5)");
  }
  {
    Rng rng(2);
    const uint32_t n = 12, k = 2;
    JumpParams params(n, k);
    double rate = std::sqrt((double)k / n);
    double p_exact = std::exp(escape_log_p_static(n, k, rate, rate, 6, 6));
    BitString x0 = local_optimum_start(params, rng);
    GaWorkspace ws;
    RunOptions opt;
    int escapes = 0;
    const int iters = 100000;
    for (int i = 0; i < iters; ++i) {
      BitString x = x0;
      auto ell = sample_binomial(n, rate, rng);
      ga_iteration(x, Objective::jump(params), ell, rate, 6, 6, ~0ULL, rng, ws, opt);
      escapes += x.all_ones();
    }
    double freq = (double)escapes / iters;
    double sigma = std::sqrt(p_exact * (1 - p_exact) / iters);
    check(std::fabs(freq - p_exact) < 4 * sigma, "escape frequency vs exact formula");
  }
  std::cout << (failures ? "selftest FAILED\n" : "selftest passed\n");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed (1+(lambda,lambda)) GA toolkit for OneMax/Jump benchmarks"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run a seeded experiment from a config file or flags");
  std::string run_config, run_out, run_json, run_algorithm, run_start, run_preset;
  uint64_t f_n = 0, f_k = 0, f_us = 0, f_ul = 0, f_lm = 0, f_lc = 0, f_trials = 0, f_budget = 0,
           f_seed = 0, f_workers = 0, f_target = 0;
  double f_bs = 0, f_bl = 0, f_p = -1, f_c = -1, f_chi = 0, f_beta = 0;
  run->add_option("--config", run_config, "Config file (key = value, schema htga-config-v1)");
  run->add_option("--algorithm", run_algorithm,
                  "heavy_tailed | static | one_plus_one | one_plus_one_heavy");
  run->add_option("--start", run_start, "random | local_optimum | all_ones");
  run->add_option("--n", f_n, "Problem dimension");
  run->add_option("--k", f_k, "Jump size (0 = onemax)");
  run->add_option("--beta-s", f_bs, "Search-radius exponent");
  run->add_option("--u-s", f_us, "Search-radius upper limit");
  run->add_option("--beta-lambda", f_bl, "Population-size exponent");
  run->add_option("--u-lambda", f_ul, "Population-size upper limit");
  run->add_option("--p", f_p, "Static mutation rate");
  run->add_option("--c", f_c, "Static crossover bias");
  run->add_option("--lm", f_lm, "Static mutation population size");
  run->add_option("--lc", f_lc, "Static crossover population size");
  run->add_option("--chi", f_chi, "(1+1) EA rate numerator chi/n");
  run->add_option("--beta", f_beta, "(1+1) EA heavy-tailed exponent");
  run->add_option("--trials", f_trials, "Number of independent trials");
  run->add_option("--budget", f_budget, "Fitness-evaluation budget per trial");
  run->add_option("--seed", f_seed, "Master seed (HTGA_SEED env is the fallback)");
  run->add_option("--workers", f_workers, "Worker threads");
  run->add_option("--target", f_target, "Stop at this fitness instead of the optimum");
  run->add_option("--preset", run_preset, "'recommended': beta_s=1.1, u_s=n, beta_lambda=2.1");
  run->add_option("--out", run_out, "Per-trial CSV path ('-' = stdout)");
  run->add_option("--json", run_json, "Summary JSON path ('-' = stdout)");

  // --- exact ---
  auto* exact = app.add_subcommand("exact", "Evaluate the exact escape probability");
  uint64_t e_n = 0, e_k = 0, e_lm = 0, e_lc = 0, e_us = 0, e_ul = 0;
  double e_p = -1, e_c = -1, e_delta = 0, e_bs = 0, e_bl = 0;
  bool e_heavy = false;
  exact->add_option("--n", e_n, "Problem dimension")->required();
  exact->add_option("--k", e_k, "Jump size")->required();
  exact->add_option("--p", e_p, "Mutation rate");
  exact->add_option("--c", e_c, "Crossover bias");
  exact->add_option("--lm", e_lm, "Mutation population size");
  exact->add_option("--lc", e_lc, "Crossover population size");
  exact->add_option("--delta", e_delta, "Rate perturbation exponent (alternative to --p/--c)");
  exact->add_flag("--heavy", e_heavy, "Heavy-tailed parameters instead of static ones");
  exact->add_option("--beta-s", e_bs, "Search-radius exponent (with --heavy)");
  exact->add_option("--u-s", e_us, "Search-radius upper limit (with --heavy)");
  exact->add_option("--beta-lambda", e_bl, "Population-size exponent (with --heavy)");
  exact->add_option("--u-lambda", e_ul, "Population-size upper limit (with --heavy)");

  // --- figure2 ---
  auto* fig = app.add_subcommand("figure2",
                                 "Emit the disturbed-parameter runtime-ratio table at n = 2^20");
  uint64_t g_n = 1 << 20;
  std::string g_k = "4,16,64", g_out, g_plot;
  fig->add_option("--n", g_n, "Problem dimension (default 2^20)");
  fig->add_option("--k", g_k, "Comma-separated jump sizes");
  fig->add_option("--out", g_out, "CSV path ('-' = stdout)");
  fig->add_option("--plot", g_plot, "Optional SVG plot path");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "Cross hyperparameter grids of the heavy-tailed GA");
  uint64_t s_n = 50, s_k = 2, s_trials = 100, s_budget = 10000000, s_seed = 1, s_workers = 1;
  std::string s_bs = "1.1", s_bl = "2.1", s_us, s_ul = "1048576", s_out, s_start = "random";
  sweep->add_option("--n", s_n, "Problem dimension");
  sweep->add_option("--k", s_k, "Jump size (0 = onemax)");
  sweep->add_option("--start", s_start, "random | local_optimum | all_ones");
  sweep->add_option("--beta-s", s_bs, "Comma-separated beta_s grid");
  sweep->add_option("--u-s", s_us, "Comma-separated u_s grid (default n)");
  sweep->add_option("--beta-lambda", s_bl, "Comma-separated beta_lambda grid");
  sweep->add_option("--u-lambda", s_ul, "Comma-separated u_lambda grid");
  sweep->add_option("--trials", s_trials, "Trials per grid point");
  sweep->add_option("--budget", s_budget, "Budget per trial");
  sweep->add_option("--seed", s_seed, "Master seed");
  sweep->add_option("--workers", s_workers, "Worker threads");
  sweep->add_option("--out", s_out, "Summary CSV path ('-' = stdout)");

  auto* selftest = app.add_subcommand("selftest", "Fast internal consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*selftest) return cmd_selftest();

    if (*run) {
      ExperimentConfig cfg;
      if (!run_config.empty()) cfg = parse_config_file(run_config);
      if (run->count("--algorithm")) apply_key_value(cfg, "algorithm", run_algorithm);
      if (run->count("--start")) apply_key_value(cfg, "start", run_start);
      if (run->count("--n")) cfg.n = (uint32_t)f_n;
      if (run->count("--k")) cfg.k = (uint32_t)f_k;
      if (run->count("--beta-s")) cfg.hp.beta_s = f_bs;
      if (run->count("--u-s")) cfg.hp.u_s = f_us;
      if (run->count("--beta-lambda")) cfg.hp.beta_lambda = f_bl;
      if (run->count("--u-lambda")) cfg.hp.u_lambda = f_ul;
      if (run->count("--p")) cfg.sp.p = f_p;
      if (run->count("--c")) cfg.sp.c = f_c;
      if (run->count("--lm")) cfg.sp.lambda_m = f_lm;
      if (run->count("--lc")) cfg.sp.lambda_c = f_lc;
      if (run->count("--chi")) apply_key_value(cfg, "chi", std::to_string(f_chi));
      if (run->count("--beta")) apply_key_value(cfg, "beta", std::to_string(f_beta));
      if (run->count("--trials")) cfg.trials = f_trials;
      if (run->count("--budget")) cfg.budget = f_budget;
      if (run->count("--workers")) cfg.workers = (uint32_t)f_workers;
      if (run->count("--target")) cfg.target_fitness = (int64_t)f_target;
      if (run->count("--seed")) {
        cfg.master_seed = f_seed;
      } else if (const char* env = std::getenv("HTGA_SEED")) {
        cfg.master_seed = std::strtoull(env, nullptr, 10);
      }
      if (run->count("--preset")) {
        if (run_preset != "recommended")
          throw ConfigError("preset: unknown preset '" + run_preset + "'");
        cfg.hp = HyperParams::recommended(cfg.n);
      }
      cfg.validate();
      if (cfg.k != 0 && !JumpParams(cfg.n, cfg.k).in_analyzed_regime()) {
        std::cerr << "warning: k outside the analyzed regime [2..n/4]\n";
      }
      std::ofstream file;
      std::ostream* csv = nullptr;
      if (!run_out.empty()) csv = &open_output(run_out, file);
      auto result = run_experiment(cfg, csv);
      std::ostream& info = (csv == &std::cout) ? std::cerr : std::cout;
      if (!run_json.empty() && run_json != "-") {
        std::ofstream jf(run_json);
        if (!jf) throw ConfigError("cannot open json file '" + run_json + "'");
        jf << summary_json(cfg, result.summary) << "\n";
      } else {
        print_summary(run_json == "-" ? std::cout : info, cfg, result.summary);
      }
      return 0;
    }

    if (*exact) {
      if (e_heavy) {
        HyperParams hp{e_bs, e_us ? e_us : e_n, e_bl, e_ul ? e_ul : (1ULL << 20)};
        auto res = escape_heavy_tailed(JumpParams((uint32_t)e_n, (uint32_t)e_k), hp);
        std::printf("n,k,beta_s,u_s,beta_lambda,u_lambda,log_P,expected_lambda,expected_evals\n");
        std::printf("%llu,%llu,%.17g,%llu,%.17g,%llu,%.17g,%.17g,%.17g\n",
                    (unsigned long long)e_n, (unsigned long long)e_k, hp.beta_s,
                    (unsigned long long)hp.u_s, hp.beta_lambda, (unsigned long long)hp.u_lambda,
                    res.log_p, res.expected_lambda, res.expected_evals);
        if (!std::isfinite(res.log_p)) {
          std::cerr << "error: escape probability underflowed to zero\n";
          return 3;
        }
        return 0;
      }
      ExactPoint pt{};
      pt.n = (uint32_t)e_n;
      pt.k = (uint32_t)e_k;
      if (exact->count("--p") || exact->count("--c")) {
        if (!exact->count("--lm") || !exact->count("--lc"))
          throw ConfigError("exact: --p/--c require --lm and --lc");
        pt.delta = std::log2(e_p / std::sqrt((double)e_k / e_n));
        pt.p = e_p;
        pt.c = e_c;
        pt.lambda = (double)e_lm;
        pt.log_p_escape = escape_log_p_static(pt.n, pt.k, e_p, e_c, (double)e_lm, (double)e_lc);
        pt.expected_evals = (double)(e_lm + e_lc) * std::exp(-pt.log_p_escape);
        StaticParams base = static_params_for_delta(pt.n, pt.k, 0.0);
        pt.ratio = std::exp(escape_log_p_static(pt.n, pt.k, base.p, base.c, (double)e_lm,
                                                (double)e_lc) -
                            pt.log_p_escape);
      } else {
        StaticParams sp = static_params_for_delta(pt.n, pt.k, e_delta);
        double lambda = (double)sp.lambda_m;
        pt.delta = e_delta;
        pt.p = sp.p;
        pt.c = sp.c;
        pt.lambda = lambda;
        pt.log_p_escape = escape_log_p_static(pt.n, pt.k, sp.p, sp.c, lambda, lambda);
        pt.expected_evals = 2.0 * lambda * std::exp(-pt.log_p_escape);
        StaticParams base = static_params_for_delta(pt.n, pt.k, 0.0);
        pt.ratio = std::exp(
            escape_log_p_static(pt.n, pt.k, base.p, base.c, lambda, lambda) - pt.log_p_escape);
      }
      write_exact_csv_header(std::cout);
      write_exact_csv_row(std::cout, pt);
      return std::isfinite(pt.log_p_escape) ? 0 : 3;
    }

    if (*fig) {
      std::ofstream file;
      std::ostream& os = open_output(g_out, file);
      write_exact_csv_header(os);
      std::vector<std::vector<ExactPoint>> all_series;
      for (uint64_t k : parse_u64_list(g_k)) {
        auto points = runtime_ratio_sweep((uint32_t)g_n, (uint32_t)k);
        for (const auto& pt : points) write_exact_csv_row(os, pt);
        all_series.push_back(std::move(points));
      }
      if (!g_plot.empty()) write_ratio_svg(g_plot, all_series);
      return 0;
    }

    if (*sweep) {
      ExperimentConfig base;
      base.algorithm = ExperimentConfig::Algorithm::heavy_tailed;
      apply_key_value(base, "start", s_start);
      base.n = (uint32_t)s_n;
      base.k = (uint32_t)s_k;
      base.trials = s_trials;
      base.budget = s_budget;
      base.master_seed = s_seed;
      base.workers = (uint32_t)s_workers;
      std::ofstream file;
      std::ostream& os = open_output(s_out, file);
      os << "beta_s,u_s,beta_lambda,u_lambda,trials,success_rate,mean_evals,median_evals,"
            "ci95_lo,ci95_hi\n";
      auto us_grid = s_us.empty() ? std::vector<uint64_t>{s_n} : parse_u64_list(s_us);
      for (double bs : parse_double_list(s_bs)) {
        for (uint64_t us : us_grid) {
          for (double bl : parse_double_list(s_bl)) {
            for (uint64_t ul : parse_u64_list(s_ul)) {
              ExperimentConfig cfg = base;
              cfg.hp = HyperParams{bs, us, bl, ul};
              auto res = run_experiment(cfg);
              char buf[256];
              std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g,%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                            bs, (unsigned long long)us, bl, (unsigned long long)ul,
                            (unsigned long long)cfg.trials, res.summary.success_rate,
                            res.summary.evaluations.mean, res.summary.evaluations.median,
                            res.summary.mean_evals_ci_lo, res.summary.mean_evals_ci_hi);
              os << buf;
            }
          }
        }
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
