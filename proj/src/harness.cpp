#include "htga/harness.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace htga {

namespace {

const char* algorithm_name(ExperimentConfig::Algorithm a) {
  switch (a) {
    case ExperimentConfig::Algorithm::heavy_tailed: return "heavy_tailed";
    case ExperimentConfig::Algorithm::static_gga: return "static";
    case ExperimentConfig::Algorithm::one_plus_one: return "one_plus_one";
    case ExperimentConfig::Algorithm::one_plus_one_heavy: return "one_plus_one_heavy";
  }
  return "?";
}

const char* start_name(ExperimentConfig::Start s) {
  switch (s) {
    case ExperimentConfig::Start::random_start: return "random";
    case ExperimentConfig::Start::local_optimum: return "local_optimum";
    case ExperimentConfig::Start::all_ones: return "all_ones";
  }
  return "?";
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  uint64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double out = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1) throw ConfigError("n: must be >= 1");
  if (k != 0 && (k < 2 || k > n)) throw ConfigError("k: jump size needs 2 <= k <= n (0 = onemax)");
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (budget < 1) throw ConfigError("budget: must be >= 1");
  if (workers < 1 || workers > 1024) throw ConfigError("workers: must be in [1, 1024]");
  if (start == Start::local_optimum && k == 0)
    throw ConfigError("start: local_optimum requires a jump problem (k >= 2)");
  try {
    switch (algorithm) {
      case Algorithm::heavy_tailed: hp.validate(); break;
      case Algorithm::static_gga: sp.validate(); break;
      case Algorithm::one_plus_one:
        if (!(mut.chi > 0.0) || mut.chi > n) throw ConfigError("chi: need 0 < chi <= n");
        break;
      case Algorithm::one_plus_one_heavy:
        if (!(mut.beta >= 0.0)) throw ConfigError("beta: must be >= 0");
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("algorithm parameters: ") + e.what());
  }
}

void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "schema") {
    if (value != kConfigSchema)
      throw ConfigError("schema: expected '" + std::string(kConfigSchema) + "', got '" + value +
                        "'");
  } else if (key == "algorithm") {
    if (value == "heavy_tailed") cfg.algorithm = ExperimentConfig::Algorithm::heavy_tailed;
    else if (value == "static") cfg.algorithm = ExperimentConfig::Algorithm::static_gga;
    else if (value == "one_plus_one") cfg.algorithm = ExperimentConfig::Algorithm::one_plus_one;
    else if (value == "one_plus_one_heavy")
      cfg.algorithm = ExperimentConfig::Algorithm::one_plus_one_heavy;
    else
      throw ConfigError("algorithm: unknown value '" + value + "'");
  } else if (key == "start") {
    if (value == "random") cfg.start = ExperimentConfig::Start::random_start;
    else if (value == "local_optimum") cfg.start = ExperimentConfig::Start::local_optimum;
    else if (value == "all_ones") cfg.start = ExperimentConfig::Start::all_ones;
    else
      throw ConfigError("start: unknown value '" + value + "'");
  } else if (key == "n") {
    cfg.n = (uint32_t)parse_u64(key, value);
  } else if (key == "k") {
    cfg.k = (uint32_t)parse_u64(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_u64(key, value);
  } else if (key == "budget") {
    cfg.budget = parse_u64(key, value);
  } else if (key == "seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "workers") {
    cfg.workers = (uint32_t)parse_u64(key, value);
  } else if (key == "target_fitness") {
    cfg.target_fitness = (int64_t)parse_u64(key, value);
  } else if (key == "beta_s") {
    cfg.hp.beta_s = parse_double(key, value);
  } else if (key == "u_s") {
    cfg.hp.u_s = parse_u64(key, value);
  } else if (key == "beta_lambda") {
    cfg.hp.beta_lambda = parse_double(key, value);
  } else if (key == "u_lambda") {
    cfg.hp.u_lambda = parse_u64(key, value);
  } else if (key == "p") {
    cfg.sp.p = parse_double(key, value);
  } else if (key == "c") {
    cfg.sp.c = parse_double(key, value);
  } else if (key == "lambda_m") {
    cfg.sp.lambda_m = parse_u64(key, value);
  } else if (key == "lambda_c") {
    cfg.sp.lambda_c = parse_u64(key, value);
  } else if (key == "chi") {
    cfg.mut.chi = parse_double(key, value);
    cfg.mut.kind = MutationSpec::Kind::standard_rate;
  } else if (key == "beta") {
    cfg.mut.beta = parse_double(key, value);
    cfg.mut.kind = MutationSpec::Kind::heavy_tailed;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  ExperimentConfig cfg;
  bool saw_schema = false;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "schema") saw_schema = true;
    apply_key_value(cfg, key, value);
  }
  if (!saw_schema)
    throw ConfigError(path + ": missing 'schema = " + std::string(kConfigSchema) + "' line");
  return cfg;
}

namespace {

struct TrialRunner {
  const ExperimentConfig& cfg;
  Objective obj;
  std::unique_ptr<HeavyTailedGa> ht;
  std::unique_ptr<StaticGa> st;
  std::unique_ptr<OnePlusOneEa> ea;

  explicit TrialRunner(const ExperimentConfig& c) : cfg(c), obj(c.objective()) {
    switch (cfg.algorithm) {
      case ExperimentConfig::Algorithm::heavy_tailed:
        ht = std::make_unique<HeavyTailedGa>(obj, cfg.hp);
        break;
      case ExperimentConfig::Algorithm::static_gga:
        st = std::make_unique<StaticGa>(obj, cfg.sp);
        break;
      case ExperimentConfig::Algorithm::one_plus_one:
        ea = std::make_unique<OnePlusOneEa>(obj, MutationSpec::standard(cfg.mut.chi));
        break;
      case ExperimentConfig::Algorithm::one_plus_one_heavy:
        ea = std::make_unique<OnePlusOneEa>(obj, MutationSpec::heavy(cfg.mut.beta));
        break;
    }
  }

  RunResult run(uint64_t trial_index) const {
    uint64_t seed = derive_seed(cfg.master_seed, trial_index);
    Rng rng(seed);
    BitString start = [&] {
      switch (cfg.start) {
        case ExperimentConfig::Start::local_optimum:
          return local_optimum_start(JumpParams(cfg.n, cfg.k), rng);
        case ExperimentConfig::Start::all_ones:
          return BitString::all_ones_string(cfg.n);
        default:
          return BitString::random(cfg.n, rng);
      }
    }();
    RunOptions opt;
    opt.target_fitness = cfg.target_fitness;
    RunResult r;
    if (ht) r = ht->run(start, cfg.budget, rng, opt);
    if (st) r = st->run(start, cfg.budget, rng, opt);
    if (ea) r = ea->run(start, cfg.budget, rng, opt);
    r.seed = seed;
    return r;
  }

  double expected_lambda() const { return ht ? ht->lambda_law().expectation() : -1.0; }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* csv) {
  cfg.validate();
  TrialRunner runner(cfg);

  ExperimentResult result;
  result.trials.resize(cfg.trials);
  auto done = std::make_unique<std::atomic<bool>[]>(cfg.trials);
  std::atomic<uint64_t> next{0};

  auto worker = [&] {
    while (true) {
      uint64_t i = next.fetch_add(1);
      if (i >= cfg.trials) break;
      result.trials[i] = runner.run(i);
      done[i].store(true, std::memory_order_release);
    }
  };

  uint32_t pool = (uint32_t)std::min<uint64_t>(cfg.workers, cfg.trials);
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (uint32_t w = 0; w < pool; ++w) threads.emplace_back(worker);

  // Rows stream strictly in trial order so reruns compare byte for byte.
  if (csv) {
    write_run_csv_header(*csv);
    for (uint64_t frontier = 0; frontier < cfg.trials; ++frontier) {
      while (!done[frontier].load(std::memory_order_acquire)) std::this_thread::yield();
      write_run_csv_row(*csv, frontier, result.trials[frontier]);
    }
  }
  for (auto& t : threads) t.join();

  result.summary = summarize(result.trials, runner.expected_lambda(),
                             derive_seed(cfg.master_seed, 0xB007'57A7ULL));
  return result;
}

void write_run_csv_header(std::ostream& os) {
  os << "# schema: " << kRunCsvSchema << "\n";
  os << "trial,seed,iterations,evaluations,success,best_fitness\n";
}

void write_run_csv_row(std::ostream& os, uint64_t trial, const RunResult& r) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%llu,%d,%lld\n", (unsigned long long)trial,
                (unsigned long long)r.seed, (unsigned long long)r.iterations,
                (unsigned long long)r.evaluations, r.success ? 1 : 0, (long long)r.best_fitness);
  os << buf;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char ch : value) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string summary_json(const ExperimentConfig& cfg, const SummaryStats& s) {
  nlohmann::json j;
  j["config"] = {{"algorithm", algorithm_name(cfg.algorithm)},
                 {"n", cfg.n},
                 {"k", cfg.k},
                 {"start", start_name(cfg.start)},
                 {"trials", cfg.trials},
                 {"budget", cfg.budget},
                 {"seed", cfg.master_seed},
                 {"workers", cfg.workers}};
  auto field = [](const FieldStats& f) {
    return nlohmann::json{
        {"mean", f.mean}, {"median", f.median}, {"std", f.std_dev}, {"min", f.min}, {"max", f.max}};
  };
  j["evaluations"] = field(s.evaluations);
  j["iterations"] = field(s.iterations);
  j["success_rate"] = s.success_rate;
  j["mean_evaluations_ci95"] = {s.mean_evals_ci_lo, s.mean_evals_ci_hi};
  if (s.wald_gap >= 0.0) {
    j["wald_gap"] = s.wald_gap;
    j["wald_warning"] = s.wald_warning;
  }
  return j.dump(2);
}

}  // namespace htga
