#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "htga/engine.hpp"
#include "htga/stats.hpp"

namespace htga {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kConfigSchema = "htga-config-v1";
inline constexpr const char* kRunCsvSchema = "htga.run.v1";

struct ExperimentConfig {
  enum class Algorithm { heavy_tailed, static_gga, one_plus_one, one_plus_one_heavy };
  enum class Start { random_start, local_optimum, all_ones };

  Algorithm algorithm = Algorithm::heavy_tailed;
  uint32_t n = 100;
  uint32_t k = 0;  // 0 selects OneMax, >= 2 selects Jump_k
  Start start = Start::random_start;
  uint64_t trials = 1;
  uint64_t budget = 1000000;
  uint64_t master_seed = 1;
  uint32_t workers = 1;
  /// Stop a trial once fitness reaches this value; defaults to the optimum.
  int64_t target_fitness = std::numeric_limits<int64_t>::max();

  HyperParams hp = HyperParams::recommended(100);
  StaticParams sp{0.1, 0.1, 1, 1};
  MutationSpec mut = MutationSpec::standard();

  void validate() const;  // throws ConfigError naming the offending field
  Objective objective() const { return k == 0 ? Objective::one_max(n) : Objective{n, k}; }
};

/// Key = value text format with required `schema = htga-config-v1` line.
ExperimentConfig parse_config_file(const std::string& path);
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentResult {
  std::vector<RunResult> trials;
  SummaryStats summary;
};

/// Runs cfg.trials independent trials on a fixed pool of cfg.workers threads.
/// Trial i uses the seed derive_seed(master_seed, i), so results do not depend
/// on scheduling; CSV rows stream in trial order as trials complete.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* csv = nullptr);

void write_run_csv_header(std::ostream& os);
void write_run_csv_row(std::ostream& os, uint64_t trial, const RunResult& r);

/// RFC-4180-style quoting: quotes only fields that need it.
std::string csv_field(const std::string& value);

/// JSON text with the config echo, summary statistics, and Wald check.
std::string summary_json(const ExperimentConfig& cfg, const SummaryStats& s);

}  // namespace htga
