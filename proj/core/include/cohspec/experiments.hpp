#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cohspec/rng.hpp"

namespace cohspec {
namespace experiments {

enum class Kind { gauss_denoise, completion, network };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct Config {
  Kind kind = Kind::gauss_denoise;
  std::vector<std::size_t> n_grid;
  std::vector<double> mu_exponents;  // mu = max(1, round(coef * n^alpha))
  double mu_coefficient = 1.0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  int scheme = 0;  // 0 = experiment default (I for denoising, II otherwise)
  std::string output_path;
  double power_tol = 1e-9;
  int power_max_iter = 3000;
  std::size_t threads = 0;  // 0 = COHSPEC_THREADS or hardware
  bool record_wall_time = false;
  double noise_scale = 1.0;  // test hook: scales the sampled noise (denoising runs)

  static Config defaults(Kind kind);
  void validate() const;
  double mu_value(std::size_t n, double alpha) const;
  int effective_scheme() const;
};

struct TrialRecord {
  Kind kind = Kind::gauss_denoise;
  std::size_t n = 0;
  double mu_target = 0.0;
  double mu_realized = 0.0;
  std::size_t trial = 0;
  double lambda_star = 0.0;
  double lambda_hat = 0.0;
  double abs_error = 0.0;
  std::uint64_t seed_used = 0;
  std::int64_t wall_time_ms = 0;
  bool failed = false;
  std::string failure;
};

struct Result {
  Config config;
  std::vector<TrialRecord> records;  // successes, sorted by (n, mu_target, trial)
  std::size_t failed_trials = 0;
  std::size_t capped_cells = 0;      // completion cells where p hit the 1.0 cap
  std::uint64_t clipped_entries = 0; // network entries clipped into [0, 1]
};

Result run_experiment(const Config& cfg);
Result run_gauss_denoise(const Config& cfg);
Result run_completion(const Config& cfg);
Result run_network(const Config& cfg);

// CSV with the exact column set
// experiment,n,mu_target,mu_realized,trial,lambda_star,lambda_hat,abs_error,seed,wall_time_ms
// The wall-time column is 0 unless the config asked to record it (timing is
// the one nondeterministic field; zeroing it keeps reruns byte-identical).
void write_csv(const Result& result, std::ostream& out);
void write_csv_file(const Result& result, const std::string& path);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

// OLS of ln(value) on ln(n); needs >= 3 points with positive values.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

// Percentile bootstrap CI for the mean.
std::pair<double, double> bootstrap_ci(const std::vector<double>& samples, double level,
                                       std::size_t resamples, RandomSource& src);

struct CellSummary {
  std::size_t n = 0;
  double mu_target = 0.0;
  std::size_t count = 0;
  double mean_error = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
};

struct ClassSummary {
  double mu_exponent = 0.0;
  RateFit fit;
  double mean_error = 0.0;  // pooled over the grid
  std::vector<CellSummary> cells;
};

struct Summary {
  std::vector<ClassSummary> classes;
  std::size_t failed_trials = 0;
};

// Per-(n, mu) means with 95% bootstrap CIs plus per-class log-log fits;
// deterministic given the result (bootstrap streams derive from the config
// seed).
Summary summarize(const Result& result);
void print_summary(const Summary& summary, std::ostream& out);

std::size_t worker_count(std::size_t requested);

}  // namespace experiments
}  // namespace cohspec
