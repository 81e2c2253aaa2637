#include "cohspec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "cohspec/eigen.hpp"
#include "cohspec/noise.hpp"
#include "cohspec/signal.hpp"

namespace cohspec {
namespace experiments {

namespace {

struct FatalTrialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Column indices of one row in compressed form.
struct SparseRows {
  std::vector<std::uint32_t> cols;
  std::vector<std::size_t> offsets;  // n + 1 entries
};

// Exact i.i.d. Bernoulli(p) subset of [0, count) per row cell, via geometric
// skips for sparse p and a plain scan otherwise.
void bernoulli_row(std::size_t count, double p, RandomSource& src,
                   std::vector<std::uint32_t>& out) {
  if (p <= 0.0) return;
  if (p >= 1.0) {
    for (std::size_t j = 0; j < count; ++j) out.push_back(std::uint32_t(j));
    return;
  }
  if (p >= 0.1) {
    for (std::size_t j = 0; j < count; ++j)
      if (src.uniform01() < p) out.push_back(std::uint32_t(j));
    return;
  }
  const double denom = std::log1p(-p);
  double pos = -1.0;
  for (;;) {
    const double u = src.uniform01();
    const double gap = std::floor(std::log1p(-u) / denom);
    pos += 1.0 + gap;
    if (!(pos < double(count))) return;
    out.push_back(std::uint32_t(pos));
  }
}

double realized_mu(const DenseVector& u) {
  double peak = 0.0;
  for (double v : u.data) peak = std::max(peak, std::abs(v));
  return double(u.size()) * peak * peak;
}

DenseVector draw_direction(int scheme, std::size_t n, double mu, RandomSource& src) {
  return scheme == 1 ? scheme_one(n, mu, src) : scheme_two(n, mu, src);
}

struct TrialContext {
  const Config* cfg;
  std::atomic<std::size_t>* capped_cells;
  std::atomic<std::uint64_t>* clipped_entries;
};

TrialRecord run_one_trial(const TrialContext& ctx, std::size_t n, double mu, std::size_t trial,
                          std::uint64_t stream) {
  const Config& cfg = *ctx.cfg;
  RandomSource src(cfg.seed, stream);
  TrialRecord rec;
  rec.kind = cfg.kind;
  rec.n = n;
  rec.mu_target = mu;
  rec.trial = trial;
  rec.seed_used = src.derived_seed();
  const auto t0 = std::chrono::steady_clock::now();

  const double log_n = std::log(double(n));
  const int scheme = cfg.effective_scheme();

  if (cfg.kind == Kind::gauss_denoise) {
    const DenseVector u = draw_direction(scheme, n, mu, src);
    rec.mu_realized = realized_mu(u);
    rec.lambda_star = std::sqrt(double(n) * log_n);
    DenseMatrix h = sample_gaussian_hetero(n, src).h;
    if (cfg.noise_scale != 1.0)
      for (double& v : h.data) v *= cfg.noise_scale;
    const double lam = rec.lambda_star;
    auto apply = [&](const double* x, double* y) {
      matvec_into(h, x, y);
      double ux = 0.0;
      for (std::size_t i = 0; i < n; ++i) ux += u[i] * x[i];
      const double c = lam * ux;
      for (std::size_t i = 0; i < n; ++i) y[i] += c * u[i];
    };
    const auto pair = leading_eigenpair_op(n, apply, cfg.power_tol, cfg.power_max_iter, src);
    rec.lambda_hat = pair.value;
  } else if (cfg.kind == Kind::completion) {
    const DenseVector u = draw_direction(scheme, n, mu, src);
    rec.mu_realized = realized_mu(u);
    rec.lambda_star = 1.0;
    double p = mu * mu * log_n / double(n);
    if (p >= 1.0) {
      p = 1.0;
      ctx.capped_cells->fetch_add(1, std::memory_order_relaxed);
    }
    // Observed-mask sampling; M = (lambda*/p) u u^T restricted to the mask,
    // applied implicitly.
    SparseRows rows;
    rows.offsets.reserve(n + 1);
    rows.offsets.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      bernoulli_row(n, p, src, rows.cols);
      rows.offsets.push_back(rows.cols.size());
    }
    const double scale = rec.lambda_star / p;
    auto apply = [&](const double* x, double* y) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t c = rows.offsets[i]; c < rows.offsets[i + 1]; ++c) {
          const std::uint32_t j = rows.cols[c];
          acc += u[j] * x[j];
        }
        y[i] = scale * u[i] * acc;
      }
    };
    const auto pair = leading_eigenpair_op(n, apply, cfg.power_tol, cfg.power_max_iter, src);
    rec.lambda_hat = pair.value;
  } else {
    // Network: P = lambda* u u^T with nonnegative u (entries are
    // probabilities), clipped into [0, 1] with the clip count reported.
    DenseVector u = draw_direction(scheme, n, mu, src);
    for (double& v : u.data) v = std::abs(v);
    rec.mu_realized = realized_mu(u);
    rec.lambda_star = std::max(mu, log_n);
    const double lam = rec.lambda_star;

    // Count entries with lambda* u_i u_j > 1 (they get clipped to 1).
    std::vector<double> sorted(u.data);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::uint64_t clipped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sorted[i] <= 0.0) break;
      const double threshold = 1.0 / (lam * sorted[i]);
      const auto it = std::upper_bound(sorted.begin(), sorted.end(), threshold,
                                       std::greater<double>());
      const std::size_t cnt = std::size_t(it - sorted.begin());
      if (cnt == 0) break;
      clipped += cnt;
    }
    if (clipped > 0) ctx.clipped_entries->fetch_add(clipped, std::memory_order_relaxed);
    if (double(clipped) > 0.01 * double(n) * double(n))
      throw FatalTrialError("network experiment: clipping exceeds 1% of entries");

    double umax = 0.0;
    for (double v : u.data) umax = std::max(umax, v);
    // Thinned Bernoulli sampling: propose each column with q_i >= P_ij, then
    // accept with P_ij / q_i; exact and O(nnz) for sparse rows.
    SparseRows rows;
    rows.offsets.reserve(n + 1);
    rows.offsets.push_back(0);
    std::vector<std::uint32_t> cand;
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = std::min(1.0, lam * u[i] * umax);
      cand.clear();
      bernoulli_row(n, qi, src, cand);
      for (std::uint32_t j : cand) {
        const double pij = std::min(1.0, lam * u[i] * u[j]);
        if (pij >= qi || src.uniform01() < pij / qi) rows.cols.push_back(j);
      }
      rows.offsets.push_back(rows.cols.size());
    }
    auto apply = [&](const double* x, double* y) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t c = rows.offsets[i]; c < rows.offsets[i + 1]; ++c)
          acc += x[rows.cols[c]];
        y[i] = acc;
      }
    };
    const auto pair = leading_eigenpair_op(n, apply, cfg.power_tol, cfg.power_max_iter, src);
    rec.lambda_hat = pair.value;
  }

  rec.abs_error = std::abs(rec.lambda_hat - rec.lambda_star);
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_ms =
      cfg.record_wall_time
          ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
          : 0;
  return rec;
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::gauss_denoise: return "gauss_denoise";
    case Kind::completion: return "completion";
    case Kind::network: return "network";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  if (name == "gauss_denoise" || name == "gauss-denoise") return Kind::gauss_denoise;
  if (name == "completion") return Kind::completion;
  if (name == "network") return Kind::network;
  throw std::invalid_argument("unknown experiment: " + name);
}

Config Config::defaults(Kind kind) {
  Config cfg;
  cfg.kind = kind;
  switch (kind) {
    case Kind::gauss_denoise:
      cfg.n_grid = {500, 1000, 2000, 4000};
      cfg.mu_exponents = {0.0, 0.25, 0.5, 1.0};
      break;
    case Kind::completion:
      cfg.n_grid = {500, 1000, 2000, 4000};
      cfg.mu_exponents = {0.0, 0.1, 0.2, 0.3};
      break;
    case Kind::network:
      cfg.n_grid = {512, 1024, 2048, 4096};
      cfg.mu_exponents = {0.0, 1.0 / 3.0, 0.4};
      break;
  }
  return cfg;
}

double Config::mu_value(std::size_t n, double alpha) const {
  return std::max(1.0, std::round(mu_coefficient * std::pow(double(n), alpha)));
}

int Config::effective_scheme() const {
  if (scheme != 0) return scheme;
  return kind == Kind::gauss_denoise ? 1 : 2;
}

void Config::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("config: empty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("config: n grid must be strictly increasing");
  if (mu_exponents.empty()) throw std::invalid_argument("config: no mu classes");
  if (power_tol <= 0) throw std::invalid_argument("config: power_tol must be positive");
  if (scheme != 0 && scheme != 1 && scheme != 2)
    throw std::invalid_argument("config: scheme must be 1 or 2");
  if (kind == Kind::completion || kind == Kind::network) {
    for (std::size_t n : n_grid)
      for (double a : mu_exponents) {
        const double mu = mu_value(n, a);
        if (mu > std::sqrt(double(n)) + 0.5)
          throw std::invalid_argument("config: mu exceeds sqrt(n) (restricted for this model)");
      }
  }
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COHSPEC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return std::size_t(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

Result run_experiment(const Config& cfg) {
  cfg.validate();

  struct Task {
    std::size_t n;
    double mu;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.n_grid)
    for (double a : cfg.mu_exponents) {
      const double mu = cfg.mu_value(n, a);
      for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({n, mu, t});
    }

  Result result;
  result.config = cfg;
  std::vector<TrialRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> capped{0};
  std::atomic<std::uint64_t> clipped{0};
  std::atomic<bool> fatal{false};
  std::string fatal_message;
  std::mutex fatal_mutex;

  TrialContext ctx{&cfg, &capped, &clipped};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= tasks.size() || fatal.load(std::memory_order_relaxed)) return;
      const Task& task = tasks[t];
      try {
        records[t] = run_one_trial(ctx, task.n, task.mu, task.trial, std::uint64_t(t));
      } catch (const FatalTrialError& e) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        fatal_message = e.what();
        fatal.store(true, std::memory_order_relaxed);
        return;
      } catch (const std::exception& e) {
        TrialRecord rec;
        rec.kind = cfg.kind;
        rec.n = task.n;
        rec.mu_target = task.mu;
        rec.trial = task.trial;
        rec.failed = true;
        rec.failure = e.what();
        records[t] = rec;
      }
    }
  };

  const std::size_t workers = std::min(worker_count(cfg.threads), tasks.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (fatal.load()) throw std::runtime_error(fatal_message);

  for (auto& rec : records) {
    if (rec.failed)
      ++result.failed_trials;
    else
      result.records.push_back(std::move(rec));
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) {
                     if (a.n != b.n) return a.n < b.n;
                     if (a.mu_target != b.mu_target) return a.mu_target < b.mu_target;
                     return a.trial < b.trial;
                   });
  result.capped_cells = capped.load();
  result.clipped_entries = clipped.load();
  return result;
}

namespace {

Result run_kind(const Config& cfg, Kind kind, const char* name) {
  if (cfg.kind != kind)
    throw std::invalid_argument(std::string("config kind does not match ") + name);
  return run_experiment(cfg);
}

}  // namespace

Result run_gauss_denoise(const Config& cfg) {
  return run_kind(cfg, Kind::gauss_denoise, "gauss_denoise");
}
Result run_completion(const Config& cfg) { return run_kind(cfg, Kind::completion, "completion"); }
Result run_network(const Config& cfg) { return run_kind(cfg, Kind::network, "network"); }

namespace {

void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

}  // namespace

void write_csv(const Result& result, std::ostream& out) {
  out << "experiment,n,mu_target,mu_realized,trial,lambda_star,lambda_hat,abs_error,seed,"
         "wall_time_ms\n";
  for (const auto& r : result.records) {
    std::string line = kind_name(r.kind);
    line += ',';
    line += std::to_string(r.n);
    line += ',';
    append_double(line, r.mu_target);
    line += ',';
    append_double(line, r.mu_realized);
    line += ',';
    line += std::to_string(r.trial);
    line += ',';
    append_double(line, r.lambda_star);
    line += ',';
    append_double(line, r.lambda_hat);
    line += ',';
    append_double(line, r.abs_error);
    line += ',';
    line += std::to_string(r.seed_used);
    line += ',';
    line += std::to_string(r.wall_time_ms);
    line += '\n';
    out << line;
  }
}

void write_csv_file(const Result& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv(result, out);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  double sx = 0, sy = 0;
  for (auto [n, v] : points) {
    if (!(n > 0.0) || !(v > 0.0))
      throw std::invalid_argument("fit_rate: points must be positive");
    sx += std::log(n);
    sy += std::log(v);
  }
  const double mx = sx / double(points.size());
  const double my = sy / double(points.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [n, v] : points) {
    const double dx = std::log(n) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (auto [n, v] : points) {
      const double r = std::log(v) - (fit.intercept + fit.slope * std::log(n));
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  } else {
    fit.r_squared = 1.0;  // constant data fitted exactly
  }
  return fit;
}

std::pair<double, double> bootstrap_ci(const std::vector<double>& samples, double level,
                                       std::size_t resamples, RandomSource& src) {
  if (samples.size() < 10) throw std::invalid_argument("bootstrap_ci: need at least 10 samples");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("bootstrap_ci: level outside (0, 1)");
  if (resamples < 2) throw std::invalid_argument("bootstrap_ci: too few resamples");

  const std::size_t m = samples.size();
  std::vector<double> means(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      acc += samples[std::size_t(src.uniform01() * double(m))];
    means[r] = acc / double(m);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * double(resamples - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, resamples - 1);
    const double frac = pos - double(lo);
    return (1.0 - frac) * means[lo] + frac * means[hi];
  };
  const double tail = (1.0 - level) / 2.0;
  return {quantile(tail), quantile(1.0 - tail)};
}

Summary summarize(const Result& result) {
  Summary summary;
  summary.failed_trials = result.failed_trials;
  const Config& cfg = result.config;

  std::uint64_t cell_index = 0;
  for (double alpha : cfg.mu_exponents) {
    ClassSummary cls;
    cls.mu_exponent = alpha;
    std::vector<std::pair<double, double>> fit_points;
    double pooled = 0.0;
    std::size_t pooled_count = 0;
    for (std::size_t n : cfg.n_grid) {
      const double mu = cfg.mu_value(n, alpha);
      std::vector<double> errs;
      for (const auto& r : result.records)
        if (r.n == n && r.mu_target == mu) errs.push_back(r.abs_error);
      if (errs.empty()) continue;
      CellSummary cell;
      cell.n = n;
      cell.mu_target = mu;
      cell.count = errs.size();
      for (double e : errs) cell.mean_error += e;
      cell.mean_error /= double(errs.size());
      if (errs.size() >= 10) {
        RandomSource boot(cfg.seed, 0xB007000000000000ULL + cell_index);
        std::tie(cell.ci_lo, cell.ci_hi) = bootstrap_ci(errs, 0.95, 2000, boot);
      } else {
        cell.ci_lo = cell.ci_hi = cell.mean_error;
      }
      ++cell_index;
      pooled += cell.mean_error * double(cell.count);
      pooled_count += cell.count;
      if (cell.mean_error > 0.0) fit_points.emplace_back(double(n), cell.mean_error);
      cls.cells.push_back(cell);
    }
    cls.mean_error = pooled_count ? pooled / double(pooled_count) : 0.0;
    if (fit_points.size() >= 3) cls.fit = fit_rate(fit_points);
    else cls.fit = {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
    summary.classes.push_back(std::move(cls));
  }
  return summary;
}

void print_summary(const Summary& summary, std::ostream& out) {
  char buf[256];
  for (const auto& cls : summary.classes) {
    std::snprintf(buf, sizeof buf,
                  "mu-class n^%.4g: pooled mean %.6g, fitted slope %.4f (r^2 %.3f)\n",
                  cls.mu_exponent, cls.mean_error, cls.fit.slope, cls.fit.r_squared);
    out << buf;
    for (const auto& cell : cls.cells) {
      std::snprintf(buf, sizeof buf,
                    "  n %6zu  mu %8.4g  trials %4zu  mean %.6g  ci95 [%.6g, %.6g]\n", cell.n,
                    cell.mu_target, cell.count, cell.mean_error, cell.ci_lo, cell.ci_hi);
      out << buf;
    }
  }
  if (summary.failed_trials)
    out << "failed trials excluded: " << summary.failed_trials << "\n";
}

}  // namespace experiments
}  // namespace cohspec
