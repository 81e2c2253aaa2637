// cohspec command-line interface: signal generation, spectra, bound tables,
// the oracle verification suite, experiment runs and rate fits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohspec/bounds.hpp"
#include "cohspec/eigen.hpp"
#include "cohspec/experiments.hpp"
#include "cohspec/matrix_io.hpp"
#include "cohspec/neumann.hpp"
#include "cohspec/noise.hpp"
#include "cohspec/oracle.hpp"
#include "cohspec/signal.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitBudget = 4;

using cohspec::DenseMatrix;
using cohspec::DenseVector;
using cohspec::RandomSource;
using json = nlohmann::json;
namespace ex = cohspec::experiments;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty()) throw ConfigError("empty list: " + text);
  return out;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

const std::map<std::string, int> kConfigKeys = {
    {"experiment", 0},   {"n_grid", 0},   {"mu_exponents", 0}, {"mu_coefficient", 0},
    {"trials", 0},       {"seed", 0},     {"scheme", 0},       {"output_path", 0},
    {"power_tol", 0},    {"threads", 0},
};

void apply_json_config(const std::string& path, ex::Config& cfg, bool& have_seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config key: " + key);
    if (key == "experiment")
      cfg.kind = ex::kind_from_name(value.get<std::string>());
    else if (key == "n_grid")
      cfg.n_grid = value.get<std::vector<std::size_t>>();
    else if (key == "mu_exponents")
      cfg.mu_exponents = value.get<std::vector<double>>();
    else if (key == "mu_coefficient")
      cfg.mu_coefficient = value.get<double>();
    else if (key == "trials")
      cfg.trials = value.get<std::size_t>();
    else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
      have_seed = true;
    } else if (key == "scheme")
      cfg.scheme = value.get<int>();
    else if (key == "output_path")
      cfg.output_path = value.get<std::string>();
    else if (key == "power_tol")
      cfg.power_tol = value.get<double>();
    else if (key == "threads")
      cfg.threads = value.get<std::size_t>();
  }
}

// Canonical form: stable key order, every effective setting present.
json canonical_config(const ex::Config& cfg) {
  json j;  // nlohmann::json object keys are kept sorted
  j["experiment"] = ex::kind_name(cfg.kind);
  j["mu_coefficient"] = cfg.mu_coefficient;
  j["mu_exponents"] = cfg.mu_exponents;
  j["n_grid"] = cfg.n_grid;
  j["output_path"] = cfg.output_path;
  j["power_tol"] = cfg.power_tol;
  j["scheme"] = cfg.scheme;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["trials"] = cfg.trials;
  return j;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::optional<std::uint64_t>& seed,
                   const std::optional<std::size_t>& trials, const std::string& n_list,
                   const std::string& mu_list, const std::optional<double>& mu_coef,
                   const std::optional<int>& scheme, std::string out_path,
                   const std::optional<std::size_t>& threads, bool dump_config) {
  ex::Config cfg = ex::Config::defaults(ex::kind_from_name(name));
  bool have_seed = false;
  if (!config_path.empty()) apply_json_config(config_path, cfg, have_seed);
  cfg.kind = ex::kind_from_name(name);  // positional name wins
  if (seed) {
    cfg.seed = *seed;
    have_seed = true;
  }
  if (trials) cfg.trials = *trials;
  if (!n_list.empty()) {
    cfg.n_grid.clear();
    for (double v : parse_list(n_list)) cfg.n_grid.push_back(std::size_t(v));
  }
  if (!mu_list.empty()) cfg.mu_exponents = parse_list(mu_list);
  if (mu_coef) cfg.mu_coefficient = *mu_coef;
  if (scheme) cfg.scheme = *scheme;
  if (!out_path.empty()) cfg.output_path = out_path;
  if (cfg.output_path.empty()) cfg.output_path = name + ".csv";
  if (threads) cfg.threads = *threads;

  if (!have_seed) throw ConfigError("stochastic command requires an explicit --seed");
  // Timing in the CSV is opt-in: the wall_time_ms column is zeroed by default
  // so reruns stay byte-identical.
  if (const char* timing = std::getenv("COHSPEC_TIMING"))
    cfg.record_wall_time = std::strtol(timing, nullptr, 10) != 0;
  cfg.validate();

  if (dump_config) {
    std::cout << canonical_config(cfg).dump(2) << "\n";
    return kExitOk;
  }

  const ex::Result result = ex::run_experiment(cfg);
  ex::write_csv_file(result, cfg.output_path);

  std::cout << "experiment " << ex::kind_name(cfg.kind) << "  seed " << cfg.seed << "  trials "
            << cfg.trials << "\n";
  ex::print_summary(ex::summarize(result), std::cout);
  if (result.capped_cells)
    std::cout << "observation probability capped at 1 in " << result.capped_cells << " cells\n";
  if (result.clipped_entries)
    std::cout << "probability entries clipped into [0, 1]: " << result.clipped_entries << "\n";
  std::cout << "wrote " << result.records.size() << " rows to " << cfg.output_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-signal
// ---------------------------------------------------------------------------

int cmd_gen_signal(std::size_t n, const std::string& lambda_list, double mu_target, int scheme,
                   std::uint64_t seed, const std::string& out) {
  const std::vector<double> lambda = parse_list(lambda_list);
  const std::size_t r = lambda.size();
  if (r == 0 || r > n) throw ConfigError("gen-signal: need 1 <= r <= n eigenvalues");

  RandomSource src(seed, 0);
  DenseMatrix u(n, r);
  for (std::size_t c = 0; c < r; ++c) {
    for (int attempt = 0;; ++attempt) {
      DenseVector v = scheme == 1 ? cohspec::scheme_one(n, mu_target, src)
                                  : cohspec::scheme_two(n, mu_target, src);
      for (std::size_t prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += v[i] * u.at(i, prev);
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * u.at(i, prev);
      }
      const double nrm = cohspec::norm2(v);
      if (nrm > 1e-6) {
        for (std::size_t i = 0; i < n; ++i) u.at(i, c) = v[i] / nrm;
        break;
      }
      if (attempt >= 8) throw std::runtime_error("gen-signal: could not orthonormalize block");
    }
  }

  const auto inst = cohspec::make_signal(lambda, u);
  cohspec::write_matrix_file(inst.m_star, out);
  const auto rep = cohspec::coherence(u, &lambda);
  std::printf("wrote %zux%zu signal to %s\n", n, n, out.c_str());
  std::printf("realized mu %.6g  mu0 %.6g  kappa %.6g\n", rep.mu, rep.mu0, rep.kappa);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eigen
// ---------------------------------------------------------------------------

int cmd_eigen(const std::string& path, bool symmetric, std::size_t top, double tol) {
  const DenseMatrix m = cohspec::read_matrix_file(path);
  cohspec::EigenEstimate est;
  if (symmetric)
    est = cohspec::symmetric_spectrum(m, std::max(tol, 1e-13));
  else
    est = cohspec::full_spectrum(m, tol);
  const std::size_t count = top == 0 ? est.size() : std::min(top, est.size());
  std::printf("%-22s %-22s %-10s %s\n", "re", "im", "real?", "residual");
  for (std::size_t i = 0; i < count; ++i) {
    const auto lam = est.eigenvalues[i];
    std::printf("%-22.15g %-22.15g %-10s ", lam.real(), lam.imag(),
                est.is_real[i] ? "real" : "complex");
    if (est.eigenvectors[i])
      std::printf("%.3g\n", est.residuals[i]);
    else
      std::printf("-\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

int cmd_bounds(double sigma, double B, double n, double mu, std::optional<double> lambda_star,
               std::optional<double> a_inf, int k, int p) {
  namespace bd = cohspec::bounds;
  std::printf("%-28s %-16s %-16s %-16s\n", "bound", "total", "sigma-branch", "B-branch");
  auto row = [](const char* name, const bd::BoundValue& v) {
    std::printf("%-28s %-16.8g %-16.8g %-16.8g\n", name, v.total, v.branch_sigma, v.branch_B);
  };
  row("spectral_norm", bd::spectral_norm_bound(sigma, B, n));
  row("prior_eigenvalue", bd::prior_eigenvalue_bound(sigma, B, n, mu));
  const double ai = a_inf ? *a_inf : std::sqrt(mu / n);
  if (sigma > 0 && B > 0) {
    try {
      std::printf("%-28s %d\n", "crossover exponent k0", bd::crossover_exponent(mu, ai, sigma, B, n));
    } catch (const std::exception& e) {
      std::printf("%-28s n/a (%s)\n", "crossover exponent k0", e.what());
    }
  }
  if (lambda_star) {
    try {
      row("master_rank_one", bd::master_rank_one(sigma, B, n, mu, *lambda_star, ai));
      row("eigenvalue_rank_one", bd::eigenvalue_rank_one(sigma, B, n, mu, *lambda_star));
    } catch (const std::exception& e) {
      std::printf("%-28s n/a (%s)\n", "rank_one bounds", e.what());
    }
  }
  if (k >= 2) {
    try {
      row("sparse_pair", bd::sparse_pair_bound(n, k, sigma, B, n, n, ai, ai));
      row("unit_pair", bd::unit_pair_bound(n, k, sigma, B, ai, ai));
      row("mean_power", bd::mean_power_bound(n, k, sigma, B));
      row("symmetric_pair", bd::symmetric_pair_bound(n, k, sigma, B, ai, ai));
      if (p >= 2)
        row("even_moment", bd::even_moment_bound(n, k, p, sigma, B, n, n, ai, ai));
    } catch (const std::exception& e) {
      std::printf("%-28s n/a (%s)\n", "k-power bounds", e.what());
    }
  }
  row("linear_form", bd::linear_form_bound(sigma, B, n, ai, ai));
  std::printf("convention: %s\n", bd::BoundValue{}.constants_convention);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify-oracle
// ---------------------------------------------------------------------------

cohspec::DiscreteDist three_point() {
  return cohspec::DiscreteDist::make({{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}});
}

int cmd_verify_oracle(std::size_t n, int support, const std::string& dist_spec, bool symmetric,
                      double budget) {
  namespace oc = cohspec::oracle;
  cohspec::DiscreteDist dist;
  if (!dist_spec.empty()) {
    std::vector<std::pair<double, double>> sup;
    std::stringstream ss(dist_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("bad --dist entry: " + item);
      sup.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    dist = cohspec::DiscreteDist::make(sup, symmetric);
  } else if (support == 2) {
    dist = cohspec::DiscreteDist::rademacher();
  } else if (support == 3) {
    dist = three_point();
  } else {
    throw ConfigError("--support must be 2 or 3 (or give --dist)");
  }
  if (symmetric && !dist.is_symmetric())
    throw ConfigError("distribution is not symmetric about 0");

  // Budget pre-checks for both enumeration shapes used below.
  oc::enumeration_states(dist.support.size(), n * n, budget);
  oc::enumeration_states(dist.support.size(), n * (n + 1) / 2, budget);

  bool all_pass = true;
  auto verdict = [&](const char* name, double value, double tol) {
    const bool pass = std::abs(value) <= tol;
    all_pass = all_pass && pass;
    std::printf("%-38s %-10s %.3e\n", name, pass ? "pass" : "FAIL", value);
  };

  std::vector<DenseVector> xs;
  xs.push_back(DenseVector::basis(n, 0));
  xs.push_back(DenseVector::basis(n, n - 1));
  DenseVector flat(n, 1.0 / std::sqrt(double(n)));
  xs.push_back(flat);
  RandomSource src(17, 4);
  xs.push_back(src.sphere(n));
  xs.push_back(src.sphere(n));

  std::printf("exact symmetric-moment identity suite (n=%zu, support=%zu)\n", n, dist.support.size());
  char label[96];
  for (int k = 1; k <= 4; ++k) {
    const double trace = oc::exact_trace_moment(k, dist, n, budget);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const auto& x = xs[a];
      const auto& y = xs[(a + 1) % xs.size()];
      const double sym = oc::exact_symmetric_moment(x, y, k, dist, n, false, budget);
      const double poff = oc::exact_symmetric_moment(x, y, k, dist, n, true, budget);
      std::snprintf(label, sizeof label, "offdiag zero   k=%d pair=%zu", k, a);
      verdict(label, poff, 1e-12);
      if (k % 2 == 1) {
        std::snprintf(label, sizeof label, "odd-k zero     k=%d pair=%zu", k, a);
        verdict(label, sym, 1e-12);
      }
      const double iid = cohspec::dot(x, y) / double(n) * trace;
      std::snprintf(label, sizeof label, "iid trace      k=%d pair=%zu", k, a);
      verdict(label, sym - iid, 1e-12);
    }
  }

  std::printf("even-moment ratio table (exact centered moment / bound, constants = 1)\n");
  for (std::size_t nn : {std::size_t(2), std::size_t(3)}) {
    if (nn > n) continue;
    for (const auto& d : {cohspec::DiscreteDist::rademacher(), three_point()}) {
      for (int k : {2, 3}) {
        for (int p : {2, 4}) {
          DenseVector e1 = DenseVector::basis(nn, 0);
          DenseVector fl(nn, 1.0 / std::sqrt(double(nn)));
          for (const auto* pr : {&e1, &fl}) {
            const auto rep = oc::moment_report(*pr, *pr, k, p, d, nn, budget);
            std::printf("  n=%zu |S|=%zu k=%d p=%d %-6s mean %+.3e moment %.3e ratio %.3e\n",
                        nn, d.support.size(), k, p, pr == &e1 ? "e1" : "flat", rep.exact_mean,
                        rep.exact_centered_p, rep.ratio);
          }
        }
      }
    }
  }

  std::printf("identities: %s\n", all_pass ? "all pass" : "FAILURES");
  return all_pass ? kExitOk : 1;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open CSV: " + csv_path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("experiment,", 0) != 0)
    throw ConfigError("unrecognized CSV header");

  struct Key {
    std::string exp;
    double mu;
    bool operator<(const Key& o) const { return std::tie(exp, mu) < std::tie(o.exp, o.mu); }
  };
  std::map<Key, std::map<std::size_t, std::pair<double, std::size_t>>> groups;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 8) throw ConfigError("bad CSV row: " + line);
    const Key key{fields[0], std::stod(fields[2])};
    const std::size_t nval = std::size_t(std::stoull(fields[1]));
    auto& cell = groups[key][nval];
    cell.first += std::stod(fields[7]);
    cell.second += 1;
  }

  std::printf("%-16s %-10s %-8s %-10s %-10s %s\n", "experiment", "mu_target", "points", "slope",
              "intercept", "r^2");
  for (const auto& [key, cells] : groups) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [nval, acc] : cells)
      if (acc.second > 0 && acc.first > 0)
        points.emplace_back(double(nval), acc.first / double(acc.second));
    if (points.size() < 3) {
      std::printf("%-16s %-10.6g %-8zu (need >= 3 n points)\n", key.exp.c_str(), key.mu,
                  points.size());
      continue;
    }
    const auto fit = ex::fit_rate(points);
    std::printf("%-16s %-10.6g %-8zu %-10.4f %-10.4f %.4f\n", key.exp.c_str(), key.mu,
                points.size(), fit.slope, fit.intercept, fit.r_squared);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherence-aware spectral estimation toolkit"};
  app.require_subcommand(1);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo experiment and write CSV");
  std::string exp_name, exp_config, exp_nlist, exp_mulist, exp_out;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_trials, exp_threads;
  std::optional<double> exp_mucoef;
  std::optional<int> exp_scheme;
  bool exp_dump = false;
  exp->add_option("name", exp_name, "gauss_denoise | completion | network")->required();
  exp->add_option("--config", exp_config, "JSON config file (flags override)");
  exp->add_option("--seed", exp_seed, "master seed (required for stochastic runs)");
  exp->add_option("--trials", exp_trials, "trials per (n, mu) cell");
  exp->add_option("--n", exp_nlist, "comma-separated n grid");
  exp->add_option("--mu-exp", exp_mulist, "comma-separated mu exponents");
  exp->add_option("--mu-coef", exp_mucoef, "mu coefficient c in mu = c n^alpha");
  exp->add_option("--scheme", exp_scheme, "direction scheme (1 or 2)");
  exp->add_option("--out", exp_out, "output CSV path");
  exp->add_option("--threads", exp_threads, "worker threads (default COHSPEC_THREADS)");
  exp->add_flag("--dump-config", exp_dump, "print the canonical config and exit");

  // gen-signal
  auto* gen = app.add_subcommand("gen-signal", "generate a low-rank signal matrix file");
  std::size_t gen_n = 0;
  std::string gen_lambda = "1", gen_out;
  double gen_mu = 1.0;
  int gen_scheme = 1;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--n", gen_n, "dimension")->required();
  gen->add_option("--lambda", gen_lambda, "comma-separated eigenvalues (descending modulus)");
  gen->add_option("--mu-target", gen_mu, "target coherence");
  gen->add_option("--scheme", gen_scheme, "direction scheme (1 or 2)");
  gen->add_option("--seed", gen_seed, "master seed (required)");
  gen->add_option("--out", gen_out, "output matrix file")->required();

  // eigen
  auto* eig = app.add_subcommand("eigen", "print the spectrum of a stored matrix");
  std::string eig_path;
  bool eig_sym = false;
  std::size_t eig_top = 0;
  double eig_tol = 1e-10;
  eig->add_option("matrix", eig_path, "matrix file")->required();
  eig->add_flag("--symmetric", eig_sym, "use the symmetric (Jacobi) path");
  eig->add_option("--top", eig_top, "print only the top-r eigenvalues");
  eig->add_option("--tol", eig_tol, "residual tolerance");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate the bound formulas");
  double bnd_sigma = 1.0, bnd_B = 1.0, bnd_n = 1000.0, bnd_mu = 1.0;
  std::optional<double> bnd_lambda, bnd_ainf;
  int bnd_k = 2, bnd_p = 2;
  bnd->add_option("--sigma", bnd_sigma, "noise sigma");
  bnd->add_option("--B", bnd_B, "noise magnitude cap");
  bnd->add_option("--n", bnd_n, "dimension");
  bnd->add_option("--mu", bnd_mu, "coherence");
  bnd->add_option("--lambda-star", bnd_lambda, "signal eigenvalue");
  bnd->add_option("--a-inf", bnd_ainf, "linear-form vector sup-norm");
  bnd->add_option("--k", bnd_k, "noise power");
  bnd->add_option("--p", bnd_p, "moment order (even)");

  // verify-oracle
  auto* ver = app.add_subcommand("verify-oracle", "run the exact-moment identity suite");
  std::size_t ver_n = 3;
  int ver_support = 2;
  std::string ver_dist;
  bool ver_sym = false;
  double ver_budget = cohspec::oracle::kDefaultBudget;
  ver->add_option("--n", ver_n, "matrix dimension");
  ver->add_option("--support", ver_support, "support size of the built-in distribution (2 or 3)");
  ver->add_option("--dist", ver_dist, "custom support as v:p,v:p,...");
  ver->add_flag("--symmetric", ver_sym, "demand a symmetric-about-0 distribution");
  ver->add_option("--budget", ver_budget, "enumeration state budget");

  // fit
  auto* fit = app.add_subcommand("fit", "fit log-log rates from an experiment CSV");
  std::string fit_csv;
  fit->add_option("csv", fit_csv, "experiment CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (app.got_subcommand(exp))
      return cmd_experiment(exp_name, exp_config, exp_seed, exp_trials, exp_nlist, exp_mulist,
                            exp_mucoef, exp_scheme, exp_out, exp_threads, exp_dump);
    if (app.got_subcommand(gen)) {
      if (!gen_seed) throw ConfigError("stochastic command requires an explicit --seed");
      return cmd_gen_signal(gen_n, gen_lambda, gen_mu, gen_scheme, *gen_seed, gen_out);
    }
    if (app.got_subcommand(eig)) return cmd_eigen(eig_path, eig_sym, eig_top, eig_tol);
    if (app.got_subcommand(bnd))
      return cmd_bounds(bnd_sigma, bnd_B, bnd_n, bnd_mu, bnd_lambda, bnd_ainf, bnd_k, bnd_p);
    if (app.got_subcommand(ver))
      return cmd_verify_oracle(ver_n, ver_support, ver_dist, ver_sym, ver_budget);
    if (app.got_subcommand(fit)) return cmd_fit(fit_csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cohspec::oracle::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << " (" << e.requested_states << " states)\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
