#include "cohspec/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace cohspec {
namespace bounds {

namespace {

double ln(double n) {
  if (!(n >= 3.0)) throw std::invalid_argument("bounds: n must be at least 3 (log n > 1)");
  return std::log(n);
}

BoundValue two_branch(double branch_sigma, double branch_B) {
  BoundValue b;
  b.branch_sigma = branch_sigma;
  b.branch_B = branch_B;
  b.total = std::max(branch_sigma, branch_B);
  return b;
}

void check_k_range(double n, int k, int k_min) {
  if (k < k_min || double(k) > 20.0 * ln(n))
    throw std::invalid_argument("bounds: k outside [k_min, 20 ln n]");
}

}  // namespace

BoundValue spectral_norm_bound(double sigma, double B, double n, const Constants& c) {
  const double l = ln(n);
  return two_branch(c.c1 * sigma * std::sqrt(n * l), c.c1 * B * l);
}

BoundValue prior_eigenvalue_bound(double sigma, double B, double n, double mu,
                                  const Constants& c) {
  if (mu < 1.0 || mu > n)
    throw std::invalid_argument("prior_eigenvalue_bound: mu outside [1, n]");
  BoundValue base = spectral_norm_bound(sigma, B, n, c);
  const double f = std::sqrt(mu / n);
  return two_branch(base.branch_sigma * f, base.branch_B * f);
}

int crossover_exponent(double mu, double a_inf, double sigma, double B, double n) {
  if (sigma <= 0.0 || B <= 0.0) throw std::invalid_argument("crossover_exponent: sigma, B must be positive");
  if (a_inf <= 0.0) throw std::invalid_argument("crossover_exponent: a_inf must be positive");
  const double l = ln(n);
  const double denom = 2.0 * std::log(sigma / B) + l - 3.0 * std::log(l);
  if (denom <= 0.0)
    throw std::invalid_argument("crossover_exponent: non-positive denominator (regime violation)");
  const double num = std::log(mu) + 2.0 * std::log(a_inf);
  const int k0 = int(std::ceil(num / denom));
  return k0 < 0 ? 0 : k0;
}

ConditionCheck signal_condition_rank_one(double lambda_star, double sigma, double B,
                                         double n, const Constants& c) {
  const double l = ln(n);
  const double rhs = c.C1 * std::max(sigma * std::sqrt(n * l * l * l), B * l * l * l);
  return {std::abs(lambda_star) >= rhs, std::abs(lambda_star) - rhs};
}

BoundValue master_rank_one(double sigma, double B, double n, double mu, double lambda_star,
                           double a_inf, const Constants& c) {
  if (!signal_condition_rank_one(lambda_star, sigma, B, n, c).pass)
    throw std::invalid_argument("master_rank_one: signal-strength condition violated");
  const double l = ln(n);
  const int k0 = crossover_exponent(mu, a_inf, sigma, B, n);
  const double pre = l * l / std::sqrt(n);
  const double bb = pre * B * a_inf * std::sqrt(mu) * l * l * l / std::abs(lambda_star);
  const double bs =
      pre * std::pow(sigma * std::sqrt(n) * std::pow(l, 1.5) / std::abs(lambda_star), k0);
  return two_branch(bs, bb);
}

BoundValue eigenvalue_rank_one(double sigma, double B, double n, double mu,
                               double lambda_star, const Constants& c) {
  if (!signal_condition_rank_one(lambda_star, sigma, B, n, c).pass)
    throw std::invalid_argument("eigenvalue_rank_one: signal-strength condition violated");
  const double l = ln(n);
  const double a_inf = std::sqrt(mu / n);
  const int k0 = crossover_exponent(mu, a_inf, sigma, B, n);
  const double bb = B * mu * std::pow(l, 5) / n;
  const double bs =
      std::pow(sigma * std::sqrt(n) * std::pow(l, 1.5) / std::abs(lambda_star), k0) *
      std::abs(lambda_star) * l * l / std::sqrt(n);
  return two_branch(bs, bb);
}

BoundValue even_moment_bound(double n, int k, int p, double sigma, double B, double Nx,
                             double Ny, double x_inf, double y_inf) {
  if (k < 2) throw std::invalid_argument("even_moment_bound: k must be at least 2");
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("even_moment_bound: p must be even >= 2");
  if (sigma < 0 || B < 0 || Nx < 0 || Ny < 0 || x_inf < 0 || y_inf < 0)
    throw std::invalid_argument("even_moment_bound: negative argument");
  if (!(n >= 1.0)) throw std::invalid_argument("even_moment_bound: n must be >= 1");
  if (x_inf * y_inf == 0.0) return two_branch(0.0, 0.0);

  // Log-domain evaluation; (kp)^{kp} overflows double well inside the
  // documented k, p range.
  const double kp = double(k) * double(p);
  const double dn = n;
  const double lead = (k + 1) * p * std::log(2.0) + kp * std::log(kp) + std::log(double(p)) +
                      p * std::log(x_inf * y_inf);
  double ls = -std::numeric_limits<double>::infinity();
  if (sigma > 0 && Nx > 0 && Ny > 0)
    ls = kp * std::log(sigma) + 0.5 * kp * std::log(dn) + 0.5 * p * std::log(Nx * Ny) -
         0.5 * p * std::log(dn) - 0.5 * kp * std::log(kp);
  double lb = -std::numeric_limits<double>::infinity();
  if (sigma > 0 && B > 0 && Nx > 0 && Ny > 0)
    lb = (double(p) - 2.0) * k * std::log(B) + 2.0 * k * std::log(sigma) +
         (double(k) - 1.0) * std::log(dn) + std::log(Nx * Ny) - k * std::log(kp);
  return two_branch(std::exp(lead + ls), std::exp(lead + lb));
}

bool moment_regime_ok(double n, int k, int p) {
  const double l = std::log(n);
  return double(k) * double(p) <= l * l * l;
}

BoundValue sparse_pair_bound(double n, int k, double sigma, double B, double Nx, double Ny,
                               double x_inf, double y_inf, const Constants& c) {
  check_k_range(n, k, 2);
  const double l = ln(n);
  const double lead = std::pow(c.c2, k) * x_inf * y_inf;
  const double bs =
      lead * std::pow(sigma * sigma * n * l * l * l, 0.5 * k) * std::sqrt(Nx * Ny / n);
  const double bb = lead * std::pow(B * l * l * l, k);
  return two_branch(bs, bb);
}

BoundValue unit_pair_bound(double n, int k, double sigma, double B, double x_inf,
                           double y_inf, const Constants& c) {
  check_k_range(n, k, 2);
  const double l = ln(n);
  const double lead = std::pow(c.c2, k) * l * l;
  const double bs = lead * std::sqrt(std::pow(sigma * sigma * n * l * l * l, k) / n);
  const double bb = lead * std::pow(B * l * l * l, k) * x_inf * y_inf;
  return two_branch(bs, bb);
}

BoundValue mean_power_bound(double n, int k, double sigma, double B) {
  check_k_range(n, k, 2);
  const double l = ln(n);
  const double lead = l * l * std::pow(2.0 * k, k);
  const double bb = lead * sigma * sigma * std::pow(B, k - 2) / double(k);
  const double bs = lead * std::pow(sigma * sigma * n / double(k), 0.5 * k - 2.0);
  return two_branch(bs, bb);
}

BoundValue symmetric_pair_bound(double n, int k, double sigma, double B, double x_inf,
                          double y_inf, const Constants& c) {
  check_k_range(n, k, 2);
  const BoundValue base = unit_pair_bound(n, k, sigma, B, x_inf, y_inf, c);
  const double f = std::pow(2.0, k);
  return two_branch(f * base.branch_sigma, f * base.branch_B);
}

BoundValue linear_form_bound(double sigma, double B, double n, double x_inf, double y_inf,
                             const Constants& c) {
  const double l = ln(n);
  return two_branch(c.c2 * sigma * std::sqrt(l), c.c2 * x_inf * y_inf * B * l);
}

std::uint64_t catalan(int m) {
  if (m < 0) throw std::invalid_argument("catalan: negative index");
  if (m > 32) throw std::invalid_argument("catalan: index too large for exact u64");
  // C_0 = 1, C_{m+1} = C_m * 2(2m+1)/(m+2); the division is exact.
  std::uint64_t c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * std::uint64_t(i) + 1) / (std::uint64_t(i) + 2);
  return c;
}

double symmetric_mean_bound(double n, int k, double sigma) {
  if (k < 0) throw std::invalid_argument("symmetric_mean_bound: negative k");
  if (k % 2 == 1) return 0.0;
  return double(catalan(k / 2)) * std::pow(sigma * sigma * n, k / 2);
}

ConditionCheck signal_condition_rank_r(double lambda_max, double kappa, double sigma, double B,
                                       double n, const Constants& c) {
  if (kappa < 1.0) throw std::invalid_argument("signal_condition_rank_r: kappa must be >= 1");
  const double l = ln(n);
  const double rhs = c.C2 * std::max(sigma * std::sqrt(n * l * l * l), B * l * l * l);
  return {lambda_max / kappa >= rhs, lambda_max / kappa - rhs};
}

BoundValue rank_r_master(double sigma, double B, double n, double mu, double lambda_min,
                         double lambda_max, std::size_t r, double a_inf, const Constants& c) {
  (void)c;
  if (r < 1) throw std::invalid_argument("rank_r_master: r must be >= 1");
  const double kappa = lambda_max / lambda_min;
  if (kappa < 1.0) throw std::invalid_argument("rank_r_master: kappa must be >= 1");
  const double l = ln(n);
  const int k0 = crossover_exponent(mu, a_inf, sigma, B, n);
  const double pre = std::sqrt(kappa * kappa * double(r) * std::pow(l, 4) / n);
  const double bb = pre * std::sqrt(mu) * B * l * l * l * a_inf / lambda_min;
  const double bs = pre * std::pow(sigma * std::sqrt(n * l * l * l) / lambda_min, k0);
  return two_branch(bs, bb);
}

BoundValue rank_r_eigenvalue(double sigma, double B, double n, double mu, double lambda_max,
                             double kappa, std::size_t r, const Constants& c) {
  if (kappa < 1.0) throw std::invalid_argument("rank_r_eigenvalue: kappa must be >= 1");
  if (r < 1) throw std::invalid_argument("rank_r_eigenvalue: r must be >= 1");
  const double l = ln(n);
  const double a_inf = std::sqrt(mu / n);
  const int k0 = crossover_exponent(mu, a_inf, sigma, B, n);
  const double lead = c.c3 * double(r) * double(r);
  const double bb = lead * kappa * mu * B * l * l * l / n;
  const double bs = lead * std::pow(kappa * sigma * std::sqrt(n * l * l * l), k0) /
                    (std::pow(lambda_max, k0 - 1) * std::sqrt(n));
  return two_branch(bs, bb);
}

ConditionCheck gap_condition(double delta_l, double sigma, double B, double n, double mu,
                             double lambda_max, double kappa, std::size_t r, const Constants& c) {
  if (std::isinf(delta_l)) return {true, std::numeric_limits<double>::infinity()};
  const double rhs = rank_r_eigenvalue(sigma, B, n, mu, lambda_max, kappa, r, c).total;
  return {delta_l >= rhs, delta_l - rhs};
}

double bernstein_tail(double nu, double L, double t) {
  if (nu <= 0 || L <= 0 || t <= 0)
    throw std::invalid_argument("bernstein_tail: arguments must be positive");
  return 2.0 * std::exp(-std::min(t * t / (4.0 * nu), 3.0 * t / (4.0 * L)));
}

}  // namespace bounds
}  // namespace cohspec
