#pragma once

#include <cstdint>
#include <string>

namespace cohspec {
namespace bounds {

// Evaluated bound with both max-branches exposed. All suppressed universal
// constants default to 1; `constants_convention` records that choice.
struct BoundValue {
  double total = 0.0;
  double branch_sigma = 0.0;
  double branch_B = 0.0;
  const char* constants_convention = "all suppressed universal constants set to 1";
};

struct Constants {
  double c1 = 1.0;  // spectral norm bound
  double c2 = 1.0;  // high-probability concentration bounds
  double c3 = 1.0;  // rank-r eigenvalue bound
  double C1 = 1.0;  // rank-one signal-strength condition
  double C2 = 1.0;  // rank-r signal-strength condition
};

struct ConditionCheck {
  bool pass = false;
  double margin = 0.0;  // lhs - rhs (>= 0 means pass)
};

// ||H|| <= c1 max{ sigma sqrt(n log n), B log n }.
BoundValue spectral_norm_bound(double sigma, double B, double n, const Constants& c = {});

// Prior-work eigenvalue bound: spectral_norm_bound * sqrt(mu / n).
BoundValue prior_eigenvalue_bound(double sigma, double B, double n, double mu,
                                  const Constants& c = {});

// Crossover exponent k0 = ceil[(ln mu + 2 ln a_inf) / (2 ln(sigma/B) + ln n -
// 3 ln ln n)], clamped below at 0. Throws when the denominator is not
// positive (regime violation).
int crossover_exponent(double mu, double a_inf, double sigma, double B, double n);

// Master rank-one linear-form bound
//   (ln^2 n / sqrt(n)) max{ B a_inf sqrt(mu) ln^3 n / |lambda*|,
//                           (sigma sqrt(n) ln^{3/2} n / |lambda*|)^k0 }.
// Requires |lambda*| >= C1 max{ sigma sqrt(n ln^3 n), B ln^3 n }.
BoundValue master_rank_one(double sigma, double B, double n, double mu, double lambda_star,
                           double a_inf, const Constants& c = {});

// Rank-one eigenvalue bound
//   max{ B mu ln^5 n / n,
//        (sigma sqrt(n) ln^{3/2} n / |lambda*|)^k0 |lambda*| ln^2 n / sqrt(n) }
// with a_inf = sqrt(mu / n) (the linear form taken at a = u*).
BoundValue eigenvalue_rank_one(double sigma, double B, double n, double mu,
                               double lambda_star, const Constants& c = {});

// Signal-strength condition |lambda*| >= C1 max{sigma sqrt(n ln^3 n), B ln^3 n}.
ConditionCheck signal_condition_rank_one(double lambda_star, double sigma, double B,
                                         double n, const Constants& c = {});

// Even-moment bound for x^T H^k y (k >= 2, even p >= 2):
//   2^{(k+1)p} (kp)^{kp} p (x_inf y_inf)^p
//     * max{ sigma^{kp} n^{kp/2} (Nx Ny)^{p/2} / (n^{p/2} (kp)^{kp/2}),
//            B^{pk} sigma^{2k} n^k Nx Ny / (B^{2k} n (kp)^k) }.
// Evaluated in the log domain. The asymptotic validity condition
// kp <= ln^3 n is reported by moment_regime_ok, not enforced.
BoundValue even_moment_bound(double n, int k, int p, double sigma, double B, double Nx,
                             double Ny, double x_inf, double y_inf);
bool moment_regime_ok(double n, int k, int p);

// High-probability sparse-vector bound (2 <= k <= 20 ln n):
//   c2^k x_inf y_inf max{ (sigma^2 n ln^3 n)^{k/2} sqrt(Nx Ny / n), (B ln^3 n)^k }.
BoundValue sparse_pair_bound(double n, int k, double sigma, double B, double Nx, double Ny,
                               double x_inf, double y_inf, const Constants& c = {});

// Unit-vector concentration bound:
//   c2^k ln^2 n max{ sqrt((sigma^2 n ln^3 n)^k / n), (B ln^3 n)^k x_inf y_inf }.
BoundValue unit_pair_bound(double n, int k, double sigma, double B, double x_inf,
                           double y_inf, const Constants& c = {});

// Mean bound: ln^2 n (2k)^k max{ sigma^2 B^{k-2} / k, (sigma^2 n / k)^{k/2 - 2} }.
BoundValue mean_power_bound(double n, int k, double sigma, double B);

// Symmetric-noise analogue of unit_pair_bound with (2 c2)^k leading factor.
BoundValue symmetric_pair_bound(double n, int k, double sigma, double B, double x_inf,
                          double y_inf, const Constants& c = {});

// k = 1 Bernstein bound: c2 max{ sigma sqrt(ln n), x_inf y_inf B ln n }.
BoundValue linear_form_bound(double sigma, double B, double n, double x_inf, double y_inf,
                             const Constants& c = {});

// Exact Catalan number C_m = (2m)! / (m! (m+1)!).
std::uint64_t catalan(int m);

// Even-k symmetric mean bound C_{k/2} (sigma^2 n)^{k/2}; exactly 0 for odd k.
double symmetric_mean_bound(double n, int k, double sigma);

// Rank-r master bound
//   sqrt(kappa^2 r ln^4 n / n) max{ sqrt(mu) B ln^3 n a_inf / lambda_min,
//                                   (sigma sqrt(n ln^3 n) / lambda_min)^k0 }.
BoundValue rank_r_master(double sigma, double B, double n, double mu, double lambda_min,
                         double lambda_max, std::size_t r, double a_inf, const Constants& c = {});

// Rank-r eigenvalue bound
//   c3 r^2 max{ kappa mu B ln^3 n / n,
//               (kappa sigma sqrt(n ln^3 n))^k0 / (lambda_max^{k0-1} sqrt(n)) }
// with a_inf = sqrt(mu / n).
BoundValue rank_r_eigenvalue(double sigma, double B, double n, double mu, double lambda_max,
                             double kappa, std::size_t r, const Constants& c = {});

// Gap condition Delta*_l >= rank_r_eigenvalue(...). delta_l may be +infinity.
ConditionCheck gap_condition(double delta_l, double sigma, double B, double n, double mu,
                             double lambda_max, double kappa, std::size_t r,
                             const Constants& c = {});

// Signal-strength condition lambda_max / kappa >= C2 max{sigma sqrt(n ln^3 n), B ln^3 n}.
ConditionCheck signal_condition_rank_r(double lambda_max, double kappa, double sigma, double B,
                                       double n, const Constants& c = {});

// Bernstein tail 2 exp(-min(t^2 / 4 nu, 3 t / 4 L)).
double bernstein_tail(double nu, double L, double t);

}  // namespace bounds
}  // namespace cohspec
