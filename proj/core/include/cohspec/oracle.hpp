#pragma once

#include <vector>

#include "cohspec/linalg.hpp"
#include "cohspec/noise.hpp"

namespace cohspec {
namespace oracle {

// Thrown when an enumeration would exceed the state budget.
struct BudgetError : std::runtime_error {
  BudgetError(const std::string& what, double states)
      : std::runtime_error(what), requested_states(states) {}
  double requested_states = 0.0;
};

constexpr double kDefaultBudget = 1e6;

struct MomentReport {
  double exact_mean = 0.0;
  double exact_centered_p = 0.0;
  double bound_value = 0.0;
  double ratio = 0.0;  // exact_centered_p / bound_value when bound_value > 0
};

// Exact mean and centered p-th moment of x^T H^k y with the matching
// closed-form moment bound (constants = 1) and their ratio.
MomentReport moment_report(const DenseVector& x, const DenseVector& y, int k, int p,
                           const DiscreteDist& dist, std::size_t n,
                           double budget = kDefaultBudget);

// Number of enumeration states |support|^cells; throws BudgetError beyond
// the budget.
double enumeration_states(std::size_t support_size, std::size_t cells,
                          double budget = kDefaultBudget);

// Exact E[x^T H^k y] over i.i.d. entries of an n x n matrix H, by full
// enumeration of all |support|^(n^2) assignments.
double exact_bilinear_mean(const DenseVector& x, const DenseVector& y, int k,
                           const DiscreteDist& dist, std::size_t n,
                           double budget = kDefaultBudget);

// Exact E[(x^T H^k y - E x^T H^k y)^p], p even.
double exact_centered_moment(const DenseVector& x, const DenseVector& y, int k, int p,
                             const DiscreteDist& dist, std::size_t n,
                             double budget = kDefaultBudget);

// Exact E[x^T W^k y] over symmetric W (upper triangle including diagonal
// enumerated, |support|^(n(n+1)/2) states). With offdiag_only the diagonal of
// W^k is zeroed before the bilinear form (off-diagonal projection).
double exact_symmetric_moment(const DenseVector& x, const DenseVector& y, int k,
                              const DiscreteDist& dist, std::size_t n, bool offdiag_only = false,
                              double budget = kDefaultBudget);

// Exact E[tr(W^k)] over symmetric W.
double exact_trace_moment(int k, const DiscreteDist& dist, std::size_t n,
                          double budget = kDefaultBudget);

// Empirical quantiles of |x^T H^k y - mean| over Monte-Carlo draws of the
// noise model.
std::vector<double> mc_deviation_quantiles(const NoiseSpec& model, const DenseVector& x,
                                           const DenseVector& y, int k, std::size_t trials,
                                           const std::vector<double>& quantiles,
                                           RandomSource& src);

}  // namespace oracle
}  // namespace cohspec
