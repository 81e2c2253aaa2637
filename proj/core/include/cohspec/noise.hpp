#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cohspec/linalg.hpp"
#include "cohspec/rng.hpp"

namespace cohspec {

// Finite zero-mean distribution with derived moment parameters.
struct DiscreteDist {
  std::vector<std::pair<double, double>> support;  // (value, prob)
  double sigma2 = 0.0;                             // sum p v^2
  double bound = 0.0;                              // max |v|

  static DiscreteDist make(std::vector<std::pair<double, double>> support,
                           bool require_symmetric = false);
  static DiscreteDist rademacher();
  bool is_symmetric(double tol = 1e-12) const;
};

// Derived Assumption-style noise parameters: sigma caps the per-entry
// standard deviation, B the magnitude (or high-probability magnitude).
struct NoiseParams {
  double sigma = 0.0;
  double B = 0.0;
  // B / (sigma sqrt(n / log^3 n)); < 1 means the B << sigma sqrt(n/log^3 n)
  // regime holds at this n.
  double regime_ratio = 0.0;
};

enum class NoiseModel { gaussian_hetero, completion_mask, bernoulli_network, discrete_iid };

// Tagged noise description, sufficient to sample a noise matrix.
struct NoiseSpec {
  NoiseModel model = NoiseModel::discrete_iid;
  bool symmetric = false;

  // gaussian_hetero
  double sigma_lo = 0.7, sigma_hi = 1.0;
  // completion_mask
  DenseMatrix m_star;
  double obs_prob = 1.0;
  // bernoulli_network
  DenseMatrix prob_matrix;
  // discrete_iid
  DiscreteDist dist;

  static NoiseSpec gaussian(double lo = 0.7, double hi = 1.0, bool symmetric = false);
  static NoiseSpec completion(DenseMatrix m_star, double obs_prob);
  static NoiseSpec network(DenseMatrix prob_matrix);
  static NoiseSpec discrete(DiscreteDist dist, bool symmetric = false);
};

struct GaussianSample {
  DenseMatrix h;
  NoiseParams params;
};

struct CompletionSample {
  DenseMatrix m;  // observed matrix, entries in {0, M*_ij / p}
  DenseMatrix h;  // m - m_star
  NoiseParams params;
};

struct NetworkSample {
  DenseMatrix a;  // adjacency
  DenseMatrix h;  // a - p
  NoiseParams params;
};

struct DiscreteSample {
  DenseMatrix h;
  NoiseParams params;
};

// H_ij ~ N(0, sigma_ij^2) with sigma_ij i.i.d. uniform on [lo, hi]. Reports
// sigma = hi and B = b_log_coefficient * sqrt(log n) (tail-level cap for the
// unbounded Gaussian).
GaussianSample sample_gaussian_hetero(std::size_t n, RandomSource& src, double lo = 0.7,
                                      double hi = 1.0, double b_log_coefficient = 5.0);

// Entry observed with probability obs_prob and rescaled by 1/obs_prob.
// Params follow the rank-one convention B = ||M*||_inf / p, sigma =
// ||M*||_inf / sqrt(p).
CompletionSample sample_completion(const DenseMatrix& m_star, double obs_prob,
                                   RandomSource& src);

// A_ij ~ Bernoulli(P_ij); B = 1 and sigma = sqrt(max_ij P_ij).
NetworkSample sample_network(const DenseMatrix& p, RandomSource& src);

// i.i.d. entries over a finite support; sigma^2 = sum p v^2, B = max |v|.
// With symmetric = true the support must be closed under negation with
// matched probabilities.
DiscreteSample sample_discrete(std::size_t n, const DiscreteDist& dist, RandomSource& src,
                               bool symmetric = false);

// Samples H for any NoiseSpec (the n argument is ignored for matrix-backed
// models, which fix their own dimension).
DenseMatrix sample_noise(const NoiseSpec& spec, std::size_t n, RandomSource& src);

// Mirror of the upper triangle (diagonal included) onto the lower one.
DenseMatrix symmetrize(const DenseMatrix& h);

// B / (sigma sqrt(n / log^3 n)); < 1 indicates the asymptotic regime holds.
double regime_check(const NoiseParams& params, std::size_t n);

}  // namespace cohspec
