#pragma once

#include <limits>
#include <vector>

#include "cohspec/linalg.hpp"
#include "cohspec/rng.hpp"

namespace cohspec {

// Rank-r symmetric signal M* = U* diag(lambda*) U*^T with |lambda*_1| >= ...
// >= |lambda*_r| > 0 and orthonormal eigenvector block U* (n x r).
struct SignalSpec {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<double> lambda_star;  // sorted by descending modulus
  DenseMatrix u_star;               // n x r, orthonormal columns

  double lambda_max_abs() const;
  double lambda_min_abs() const;
  double condition_number() const;  // kappa = |lambda*_max| / |lambda*_min|
  DenseVector column(std::size_t j) const;
};

struct CoherenceReport {
  double mu = 0.0;     // n * ||U*||_inf^2, in [1, n]
  double mu0 = 0.0;    // (n/r) * ||U*||_{2,inf}^2, in [1, n/r]
  double kappa = 1.0;  // lambda ratio when eigenvalues are attached
};

struct SignalInstance {
  SignalSpec spec;
  DenseMatrix m_star;
};

// Coherence statistics of an orthonormal block (columns checked to 1e-10).
CoherenceReport coherence(const DenseMatrix& u_star,
                          const std::vector<double>* lambda_star = nullptr);

// Coherence of a single unit vector.
CoherenceReport coherence(const DenseVector& u);

// Scheme I unit vector: support of size m = floor(n/mu_target) chosen
// uniformly without replacement, nonzero block uniform on S^{m-1}.
DenseVector scheme_one(std::size_t n, double mu_target, RandomSource& src);

// Scheme II unit vector: normalized mix of an m-sparse +-1/sqrt(m) vector and
// a uniform sphere vector. Weights default to the 0.7 / 0.3 mix and are
// exposed for tests.
DenseVector scheme_two(std::size_t n, double mu_target, RandomSource& src,
                       double sparse_weight = 0.7, double dense_weight = 0.3);

// Materializes M* = sum_j lambda*_j u*_j u*_j^T.
SignalInstance make_signal(const std::vector<double>& lambda_star, const DenseMatrix& u_star);

// Convenience: rank-one signal from a unit vector.
SignalInstance make_rank_one(double lambda_star, const DenseVector& u_star);

// Eigen-gap Delta*_l = min_{k != l} |lambda*_l - lambda*_k|; +infinity when
// r = 1. l is 1-based as in the r-indexed spectrum.
double eigen_gap(const std::vector<double>& lambda_star, std::size_t l);

}  // namespace cohspec
