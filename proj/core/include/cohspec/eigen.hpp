#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "cohspec/linalg.hpp"
#include "cohspec/rng.hpp"

namespace cohspec {

// Estimated spectrum, sorted by descending modulus. Eigenvectors are stored
// only for eigenvalues classified as real; residuals hold ||A u - lambda u||_2
// for every stored vector (NaN where no vector is available).
struct EigenEstimate {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<std::optional<DenseVector>> eigenvectors;
  std::vector<double> residuals;
  std::vector<bool> is_real;

  std::size_t size() const { return eigenvalues.size(); }
};

struct LeadingEigenpair {
  double value = 0.0;
  DenseVector vector;
  double residual = 0.0;
  int iterations = 0;
};

struct EigOptions {
  std::size_t max_n = 2000;        // dense algorithm size limit
  std::size_t refine_max_n = 8;    // char-poly Newton refinement cutoff
  double realness_tol = 1e-8;      // |Im| <= tol * (1 + |lambda|) counts as real
  int max_sweeps = 0;              // 0: use 40 * n QR steps
};

// Power iteration with Rayleigh-quotient estimate. Requires the dominant
// eigenvalue to be real and simple; a complex dominant pair shows up as
// non-convergence. Start vectors come from src, redrawn on stalls (up to 5
// attempts). Returned vector has unit norm and its first nonzero entry
// positive.
LeadingEigenpair leading_eigenpair(const DenseMatrix& a, double tol = 1e-10,
                                   int max_iter = 1000,
                                   RandomSource src = RandomSource(0xC0FFEEULL, 0));

// Power iteration against an abstract operator y = A x (for implicit or
// sparse matrices).
template <typename Apply>
LeadingEigenpair leading_eigenpair_op(std::size_t n, Apply&& apply, double tol, int max_iter,
                                      RandomSource src);

// All eigenvalues via Householder reduction to Hessenberg form followed by
// Francis double-shift QR. Real eigenvectors are recovered by inverse
// iteration on the original matrix. For tiny matrices (n <= refine_max_n)
// eigenvalues are polished by Newton iteration on det(A - zI) evaluated in
// extended precision, which repairs the ill-conditioning of repeated roots.
EigenEstimate full_spectrum(const DenseMatrix& a, double tol = 1e-10,
                            const EigOptions& opts = {});

// Cyclic Jacobi for symmetric input (asymmetry beyond 1e-12 * scale is an
// error). All eigenvalues real, eigenvectors orthonormal.
EigenEstimate symmetric_spectrum(const DenseMatrix& s, double tol = 1e-12);

// Top-r eigenvalues by modulus from full_spectrum with real/complex flags.
EigenEstimate top_r_real(const DenseMatrix& a, std::size_t r, double tol = 1e-10,
                         const EigOptions& opts = {});

template <typename Apply>
LeadingEigenpair leading_eigenpair_op(std::size_t n, Apply&& apply, double tol, int max_iter,
                                      RandomSource src) {
  if (n == 0) throw std::invalid_argument("leading_eigenpair_op: empty operator");
  if (tol <= 0) throw std::invalid_argument("leading_eigenpair_op: tol must be positive");

  double last_lambda = 0.0;
  double last_res = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 5; ++attempt) {
    DenseVector u = src.sphere(n);
    std::vector<double> w(n);
    bool stalled = false;
    for (int it = 0; it < max_iter; ++it) {
      apply(u.data.data(), w.data());
      double nw = 0.0;
      for (double v : w) nw += v * v;
      nw = std::sqrt(nw);
      if (nw == 0.0 || !std::isfinite(nw)) {
        stalled = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) u[i] = w[i] / nw;
      apply(u.data.data(), w.data());
      double lambda = 0.0;
      for (std::size_t i = 0; i < n; ++i) lambda += u[i] * w[i];
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = w[i] - lambda * u[i];
        res += d * d;
      }
      res = std::sqrt(res);
      last_lambda = lambda;
      last_res = res;
      if (res <= tol * std::abs(lambda)) {
        for (double v : u.data) {
          if (v != 0.0) {
            if (v < 0.0)
              for (double& q : u.data) q = -q;
            break;
          }
        }
        return {lambda, std::move(u), res, it + 1};
      }
    }
    if (!stalled) break;
  }
  throw ConvergenceError(
      "leading_eigenpair: power iteration did not converge (dominant eigenvalue may be complex)",
      last_lambda, last_res);
}

}  // namespace cohspec
