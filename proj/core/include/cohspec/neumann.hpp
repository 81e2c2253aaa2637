#pragma once

#include <vector>

#include "cohspec/linalg.hpp"
#include "cohspec/signal.hpp"

namespace cohspec {

// values[k] = x^T H^k y for k = 0..k_max; values[0] is exactly x^T y.
struct PowerSequence {
  std::vector<double> values;
  std::size_t k_max = 0;
};

// Magnitude-band split of a unit vector: band r <= m holds entries with
// |x_i| in (e^-r, e^-(r-1)], the final band (index m+1) holds |x_i| <= e^-m,
// with m = ceil(ln(n)/2). Empty bands are omitted; band_index records the
// position of each stored band.
struct BandDecomposition {
  std::vector<DenseVector> bands;
  std::vector<std::size_t> band_index;  // 1-based band positions, <= m + 1
  std::size_t m = 0;                    // ceil(ln(n)/2)
};

// Computes x^T H^k y for k = 0..k_max by iterated matvec; H^k is never
// formed, cost O(k_max n^2).
PowerSequence bilinear_powers(const DenseMatrix& h, const DenseVector& x, const DenseVector& y,
                              std::size_t k_max);

// K-truncated right-hand side of the exact eigenvector series
//   u_l = sum_j (lambda*_j / lambda_l) (u*_j . u_l) sum_k lambda_l^-k H^k u*_j.
// Requires ||H||_op < |lambda_l| (strict) so the tail is geometric. This is a
// verification device: it takes the eigenpair (lambda_l, u_l) as input.
DenseVector neumann_reconstruct(const DenseMatrix& h, const SignalSpec& signal, double lambda_l,
                                const DenseVector& u_l, std::size_t truncation_order);

// As above with a precomputed operator norm of H (skips the internal check
// when the caller already knows it).
DenseVector neumann_reconstruct(const DenseMatrix& h, const SignalSpec& signal, double lambda_l,
                                const DenseVector& u_l, std::size_t truncation_order,
                                double h_op_norm);

BandDecomposition band_decompose(const DenseVector& x);

}  // namespace cohspec
