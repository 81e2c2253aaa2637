#include "cohspec/neumann.hpp"

#include <cmath>

#include "cohspec/eigen.hpp"
#include "cohspec/noise.hpp"
#include "doctest.h"

using namespace cohspec;

TEST_CASE("bilinear powers") {
  const DenseVector e1 = DenseVector::basis(2, 0);
  const DenseVector e2 = DenseVector::basis(2, 1);

  const auto zero = bilinear_powers(DenseMatrix(2, 2, 0.0), e1, e1, 4);
  CHECK(zero.values[0] == 1.0);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(zero.values[k] == 0.0);

  const auto ident = bilinear_powers(DenseMatrix::identity(2), e1, e1, 5);
  for (double v : ident.values) CHECK(v == 1.0);

  const auto nilp = bilinear_powers(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}, e1, e2, 3);
  CHECK(nilp.values[0] == 0.0);
  CHECK(nilp.values[1] == 1.0);
  CHECK(nilp.values[2] == 0.0);
  CHECK(nilp.values[3] == 0.0);

  CHECK_THROWS_AS(bilinear_powers(DenseMatrix(2, 2), DenseVector(3), DenseVector(2), 1),
                  std::invalid_argument);
}

TEST_CASE("neumann reconstruction exact cases") {
  RandomSource src(7777, 0);
  const DenseVector u = src.sphere(12);
  const auto inst = make_rank_one(3.0, u);

  // Zero noise: the K = 0 truncation already returns u* exactly.
  const DenseMatrix h0(12, 12, 0.0);
  const DenseVector rec = neumann_reconstruct(h0, inst.spec, 3.0, u, 0);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(rec[i] == doctest::Approx(u[i]));

  // K = 0 with generic (lambda, u_l): (lambda*/lambda)(u*.u_l) u*.
  const DenseVector ul = src.sphere(12);
  const DenseVector r0 = neumann_reconstruct(h0, inst.spec, 2.0, ul, 0);
  const double coeff = (3.0 / 2.0) * dot(u, ul);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(r0[i] == doctest::Approx(coeff * u[i]));

  // Precondition ||H|| < |lambda| is enforced.
  DenseMatrix big(12, 12, 0.0);
  for (std::size_t i = 0; i < 12; ++i) big.at(i, i) = 5.0;
  CHECK_THROWS_AS(neumann_reconstruct(big, inst.spec, 3.0, u, 4), std::invalid_argument);
}

TEST_CASE("neumann series converges to the computed eigenvector") {
  RandomSource src(2025, 1);
  const std::size_t n = 60;
  const DenseVector ustar = src.sphere(n);
  const auto inst = make_rank_one(10.0, ustar);

  DenseMatrix h(n, n);
  for (double& v : h.data) v = src.gaussian();
  DenseMatrix w = symmetrize(h);
  const double wn = operator_norm(w, 1e-11, 4000);
  for (double& v : w.data) v *= 3.0 / wn;  // ||W|| = 3 = 0.3 |lambda*|

  DenseMatrix m = inst.m_star;
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] += w.data[i];
  const auto pair = leading_eigenpair(m, 1e-13, 5000, src);

  const double rho = 3.0 / std::abs(pair.value);
  double prev = -1.0;
  for (std::size_t K : {5, 10, 20, 40}) {
    const DenseVector rec = neumann_reconstruct(w, inst.spec, pair.value, pair.vector, K, 3.0);
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = rec[i] - pair.vector[i];
      dist += d * d;
    }
    dist = std::sqrt(dist);
    CHECK(dist <= 2.0 * std::pow(rho, double(K + 1)) / (1.0 - rho) + 1e-13);
    if (prev >= 0.0) CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("band decomposition basics") {
  const auto single = band_decompose(DenseVector::basis(5, 0));
  REQUIRE(single.bands.size() == 1);
  CHECK(single.band_index[0] == 1);  // |1| lies in (e^-1, 1]
  CHECK(single.bands[0][0] == 1.0);

  // Flat vector: every entry is 1/sqrt(n), which sits in (e^-m, e^-(m-1)]
  // for integer n, so the decomposition is the single band m.
  const std::size_t n = 16;
  DenseVector flat(n, 1.0 / 4.0);
  const auto f = band_decompose(flat);
  REQUIRE(f.bands.size() == 1);
  CHECK(f.band_index[0] == f.m);
  double peak = 0.0, nnz = 0.0;
  for (double v : f.bands[0].data) {
    peak = std::max(peak, std::abs(v));
    nnz += v != 0.0;
  }
  CHECK(peak * std::sqrt(nnz) <= std::exp(1.0));

  CHECK_THROWS_AS(band_decompose(DenseVector(4, 1.0)), std::invalid_argument);
}

TEST_CASE("band decomposition matches a scalar classifier") {
  // n = 16 reference vector; m = ceil(ln 16 / 2) = 2.
  DenseVector x(16, 0.05);
  x[0] = 0.9;
  x[1] = 0.3;
  x[2] = 0.3;
  const double nrm = norm2(x);
  for (double& v : x.data) v /= nrm;

  const auto dec = band_decompose(x);
  CHECK(dec.m == 2);

  // Independent per-entry classification.
  auto classify = [&](double a) -> std::size_t {
    if (a <= std::exp(-2.0)) return 3;
    if (a <= std::exp(-1.0)) return 2;
    return 1;
  };
  for (std::size_t b = 0; b < dec.bands.size(); ++b) {
    for (std::size_t i = 0; i < 16; ++i) {
      const double v = dec.bands[b][i];
      if (v != 0.0) CHECK(classify(std::abs(v)) == dec.band_index[b]);
    }
  }

  // Reconstruction is exact and supports are disjoint.
  DenseVector sum(16, 0.0);
  for (const auto& band : dec.bands)
    for (std::size_t i = 0; i < 16; ++i) {
      if (band[i] != 0.0) CHECK(sum[i] == 0.0);
      sum[i] += band[i];
    }
  for (std::size_t i = 0; i < 16; ++i) CHECK(sum[i] == x[i]);

  // Per-band product bound.
  for (const auto& band : dec.bands) {
    double peak = 0.0;
    double nnz = 0.0;
    for (double v : band.data) {
      peak = std::max(peak, std::abs(v));
      nnz += v != 0.0;
    }
    CHECK(peak * std::sqrt(nnz) <= std::exp(1.0));
  }
}

TEST_CASE("band decomposition property sweep") {
  RandomSource src(1001, 0);
  for (std::size_t n : {10, 100, 1000}) {
    for (int rep = 0; rep < 50; ++rep) {
      const DenseVector x = src.sphere(n);
      const auto dec = band_decompose(x);
      CHECK(dec.bands.size() <= dec.m + 1);
      DenseVector sum(n, 0.0);
      for (const auto& band : dec.bands)
        for (std::size_t i = 0; i < n; ++i) sum[i] += band[i];
      for (std::size_t i = 0; i < n; ++i) CHECK(sum[i] == x[i]);
      for (const auto& band : dec.bands) {
        double peak = 0.0, nnz = 0.0;
        for (double v : band.data) {
          peak = std::max(peak, std::abs(v));
          nnz += v != 0.0;
        }
        CHECK(peak * std::sqrt(nnz) <= std::exp(1.0));
      }
    }
  }
}
