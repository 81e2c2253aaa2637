#include "cohspec/signal.hpp"

#include <cmath>

#include "cohspec/eigen.hpp"
#include "doctest.h"

using namespace cohspec;

TEST_CASE("coherence of basis and flat vectors") {
  DenseMatrix e1(4, 1, 0.0);
  e1.at(0, 0) = 1.0;
  const auto rep = coherence(e1);
  CHECK(rep.mu == doctest::Approx(4.0));
  CHECK(rep.mu0 == doctest::Approx(4.0));

  DenseVector flat(16, 0.25);  // (1,...,1)/sqrt(16)
  CHECK(coherence(flat).mu == doctest::Approx(1.0));
}

TEST_CASE("coherence of a rank-2 block") {
  // U* = [e1, (0,1,1,1)/sqrt(3)], n = 4.
  DenseMatrix u(4, 2, 0.0);
  u.at(0, 0) = 1.0;
  const double s = 1.0 / std::sqrt(3.0);
  u.at(1, 1) = s;
  u.at(2, 1) = s;
  u.at(3, 1) = s;
  const auto rep = coherence(u);
  CHECK(rep.mu == doctest::Approx(4.0));
  CHECK(rep.mu0 == doctest::Approx(2.0));
  CHECK(rep.mu0 <= rep.mu);
  CHECK(rep.mu <= rep.mu0 * 2.0 + 1e-12);

  DenseMatrix bad(3, 2, 0.5);
  CHECK_THROWS_AS(coherence(bad), std::invalid_argument);
}

TEST_CASE("scheme one support and localization") {
  RandomSource src(314, 0);
  const DenseVector local = scheme_one(12, 12.0, src);
  std::size_t nnz = 0;
  for (double v : local.data) nnz += v != 0.0;
  CHECK(nnz == 1);
  CHECK(coherence(local).mu == doctest::Approx(12.0));

  const DenseVector dense = scheme_one(12, 1.0, src);
  nnz = 0;
  for (double v : dense.data) nnz += v != 0.0;
  CHECK(nnz == 12);

  const DenseVector u = scheme_one(100, 10.0, src);
  nnz = 0;
  double peak = 0.0;
  for (double v : u.data) {
    nnz += v != 0.0;
    peak = std::max(peak, std::abs(v));
  }
  CHECK(nnz == 10);
  CHECK(peak >= 1.0 / std::sqrt(10.0) - 1e-12);  // l2/linf pigeonhole on m nonzeros
  CHECK(norm2(u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scheme two mixing") {
  RandomSource src(2718, 5);
  const DenseVector u = scheme_two(64, 8.0, src);
  CHECK(norm2(u) == doctest::Approx(1.0).epsilon(1e-12));

  // Degenerate mix: all weight on the sparse component.
  const DenseVector v1 = scheme_two(64, 8.0, src, 1.0, 0.0);
  std::size_t nnz = 0;
  for (double v : v1.data) nnz += v != 0.0;
  CHECK(nnz == 8);
  for (double v : v1.data)
    if (v != 0.0) CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(8.0)));
}

TEST_CASE("scheme two realized coherence tracks the target") {
  RandomSource src(161803, 0);
  std::vector<double> mus;
  for (int rep = 0; rep < 100; ++rep) {
    const DenseVector u = scheme_two(400, 20.0, src);
    mus.push_back(coherence(u).mu);
  }
  std::sort(mus.begin(), mus.end());
  const double median = mus[mus.size() / 2];
  CHECK(median >= 0.2 * 20.0);
  CHECK(median <= 5.0 * 20.0);
}

TEST_CASE("make_signal materializes the decomposition") {
  const auto e1 = make_rank_one(1.0, DenseVector::basis(4, 0));
  CHECK(e1.m_star.at(0, 0) == doctest::Approx(1.0));
  CHECK(frobenius_norm(e1.m_star) == doctest::Approx(1.0));

  DenseMatrix u(4, 2, 0.0);
  u.at(0, 0) = 1.0 / std::sqrt(2.0);
  u.at(1, 0) = 1.0 / std::sqrt(2.0);
  u.at(0, 1) = 1.0 / std::sqrt(2.0);
  u.at(1, 1) = -1.0 / std::sqrt(2.0);
  const auto pm = make_signal({2.0, -2.0}, u);
  double trace = 0.0;
  for (std::size_t i = 0; i < 4; ++i) trace += pm.m_star.at(i, i);
  CHECK(trace == doctest::Approx(0.0));

  DenseMatrix basis(5, 2, 0.0);
  basis.at(0, 0) = 1.0;
  basis.at(1, 1) = 1.0;
  const auto diag = make_signal({3.0, 1.0}, basis);
  CHECK(diag.m_star.at(0, 0) == doctest::Approx(3.0));
  CHECK(diag.m_star.at(1, 1) == doctest::Approx(1.0));
  CHECK(diag.m_star.at(2, 2) == doctest::Approx(0.0));

  CHECK_THROWS_AS(make_signal({0.0}, DenseMatrix(3, 1, 0.0)), std::invalid_argument);
}

TEST_CASE("make_signal spectrum round-trip") {
  RandomSource src(55, 9);
  // Random orthonormal 3-block in dimension 30 via Gram-Schmidt.
  const std::size_t n = 30, r = 3;
  DenseMatrix u(n, r);
  for (double& v : u.data) v = src.gaussian();
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += u.at(i, c) * u.at(i, prev);
      for (std::size_t i = 0; i < n; ++i) u.at(i, c) -= proj * u.at(i, prev);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += u.at(i, c) * u.at(i, c);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) u.at(i, c) /= nrm;
  }
  const std::vector<double> lambda{4.0, -2.5, 1.5};
  const auto inst = make_signal(lambda, u);
  const auto est = symmetric_spectrum(inst.m_star, 1e-13);
  CHECK(est.eigenvalues[0].real() == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(est.eigenvalues[1].real() == doctest::Approx(-2.5).epsilon(1e-8));
  CHECK(est.eigenvalues[2].real() == doctest::Approx(1.5).epsilon(1e-8));
  for (std::size_t k = 3; k < est.size(); ++k)
    CHECK(std::abs(est.eigenvalues[k]) < 1e-8);
}

TEST_CASE("eigen gap") {
  CHECK(std::isinf(eigen_gap({5.0}, 1)));
  CHECK(eigen_gap({5.0, 3.0, 1.0}, 2) == doctest::Approx(2.0));
  CHECK(eigen_gap({4.0, 4.0, 1.0}, 1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(eigen_gap({1.0, 2.0}, 3), std::invalid_argument);
}
