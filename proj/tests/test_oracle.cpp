#include "cohspec/oracle.hpp"

#include <cmath>

#include "cohspec/bounds.hpp"
#include "doctest.h"

using namespace cohspec;
namespace oc = cohspec::oracle;

namespace {
const DiscreteDist kRad = DiscreteDist::rademacher();
const DiscreteDist kThree = DiscreteDist::make({{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}});
}  // namespace

TEST_CASE("bilinear means pinned for n=2 Rademacher") {
  const DenseVector e1 = DenseVector::basis(2, 0);
  CHECK(oc::exact_bilinear_mean(e1, e1, 1, kRad, 2) == doctest::Approx(0.0));
  CHECK(oc::exact_bilinear_mean(e1, e1, 2, kRad, 2) == doctest::Approx(1.0));
  CHECK(oc::exact_bilinear_mean(e1, e1, 3, kRad, 2) == doctest::Approx(0.0));
  CHECK(oc::exact_bilinear_mean(e1, e1, 4, kRad, 2) == doctest::Approx(2.0));

  // k = 1 vanishes for any zero-mean distribution and any vectors.
  const DenseVector x{0.3, -0.8};
  CHECK(oc::exact_bilinear_mean(x, e1, 1, kThree, 2) == doctest::Approx(0.0));
}

TEST_CASE("hand enumeration cross-check of the n=2 Rademacher oracle") {
  // Independent route: enumerate the 16 sign matrices directly.
  const DenseVector e1 = DenseVector::basis(2, 0);
  double mean = 0.0, second = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    const double h11 = (mask & 1) ? 1.0 : -1.0;
    const double h12 = (mask & 2) ? 1.0 : -1.0;
    const double h21 = (mask & 4) ? 1.0 : -1.0;
    const double h22 = (mask & 8) ? 1.0 : -1.0;
    (void)h22;
    const double z = h11 * h11 + h12 * h21;  // (H^2)_{11}
    mean += z / 16.0;
    second += z * z / 16.0;
  }
  CHECK(oc::exact_bilinear_mean(e1, e1, 2, kRad, 2) == doctest::Approx(mean));
  CHECK(oc::exact_centered_moment(e1, e1, 2, 2, kRad, 2) ==
        doctest::Approx(second - mean * mean));
}

TEST_CASE("centered moments") {
  const DenseVector e1 = DenseVector::basis(2, 0);
  CHECK(oc::exact_centered_moment(e1, e1, 2, 2, kRad, 2) == doctest::Approx(1.0));
  CHECK(oc::exact_centered_moment(e1, e1, 2, 4, kRad, 2) == doctest::Approx(1.0));
  CHECK(oc::exact_bilinear_mean(e1, e1, 2, kThree, 2) == doctest::Approx(2.0));
  CHECK(oc::exact_centered_moment(e1, e1, 2, 2, kThree, 2) == doctest::Approx(8.0));

  // Point mass at zero: no noise at all.
  const auto zero = DiscreteDist::make({{0.0, 1.0}});
  CHECK(oc::exact_centered_moment(e1, e1, 2, 2, zero, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(oc::exact_centered_moment(e1, e1, 2, 3, kRad, 2), std::invalid_argument);
}

TEST_CASE("symmetric enumeration identities at n=3") {
  const std::size_t n = 3;
  const DenseVector e1 = DenseVector::basis(n, 0);
  DenseVector flat(n, 1.0 / std::sqrt(3.0));
  const std::vector<std::pair<DenseVector, DenseVector>> pairs = {
      {e1, e1}, {e1, flat}, {flat, flat}};

  for (int k = 1; k <= 4; ++k) {
    const double trace = oc::exact_trace_moment(k, kRad, n);
    for (const auto& [x, y] : pairs) {
      const double sym = oc::exact_symmetric_moment(x, y, k, kRad, n);
      const double poff = oc::exact_symmetric_moment(x, y, k, kRad, n, true);
      CHECK(std::abs(poff) <= 1e-12);
      if (k % 2 == 1) CHECK(std::abs(sym) <= 1e-12);
      CHECK(sym == doctest::Approx(dot(x, y) / double(n) * trace).epsilon(1e-12));
    }
  }

  // Pinned traces (independent python enumeration): E tr W^2 = 9, E tr W^4 = 45.
  CHECK(oc::exact_trace_moment(1, kRad, n) == doctest::Approx(0.0));
  CHECK(oc::exact_trace_moment(2, kRad, n) == doctest::Approx(9.0));
  CHECK(oc::exact_trace_moment(4, kRad, n) == doctest::Approx(45.0));
  CHECK(oc::exact_trace_moment(2, kRad, 2) == doctest::Approx(4.0));
  CHECK(oc::exact_trace_moment(4, kRad, 2) == doctest::Approx(12.0));

  // Even-k Catalan cap: |E tr(W^k)| / n <= C_{k/2} (sigma^2 n)^{k/2}.
  CHECK(45.0 / 3.0 <= double(bounds::catalan(2)) * std::pow(1.0 * 3.0, 2));
}

TEST_CASE("theorem 2 dominance on a small grid") {
  for (std::size_t n : {std::size_t(2), std::size_t(3)}) {
    for (const auto& dist : {kRad, kThree}) {
      for (int k : {2, 3}) {
        for (int p : {2, 4}) {
          const DenseVector e1 = DenseVector::basis(n, 0);
          const DenseVector flat(n, 1.0 / std::sqrt(double(n)));
          for (const auto* x : {&e1, &flat}) {
            const double exact = oc::exact_centered_moment(*x, *x, k, p, dist, n);
            double nnz = 0, peak = 0;
            for (double v : x->data) {
              nnz += v != 0.0;
              peak = std::max(peak, std::abs(v));
            }
            const auto bound = bounds::even_moment_bound(double(n), k, p, std::sqrt(dist.sigma2),
                                                         dist.bound, nnz, nnz, peak, peak);
            REQUIRE(bound.total > 0.0);
            CHECK(exact / bound.total <= 1.0);
          }
        }
      }
    }
  }
}

TEST_CASE("moment report packages mean, moment, bound and ratio") {
  const DenseVector e1 = DenseVector::basis(2, 0);
  const auto rep = oc::moment_report(e1, e1, 2, 2, kRad, 2);
  CHECK(rep.exact_mean == doctest::Approx(1.0));
  CHECK(rep.exact_centered_p == doctest::Approx(1.0));
  CHECK(rep.bound_value == doctest::Approx(4096.0).epsilon(1e-10));  // Nx = Ny = 1 for e1
  CHECK(rep.ratio == doctest::Approx(1.0 / 4096.0).epsilon(1e-10));
}

TEST_CASE("budget enforcement") {
  const DenseVector e1 = DenseVector::basis(4, 0);
  CHECK_THROWS_AS(oc::exact_bilinear_mean(e1, e1, 2, kThree, 4), oc::BudgetError);  // 3^16
  // n=4 symmetric with support 3 is 3^10 states: inside the budget.
  CHECK(oc::exact_symmetric_moment(e1, e1, 1, kThree, 4) == doctest::Approx(0.0));
}

TEST_CASE("monte carlo deviation quantiles") {
  RandomSource src(2222, 0);
  DenseVector flat(64, 1.0 / 8.0);

  const auto zero_spec = NoiseSpec::discrete(DiscreteDist::make({{0.0, 1.0}}));
  const auto qz = oc::mc_deviation_quantiles(zero_spec, flat, flat, 2, 100, {0.5, 0.95}, src);
  CHECK(qz[0] == 0.0);
  CHECK(qz[1] == 0.0);

  const auto rad_spec = NoiseSpec::discrete(kRad);
  const auto q = oc::mc_deviation_quantiles(rad_spec, flat, flat, 2, 200, {0.5, 0.95}, src);
  CHECK(q[1] >= q[0]);

  CHECK_THROWS_AS(oc::mc_deviation_quantiles(rad_spec, flat, flat, 2, 10, {0.5}, src),
                  std::invalid_argument);
}

TEST_CASE("gaussian quadratic deviations sit at the sigma^2 sqrt(n) scale") {
  RandomSource src(3333, 0);
  const std::size_t n = 1024;
  DenseVector flat(n, 1.0 / std::sqrt(double(n)));
  const auto spec = NoiseSpec::gaussian(1.0, 1.0);  // sigma_ij = 1 exactly
  const auto q = oc::mc_deviation_quantiles(spec, flat, flat, 2, 120, {0.95}, src);
  const double scale = std::sqrt(double(n));  // sigma^2 sqrt(n), sigma = 1
  CHECK(q[0] >= scale / 10.0);
  CHECK(q[0] <= scale * 10.0);
}

TEST_CASE("enumeration vs monte carlo agreement") {
  RandomSource src(4444, 0);
  const DenseVector e1 = DenseVector::basis(2, 0);
  const double exact = oc::exact_bilinear_mean(e1, e1, 2, kRad, 2);
  const double variance = oc::exact_centered_moment(e1, e1, 2, 2, kRad, 2);
  const int trials = 100000;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = sample_discrete(2, kRad, src);
    acc += s.h.at(0, 0) * s.h.at(0, 0) + s.h.at(0, 1) * s.h.at(1, 0);
  }
  acc /= trials;
  CHECK(std::abs(acc - exact) <= 4.0 * std::sqrt(variance / trials));
}
