#include "cohspec/neumann.hpp"

#include <cmath>

namespace cohspec {

PowerSequence bilinear_powers(const DenseMatrix& h, const DenseVector& x, const DenseVector& y,
                              std::size_t k_max) {
  if (!h.square() || h.rows != x.size() || h.rows != y.size())
    throw std::invalid_argument("bilinear_powers: dimension mismatch");
  const std::size_t n = h.rows;
  PowerSequence seq;
  seq.k_max = k_max;
  seq.values.reserve(k_max + 1);

  std::vector<double> w(y.data), next(n);
  seq.values.push_back(dot(x, y));
  for (std::size_t k = 1; k <= k_max; ++k) {
    matvec_into(h, w.data(), next.data());
    w.swap(next);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * w[i];
    seq.values.push_back(acc);
  }
  return seq;
}

DenseVector neumann_reconstruct(const DenseMatrix& h, const SignalSpec& signal, double lambda_l,
                                const DenseVector& u_l, std::size_t truncation_order,
                                double h_op_norm) {
  if (!h.square() || h.rows != signal.n || u_l.size() != signal.n)
    throw std::invalid_argument("neumann_reconstruct: dimension mismatch");
  if (!(h_op_norm < std::abs(lambda_l)))
    throw std::invalid_argument(
        "neumann_reconstruct: requires ||H|| < |lambda_l| (series may diverge)");

  const std::size_t n = signal.n;
  DenseVector result(n, 0.0);
  std::vector<double> w(n), next(n);
  for (std::size_t j = 0; j < signal.r; ++j) {
    const DenseVector uj = signal.column(j);
    const double coeff = (signal.lambda_star[j] / lambda_l) * dot(uj, u_l);
    // sum_{k=0..K} lambda^-k H^k u*_j accumulated by iterated matvec.
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = uj[i];
      result[i] += coeff * w[i];
    }
    for (std::size_t k = 1; k <= truncation_order; ++k) {
      matvec_into(h, w.data(), next.data());
      const double scale = 1.0 / lambda_l;
      for (std::size_t i = 0; i < n; ++i) w[i] = next[i] * scale;
      for (std::size_t i = 0; i < n; ++i) result[i] += coeff * w[i];
    }
  }
  return result;
}

DenseVector neumann_reconstruct(const DenseMatrix& h, const SignalSpec& signal, double lambda_l,
                                const DenseVector& u_l, std::size_t truncation_order) {
  return neumann_reconstruct(h, signal, lambda_l, u_l, truncation_order,
                             operator_norm(h, 1e-10, 2000));
}

BandDecomposition band_decompose(const DenseVector& x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("band_decompose: empty vector");
  if (std::abs(norm2(x) - 1.0) > 1e-10)
    throw std::invalid_argument("band_decompose: input must be a unit vector");

  const std::size_t m = std::size_t(std::ceil(0.5 * std::log(double(n))));
  const std::size_t band_count = m + 1;

  // Band r (1-based, r <= m) holds |x_i| in (e^-r, e^-(r-1)]; the last band
  // is widened to [0, e^-m]. Boundary values fall to the lower-index band.
  std::vector<std::vector<std::pair<std::size_t, double>>> buckets(band_count);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a == 0.0) continue;  // zero entries are outside the support
    std::size_t r;
    if (a <= std::exp(-double(m))) {
      r = band_count;  // final band
    } else {
      // smallest integer r >= 1 with a > e^-r; log is exact enough away from
      // the boundary, then nudge onto the half-open convention.
      r = std::size_t(std::max(1.0, std::ceil(-std::log(a))));
      if (a > std::exp(-double(r - 1))) r -= 1;       // overshoot
      while (a <= std::exp(-double(r))) ++r;          // undershoot
      if (r > m) r = band_count;
    }
    buckets[r - 1].emplace_back(i, x[i]);
  }

  BandDecomposition out;
  out.m = m;
  for (std::size_t r = 1; r <= band_count; ++r) {
    if (buckets[r - 1].empty()) continue;
    DenseVector band(n, 0.0);
    for (auto [i, v] : buckets[r - 1]) band[i] = v;
    out.bands.push_back(std::move(band));
    out.band_index.push_back(r);
  }
  return out;
}

}  // namespace cohspec
