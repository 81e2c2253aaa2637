#include "cohspec/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "cohspec/bounds.hpp"
#include "cohspec/neumann.hpp"

namespace cohspec {
namespace oracle {

namespace {

// Walks every assignment of `cells` digits over the support, partitioned by
// the leading digit; partial sums are accumulated in fixed partition order so
// the result does not depend on evaluation interleaving. Probabilities are
// accumulated in the log domain for supports larger than 2.
template <typename ValueFn>
double enumerate_expectation(const DiscreteDist& dist, std::size_t cells, double budget,
                             ValueFn&& value_of) {
  const std::size_t s = dist.support.size();
  enumeration_states(s, cells, budget);
  const bool log_domain = s > 2;
  std::vector<double> logp(s);
  for (std::size_t i = 0; i < s; ++i)
    logp[i] = dist.support[i].second > 0 ? std::log(dist.support[i].second)
                                         : -std::numeric_limits<double>::infinity();

  std::vector<int> digits(cells, 0);
  std::vector<double> values(cells, dist.support[0].first);
  double total = 0.0;
  for (std::size_t lead = 0; lead < s; ++lead) {
    digits.assign(cells, 0);
    digits[0] = int(lead);
    values.assign(cells, dist.support[0].first);
    values[0] = dist.support[lead].first;
    double partial = 0.0;
    for (;;) {
      double prob;
      if (log_domain) {
        double lp = 0.0;
        for (std::size_t c = 0; c < cells; ++c) lp += logp[digits[c]];
        prob = std::exp(lp);
      } else {
        prob = 1.0;
        for (std::size_t c = 0; c < cells; ++c) prob *= dist.support[digits[c]].second;
      }
      if (prob > 0.0) partial += prob * value_of(values);
      // Mixed-radix increment over cells 1..end (cell 0 is the partition).
      std::size_t c = 1;
      for (; c < cells; ++c) {
        if (std::size_t(++digits[c]) < s) {
          values[c] = dist.support[digits[c]].first;
          break;
        }
        digits[c] = 0;
        values[c] = dist.support[0].first;
      }
      if (c == cells) break;
    }
    total += partial;
  }
  return total;
}

double bilinear_small(const std::vector<double>& h, const DenseVector& x, const DenseVector& y,
                      int k, std::size_t n, std::vector<double>& w, std::vector<double>& next) {
  w.assign(y.data.begin(), y.data.end());
  for (int step = 0; step < k; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += h[i * n + j] * w[j];
      next[i] = acc;
    }
    w.swap(next);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * w[i];
  return acc;
}

void fill_symmetric(const std::vector<double>& cells, std::vector<double>& w, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      w[i * n + j] = cells[c];
      w[j * n + i] = cells[c];
      ++c;
    }
}

void matpow_small(const std::vector<double>& w, int k, std::size_t n, std::vector<double>& out,
                  std::vector<double>& tmp) {
  out.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = 1.0;
  for (int step = 0; step < k; ++step) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc += out[i * n + l] * w[l * n + j];
        tmp[i * n + j] = acc;
      }
    out.swap(tmp);
  }
}

}  // namespace

double enumeration_states(std::size_t support_size, std::size_t cells, double budget) {
  const double states = std::pow(double(support_size), double(cells));
  if (!(states <= budget))
    throw BudgetError("oracle: enumeration exceeds state budget", states);
  return states;
}

double exact_bilinear_mean(const DenseVector& x, const DenseVector& y, int k,
                           const DiscreteDist& dist, std::size_t n, double budget) {
  if (x.size() != n || y.size() != n)
    throw std::invalid_argument("exact_bilinear_mean: dimension mismatch");
  if (k < 0) throw std::invalid_argument("exact_bilinear_mean: negative power");
  std::vector<double> h(n * n), w(n), next(n);
  return enumerate_expectation(dist, n * n, budget, [&](const std::vector<double>& cells) {
    h = cells;
    return bilinear_small(h, x, y, k, n, w, next);
  });
}

double exact_centered_moment(const DenseVector& x, const DenseVector& y, int k, int p,
                             const DiscreteDist& dist, std::size_t n, double budget) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("exact_centered_moment: p must be even >= 2");
  const double mean = exact_bilinear_mean(x, y, k, dist, n, budget);
  std::vector<double> h(n * n), w(n), next(n);
  return enumerate_expectation(dist, n * n, budget, [&](const std::vector<double>& cells) {
    h = cells;
    const double v = bilinear_small(h, x, y, k, n, w, next) - mean;
    return std::pow(v, p);
  });
}

double exact_symmetric_moment(const DenseVector& x, const DenseVector& y, int k,
                              const DiscreteDist& dist, std::size_t n, bool offdiag_only,
                              double budget) {
  if (x.size() != n || y.size() != n)
    throw std::invalid_argument("exact_symmetric_moment: dimension mismatch");
  const std::size_t cells = n * (n + 1) / 2;
  std::vector<double> w(n * n), wk(n * n), tmp(n * n), v(n), next(n);
  return enumerate_expectation(dist, cells, budget, [&](const std::vector<double>& c) {
    fill_symmetric(c, w, n);
    if (!offdiag_only) return bilinear_small(w, x, y, k, n, v, next);
    matpow_small(w, k, n, wk, tmp);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) acc += x[i] * wk[i * n + j] * y[j];
    return acc;
  });
}

double exact_trace_moment(int k, const DiscreteDist& dist, std::size_t n, double budget) {
  const std::size_t cells = n * (n + 1) / 2;
  std::vector<double> w(n * n), wk(n * n), tmp(n * n);
  return enumerate_expectation(dist, cells, budget, [&](const std::vector<double>& c) {
    fill_symmetric(c, w, n);
    matpow_small(w, k, n, wk, tmp);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += wk[i * n + i];
    return acc;
  });
}

MomentReport moment_report(const DenseVector& x, const DenseVector& y, int k, int p,
                           const DiscreteDist& dist, std::size_t n, double budget) {
  MomentReport rep;
  rep.exact_mean = exact_bilinear_mean(x, y, k, dist, n, budget);
  rep.exact_centered_p = exact_centered_moment(x, y, k, p, dist, n, budget);
  double nx = 0, ny = 0, xi = 0, yi = 0;
  for (double v : x.data) {
    nx += v != 0.0;
    xi = std::max(xi, std::abs(v));
  }
  for (double v : y.data) {
    ny += v != 0.0;
    yi = std::max(yi, std::abs(v));
  }
  rep.bound_value =
      bounds::even_moment_bound(double(n), k, p, std::sqrt(dist.sigma2), dist.bound, nx, ny, xi, yi)
          .total;
  rep.ratio = rep.bound_value > 0.0 ? rep.exact_centered_p / rep.bound_value : 0.0;
  return rep;
}

std::vector<double> mc_deviation_quantiles(const NoiseSpec& model, const DenseVector& x,
                                           const DenseVector& y, int k, std::size_t trials,
                                           const std::vector<double>& quantiles,
                                           RandomSource& src) {
  if (trials < 100) throw std::invalid_argument("mc_deviation_quantiles: trials must be >= 100");
  std::vector<double> vals;
  vals.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const DenseMatrix h = sample_noise(model, x.size(), src);
    vals.push_back(bilinear_powers(h, x, y, k).values[std::size_t(k)]);
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= double(trials);
  std::vector<double> devs(trials);
  for (std::size_t t = 0; t < trials; ++t) devs[t] = std::abs(vals[t] - mean);
  std::sort(devs.begin(), devs.end());

  std::vector<double> out;
  out.reserve(quantiles.size());
  for (double q : quantiles) {
    if (q < 0.0 || q > 1.0)
      throw std::invalid_argument("mc_deviation_quantiles: quantile outside [0, 1]");
    const double pos = q * double(trials - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, trials - 1);
    const double frac = pos - double(lo);
    out.push_back((1.0 - frac) * devs[lo] + frac * devs[hi]);
  }
  return out;
}

}  // namespace oracle
}  // namespace cohspec
