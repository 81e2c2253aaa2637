#include "cohspec/signal.hpp"

#include <algorithm>
#include <cmath>

namespace cohspec {

namespace {

// Sample m distinct indices from [0, n) uniformly (Floyd's algorithm keeps
// the draw count at m), returned sorted for deterministic iteration order.
std::vector<std::size_t> sample_support(std::size_t n, std::size_t m, RandomSource& src) {
  std::vector<std::size_t> chosen;
  chosen.reserve(m);
  for (std::size_t j = n - m; j < n; ++j) {
    const std::size_t t = std::size_t(src.uniform01() * double(j + 1));
    const std::size_t idx = std::min(t, j);
    if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end())
      chosen.push_back(idx);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::size_t support_size(std::size_t n, double mu_target) {
  if (!(mu_target >= 1.0) || mu_target > double(n))
    throw std::invalid_argument("scheme: mu_target must lie in [1, n]");
  return std::max<std::size_t>(1, std::size_t(double(n) / mu_target));
}

void check_orthonormal(const DenseMatrix& u) {
  const std::size_t r = u.cols;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < u.rows; ++i) acc += u.at(i, a) * u.at(i, b);
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(acc - want) > 1e-10)
        throw std::invalid_argument("coherence: columns not orthonormal");
    }
}

}  // namespace

double SignalSpec::lambda_max_abs() const {
  double m = 0.0;
  for (double l : lambda_star) m = std::max(m, std::abs(l));
  return m;
}

double SignalSpec::lambda_min_abs() const {
  double m = std::numeric_limits<double>::infinity();
  for (double l : lambda_star) m = std::min(m, std::abs(l));
  return m;
}

double SignalSpec::condition_number() const { return lambda_max_abs() / lambda_min_abs(); }

DenseVector SignalSpec::column(std::size_t j) const {
  DenseVector c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = u_star.at(i, j);
  return c;
}

CoherenceReport coherence(const DenseMatrix& u_star, const std::vector<double>* lambda_star) {
  if (u_star.rows == 0 || u_star.cols == 0)
    throw std::invalid_argument("coherence: empty input");
  check_orthonormal(u_star);
  const double n = double(u_star.rows);
  const double r = double(u_star.cols);
  CoherenceReport rep;
  const double inf = entrywise_inf_norm(u_star);
  const double row2 = row_two_inf_norm(u_star);
  rep.mu = n * inf * inf;
  rep.mu0 = (n / r) * row2 * row2;
  if (lambda_star && !lambda_star->empty()) {
    double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
    for (double l : *lambda_star) {
      lmax = std::max(lmax, std::abs(l));
      lmin = std::min(lmin, std::abs(l));
    }
    rep.kappa = lmax / lmin;
  }
  return rep;
}

CoherenceReport coherence(const DenseVector& u) {
  DenseMatrix col(u.size(), 1);
  for (std::size_t i = 0; i < u.size(); ++i) col.at(i, 0) = u[i];
  return coherence(col, nullptr);
}

DenseVector scheme_one(std::size_t n, double mu_target, RandomSource& src) {
  const std::size_t m = support_size(n, mu_target);
  const auto support = sample_support(n, m, src);
  const DenseVector block = src.sphere(m);
  DenseVector u(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) u[support[k]] = block[k];
  return u;
}

DenseVector scheme_two(std::size_t n, double mu_target, RandomSource& src,
                       double sparse_weight, double dense_weight) {
  const std::size_t m = support_size(n, mu_target);
  const auto support = sample_support(n, m, src);
  DenseVector v1(n, 0.0);
  const double mag = 1.0 / std::sqrt(double(m));
  for (std::size_t k = 0; k < m; ++k)
    v1[support[k]] = src.bernoulli(0.5) ? mag : -mag;
  DenseVector u(n, 0.0);
  if (dense_weight != 0.0) {
    const DenseVector v2 = src.sphere(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = sparse_weight * v1[i] + dense_weight * v2[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) u[i] = sparse_weight * v1[i];
  }
  return normalize(u);
}

SignalInstance make_signal(const std::vector<double>& lambda_star, const DenseMatrix& u_star) {
  if (lambda_star.size() != u_star.cols)
    throw std::invalid_argument("make_signal: rank mismatch between eigenvalues and U*");
  for (double l : lambda_star)
    if (l == 0.0) throw std::invalid_argument("make_signal: zero eigenvalue");
  for (std::size_t j = 1; j < lambda_star.size(); ++j)
    if (std::abs(lambda_star[j]) > std::abs(lambda_star[j - 1]))
      throw std::invalid_argument("make_signal: eigenvalues not sorted by descending modulus");
  check_orthonormal(u_star);

  const std::size_t n = u_star.rows, r = u_star.cols;
  DenseMatrix m(n, n, 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    const double lam = lambda_star[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = u_star.at(i, j);
      if (ui == 0.0) continue;
      double* row = m.row(i);
      for (std::size_t k = 0; k < n; ++k) row[k] += lam * ui * u_star.at(k, j);
    }
  }
  // Exact symmetry by construction can still drift in the last bit; mirror
  // the upper triangle so downstream symmetry checks are strict.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.at(j, i) = m.at(i, j);

  SignalSpec spec{n, r, lambda_star, u_star};
  return {std::move(spec), std::move(m)};
}

SignalInstance make_rank_one(double lambda_star, const DenseVector& u_star) {
  DenseMatrix u(u_star.size(), 1);
  for (std::size_t i = 0; i < u_star.size(); ++i) u.at(i, 0) = u_star[i];
  return make_signal({lambda_star}, u);
}

double eigen_gap(const std::vector<double>& lambda_star, std::size_t l) {
  const std::size_t r = lambda_star.size();
  if (l < 1 || l > r) throw std::invalid_argument("eigen_gap: index out of range");
  if (r == 1) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= r; ++k)
    if (k != l) gap = std::min(gap, std::abs(lambda_star[l - 1] - lambda_star[k - 1]));
  return gap;
}

}  // namespace cohspec
