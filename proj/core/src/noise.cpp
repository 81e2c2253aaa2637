#include "cohspec/noise.hpp"

#include <cmath>

namespace cohspec {

namespace {

double regime_ratio(double b, double sigma, std::size_t n) {
  const double ln = std::log(double(n));
  const double denom = sigma * std::sqrt(double(n) / (ln * ln * ln));
  return denom > 0.0 ? b / denom : std::numeric_limits<double>::infinity();
}

}  // namespace

DiscreteDist DiscreteDist::make(std::vector<std::pair<double, double>> support,
                                bool require_symmetric) {
  if (support.empty()) throw std::invalid_argument("DiscreteDist: empty support");
  double ptot = 0.0, mean = 0.0, s2 = 0.0, b = 0.0;
  for (auto [v, p] : support) {
    if (p < 0.0) throw std::invalid_argument("DiscreteDist: negative probability");
    ptot += p;
    mean += p * v;
    s2 += p * v * v;
    b = std::max(b, std::abs(v));
  }
  if (std::abs(ptot - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteDist: probabilities do not sum to 1");
  if (std::abs(mean) > 1e-12) throw std::invalid_argument("DiscreteDist: mean not zero");
  DiscreteDist d;
  d.support = std::move(support);
  d.sigma2 = s2;
  d.bound = b;
  if (require_symmetric && !d.is_symmetric())
    throw std::invalid_argument("DiscreteDist: support not symmetric about 0");
  return d;
}

DiscreteDist DiscreteDist::rademacher() { return make({{-1.0, 0.5}, {1.0, 0.5}}); }

bool DiscreteDist::is_symmetric(double tol) const {
  for (auto [v, p] : support) {
    double pneg = 0.0;
    for (auto [w, q] : support)
      if (std::abs(w + v) <= tol) pneg += q;
    if (std::abs(pneg - p) > tol) return false;
  }
  return true;
}

NoiseSpec NoiseSpec::gaussian(double lo, double hi, bool symmetric) {
  NoiseSpec s;
  s.model = NoiseModel::gaussian_hetero;
  s.sigma_lo = lo;
  s.sigma_hi = hi;
  s.symmetric = symmetric;
  return s;
}

NoiseSpec NoiseSpec::completion(DenseMatrix m_star, double obs_prob) {
  NoiseSpec s;
  s.model = NoiseModel::completion_mask;
  s.m_star = std::move(m_star);
  s.obs_prob = obs_prob;
  return s;
}

NoiseSpec NoiseSpec::network(DenseMatrix prob_matrix) {
  NoiseSpec s;
  s.model = NoiseModel::bernoulli_network;
  s.prob_matrix = std::move(prob_matrix);
  return s;
}

NoiseSpec NoiseSpec::discrete(DiscreteDist dist, bool symmetric) {
  if (symmetric && !dist.is_symmetric())
    throw std::invalid_argument("NoiseSpec: symmetric flag demands a symmetric support");
  NoiseSpec s;
  s.model = NoiseModel::discrete_iid;
  s.dist = std::move(dist);
  s.symmetric = symmetric;
  return s;
}

GaussianSample sample_gaussian_hetero(std::size_t n, RandomSource& src, double lo, double hi,
                                      double b_log_coefficient) {
  if (n == 0) throw std::invalid_argument("sample_gaussian_hetero: n must be positive");
  if (!(lo <= hi) || lo < 0.0)
    throw std::invalid_argument("sample_gaussian_hetero: need 0 <= lo <= hi");
  DenseMatrix h(n, n);
  if (lo == hi) {
    for (double& v : h.data) v = lo * src.gaussian();
  } else {
    for (double& v : h.data) v = src.uniform(lo, hi) * src.gaussian();
  }
  NoiseParams params;
  params.sigma = hi;
  params.B = b_log_coefficient * std::sqrt(std::log(double(std::max<std::size_t>(n, 2))));
  params.regime_ratio = regime_ratio(params.B, params.sigma, n);
  return {std::move(h), params};
}

CompletionSample sample_completion(const DenseMatrix& m_star, double obs_prob,
                                   RandomSource& src) {
  if (!(obs_prob > 0.0 && obs_prob <= 1.0))
    throw std::invalid_argument("sample_completion: obs_prob outside (0, 1]");
  DenseMatrix m(m_star.rows, m_star.cols);
  DenseMatrix h(m_star.rows, m_star.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    const double observed = src.uniform01() < obs_prob ? m_star.data[i] / obs_prob : 0.0;
    m.data[i] = observed;
    h.data[i] = observed - m_star.data[i];
  }
  const double peak = entrywise_inf_norm(m_star);
  NoiseParams params;
  params.B = peak / obs_prob;
  params.sigma = peak / std::sqrt(obs_prob);
  params.regime_ratio = regime_ratio(params.B, params.sigma, m_star.rows);
  return {std::move(m), std::move(h), params};
}

NetworkSample sample_network(const DenseMatrix& p, RandomSource& src) {
  double rho = 0.0;
  for (double v : p.data) {
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("sample_network: probability entry outside [0, 1]");
    rho = std::max(rho, v);
  }
  DenseMatrix a(p.rows, p.cols);
  DenseMatrix h(p.rows, p.cols);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    const double draw = (p.data[i] > 0.0 && src.uniform01() < p.data[i]) ? 1.0 : 0.0;
    a.data[i] = draw;
    h.data[i] = draw - p.data[i];
  }
  NoiseParams params;
  params.B = 1.0;
  params.sigma = std::sqrt(rho);
  params.regime_ratio = regime_ratio(params.B, params.sigma, p.rows);
  return {std::move(a), std::move(h), params};
}

DiscreteSample sample_discrete(std::size_t n, const DiscreteDist& dist, RandomSource& src,
                               bool symmetric) {
  if (n == 0) throw std::invalid_argument("sample_discrete: n must be positive");
  if (symmetric && !dist.is_symmetric())
    throw std::invalid_argument("sample_discrete: symmetric flag demands a symmetric support");

  auto draw = [&]() {
    const double u = src.uniform01();
    double acc = 0.0;
    for (auto [v, p] : dist.support) {
      acc += p;
      if (u < acc) return v;
    }
    return dist.support.back().first;
  };

  DenseMatrix h(n, n);
  for (double& v : h.data) v = draw();
  NoiseParams params;
  params.sigma = std::sqrt(dist.sigma2);
  params.B = dist.bound;
  params.regime_ratio = regime_ratio(params.B, params.sigma, n);
  return {std::move(h), params};
}

DenseMatrix sample_noise(const NoiseSpec& spec, std::size_t n, RandomSource& src) {
  DenseMatrix h;
  switch (spec.model) {
    case NoiseModel::gaussian_hetero:
      h = sample_gaussian_hetero(n, src, spec.sigma_lo, spec.sigma_hi).h;
      break;
    case NoiseModel::completion_mask:
      h = sample_completion(spec.m_star, spec.obs_prob, src).h;
      break;
    case NoiseModel::bernoulli_network:
      h = sample_network(spec.prob_matrix, src).h;
      break;
    case NoiseModel::discrete_iid:
      h = sample_discrete(n, spec.dist, src, spec.symmetric).h;
      break;
  }
  if (spec.symmetric) h = symmetrize(h);
  return h;
}

DenseMatrix symmetrize(const DenseMatrix& h) {
  if (!h.square()) throw std::invalid_argument("symmetrize: matrix not square");
  DenseMatrix w(h.rows, h.cols);
  for (std::size_t i = 0; i < h.rows; ++i)
    for (std::size_t j = 0; j < h.cols; ++j) w.at(i, j) = j >= i ? h.at(i, j) : h.at(j, i);
  return w;
}

double regime_check(const NoiseParams& params, std::size_t n) {
  if (n < 3) throw std::invalid_argument("regime_check: n must be at least 3");
  return regime_ratio(params.B, params.sigma, n);
}

}  // namespace cohspec
