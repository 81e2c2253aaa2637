#include "cohspec/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cohspec {

namespace {

constexpr double kDeflationEps = 1e-14;

void fix_sign(DenseVector& u) {
  for (double v : u.data) {
    if (v != 0.0) {
      if (v < 0.0)
        for (double& w : u.data) w = -w;
      return;
    }
  }
}

double residual_of(const DenseMatrix& a, double lambda, const DenseVector& u) {
  DenseVector au = matvec(a, u);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = au[i] - lambda * u[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Double-precision LU with partial pivoting (used by inverse iteration).
// ---------------------------------------------------------------------------

bool lu_factor(std::vector<double>& m, std::vector<int>& piv, std::size_t n) {
  piv.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = int(p);
    if (best == 0.0) {
      // Exactly singular; nudge so the solve still produces a direction.
      m[p * n + k] = std::numeric_limits<double>::min() * 1e30;
    }
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(m[p * n + j], m[k * n + j]);
    const double pivot = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / pivot;
      m[i * n + k] = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return true;
}

void lu_solve(const std::vector<double>& m, const std::vector<int>& piv, std::size_t n,
              std::vector<double>& b) {
  for (std::size_t k = 0; k < n; ++k) {
    if (std::size_t(piv[k]) != k) std::swap(b[piv[k]], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) b[i] -= m[i * n + k] * b[k];
  }
  for (std::size_t k = n; k-- > 0;) {
    b[k] /= m[k * n + k];
    for (std::size_t i = 0; i < k; ++i) b[i] -= m[i * n + k] * b[k];
  }
}

std::optional<DenseVector> inverse_iteration(const DenseMatrix& a, double lambda, double tol) {
  const std::size_t n = a.rows;
  RandomSource src(0x1E16ULL, std::uint64_t(n) * 33 + 7);
  double jitter = 1e-11 * (1.0 + std::abs(lambda));
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<double> m(a.data);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] -= lambda + jitter;
    std::vector<int> piv;
    lu_factor(m, piv, n);
    DenseVector u = src.sphere(n);
    for (int it = 0; it < 4; ++it) {
      lu_solve(m, piv, n, u.data);
      double nu = norm2(u);
      if (nu == 0.0 || !std::isfinite(nu)) break;
      for (double& v : u.data) v /= nu;
    }
    if (std::isfinite(norm2(u)) && std::abs(norm2(u) - 1.0) < 1e-6) {
      fix_sign(u);
      if (residual_of(a, lambda, u) <= tol * std::max(1.0, std::abs(lambda))) return u;
    }
    jitter *= 32.0;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hessenberg reduction and Francis double-shift QR (eigenvalues only).
// ---------------------------------------------------------------------------

void hessenberg_reduce(std::vector<double>& h, std::size_t n) {
  std::vector<double> ort(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(h[i * n + (m - 1)]);
    if (scale == 0.0) continue;
    double hsum = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h[i * n + (m - 1)] / scale;
      hsum += ort[i] * ort[i];
    }
    double g = std::sqrt(hsum);
    if (ort[m] > 0) g = -g;
    hsum -= ort[m] * g;
    ort[m] -= g;
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = n; i-- > m;) f += ort[i] * h[i * n + j];
      f /= hsum;
      for (std::size_t i = m; i < n; ++i) h[i * n + j] -= f * ort[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = n; j-- > m;) f += ort[j] * h[i * n + j];
      f /= hsum;
      for (std::size_t j = m; j < n; ++j) h[i * n + j] -= f * ort[j];
    }
    h[m * n + (m - 1)] = scale * g;
    for (std::size_t i = m + 1; i < n; ++i) h[i * n + (m - 1)] = 0.0;
  }
}

// Returns eigenvalues of an upper Hessenberg matrix, Francis double shifts
// with the classic exceptional-shift escape. Deflation threshold follows
// |h(i,i-1)| <= kDeflationEps * (|h(i-1,i-1)| + |h(i,i)|).
std::vector<std::complex<double>> hessenberg_qr_eigenvalues(std::vector<double>& hm,
                                                            std::size_t nn, int max_sweeps) {
  auto h = [&](std::size_t i, std::size_t j) -> double& { return hm[i * nn + j]; };
  std::vector<std::complex<double>> out;
  out.reserve(nn);

  double norm = 0.0;
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = (i == 0 ? 0 : i - 1); j < nn; ++j) norm += std::abs(h(i, j));

  int n = int(nn) - 1;
  const int low = 0;
  double exshift = 0.0;
  int iter = 0;
  int total = 0;
  const int budget = max_sweeps > 0 ? max_sweeps : std::max<int>(40 * int(nn), 200);
  double p = 0, q = 0, r = 0, s = 0, z = 0, w = 0, x = 0, y = 0;

  while (n >= low) {
    if (++total > budget)
      throw ConvergenceError("full_spectrum: QR failed to deflate within budget",
                             h(n, n), std::abs(n > 0 ? h(n, n - 1) : 0.0));
    int l = n;
    while (l > low) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) < kDeflationEps * s) break;
      --l;
    }

    if (l == n) {
      out.emplace_back(h(n, n) + exshift, 0.0);
      --n;
      iter = 0;
      continue;
    }
    if (l == n - 1) {
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x = h(n, n) + exshift;
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        double d1 = x + z;
        double d2 = (z != 0.0) ? x - w / z : d1;
        out.emplace_back(d1, 0.0);
        out.emplace_back(d2, 0.0);
      } else {
        out.emplace_back(x + p, z);
        out.emplace_back(x + p, -z);
      }
      n -= 2;
      iter = 0;
      continue;
    }

    // Form shift.
    x = h(n, n);
    y = h(n - 1, n - 1);
    w = h(n, n - 1) * h(n - 1, n);
    if (iter == 10 || iter == 20) {
      exshift += x;
      for (int i = low; i <= n; ++i) h(i, i) -= x;
      s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
      x = y = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++iter;

    // Look for two consecutive small sub-diagonal elements.
    int m = n - 2;
    while (m >= l) {
      z = h(m, m);
      r = x - z;
      s = y - z;
      p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
      q = h(m + 1, m + 1) - z - r - s;
      r = h(m + 2, m + 1);
      s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
          kDeflationEps * std::abs(p) *
              (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1))))
        break;
      --m;
    }
    for (int i = m + 2; i <= n; ++i) {
      h(i, i - 2) = 0.0;
      if (i > m + 2) h(i, i - 3) = 0.0;
    }

    // Double QR step.
    for (int k = m; k <= n - 1; ++k) {
      const bool notlast = (k != n - 1);
      if (k != m) {
        p = h(k, k - 1);
        q = h(k + 1, k - 1);
        r = notlast ? h(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x == 0.0) continue;
        p /= x;
        q /= x;
        r /= x;
      }
      s = std::sqrt(p * p + q * q + r * r);
      if (p < 0) s = -s;
      if (s != 0) {
        if (k != m)
          h(k, k - 1) = -s * x;
        else if (l != m)
          h(k, k - 1) = -h(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;

        for (int j = k; j < int(nn); ++j) {
          double f = h(k, j) + q * h(k + 1, j);
          if (notlast) {
            f += r * h(k + 2, j);
            h(k + 2, j) -= f * z;
          }
          h(k, j) -= f * x;
          h(k + 1, j) -= f * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          double f = x * h(i, k) + y * h(i, k + 1);
          if (notlast) {
            f += z * h(i, k + 2);
            h(i, k + 2) -= f * r;
          }
          h(i, k) -= f;
          h(i, k + 1) -= f * q;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extended-precision eigenvalue polishing. Newton on u(z) = p(z)/p'(z) where
// p(z) = det(A - zI) is evaluated by complex LU in __float128. u has simple
// zeros even at multiple eigenvalues, so the iteration converges
// quadratically there; plain QR only locates an m-fold eigenvalue to
// O(eps^(1/m)).
// ---------------------------------------------------------------------------

using f128 = __float128;

struct QComplex {
  f128 re, im;
};

inline QComplex operator+(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }
inline QComplex operator-(QComplex a, QComplex b) { return {a.re - b.re, a.im - b.im}; }
inline QComplex operator*(QComplex a, QComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator*(f128 a, QComplex b) { return {a * b.re, a * b.im}; }
inline f128 qabs2(QComplex a) { return a.re * a.re + a.im * a.im; }

inline f128 qsqrt(f128 x) {
  if (x <= 0) return 0;
  f128 y = (f128)std::sqrt((double)x);
  y = 0.5q * (y + x / y);
  y = 0.5q * (y + x / y);
  return y;
}

inline f128 qabs(QComplex a) { return qsqrt(qabs2(a)); }

inline QComplex qdiv(QComplex a, QComplex b) {
  const f128 d = qabs2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

QComplex charpoly_det(const DenseMatrix& a, QComplex z) {
  const std::size_t n = a.rows;
  std::vector<QComplex> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i * n + j] = {(f128)a.at(i, j), 0};
      if (i == j) m[i * n + j] = m[i * n + j] - z;
    }
  QComplex det{1, 0};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    f128 best = qabs2(m[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const f128 v = qabs2(m[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0) return {0, 0};
    if (p != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m[p * n + j], m[k * n + j]);
      det = {-det.re, -det.im};
    }
    det = det * m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const QComplex f = qdiv(m[i * n + k], m[k * n + k]);
      if (qabs2(f) == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] = m[i * n + j] - f * m[k * n + j];
    }
  }
  return det;
}

std::complex<double> refine_eigenvalue(const DenseMatrix& a, std::complex<double> z0) {
  QComplex z{(f128)z0.real(), (f128)z0.imag()};
  const f128 p0 = qabs(charpoly_det(a, z));
  QComplex zbest = z;
  f128 pbest = p0;
  for (int it = 0; it < 24; ++it) {
    const f128 h = 0x1p-30q * (1 + qabs(z));
    const QComplex hp{h, 0};
    const QComplex pm = charpoly_det(a, z - hp);
    const QComplex pc = charpoly_det(a, z);
    const QComplex pp = charpoly_det(a, z + hp);
    const QComplex dp = qdiv(pp - pm, {2 * h, 0});
    if (qabs2(dp) == 0) break;
    const QComplex d2p = qdiv(pp - 2.0q * pc + pm, {h * h, 0});
    const QComplex u = qdiv(pc, dp);
    const QComplex corr = QComplex{1, 0} - qdiv(pc * d2p, dp * dp);
    const QComplex step = qabs2(corr) > 0 ? qdiv(u, corr) : u;
    if (qabs(step) > 0.5q * (1 + qabs(z))) break;
    z = z - step;
    const f128 pz = qabs(charpoly_det(a, z));
    if (pz < pbest) {
      pbest = pz;
      zbest = z;
    }
    if (qabs(step) <= 1e-18q * (1 + qabs(z))) break;
  }
  if (pbest <= p0) return {double(zbest.re), double(zbest.im)};
  return z0;
}

// ---------------------------------------------------------------------------
// Assembly helpers.
// ---------------------------------------------------------------------------

void sort_desc_modulus(std::vector<std::complex<double>>& ev) {
  std::sort(ev.begin(), ev.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

EigenEstimate assemble(const DenseMatrix& a, std::vector<std::complex<double>> ev, double tol,
                       double realness_tol, bool want_vectors) {
  sort_desc_modulus(ev);
  EigenEstimate est;
  est.eigenvalues = std::move(ev);
  const std::size_t n = est.eigenvalues.size();
  est.eigenvectors.resize(n);
  est.residuals.assign(n, std::numeric_limits<double>::quiet_NaN());
  est.is_real.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lam = est.eigenvalues[i];
    const bool real = std::abs(lam.imag()) <= realness_tol * (1.0 + std::abs(lam));
    est.is_real[i] = real;
    if (real && want_vectors) {
      auto u = inverse_iteration(a, lam.real(), std::max(tol, 1e-12));
      if (u) {
        est.residuals[i] = residual_of(a, lam.real(), *u);
        est.eigenvectors[i] = std::move(u);
      }
    }
  }
  return est;
}

}  // namespace

LeadingEigenpair leading_eigenpair(const DenseMatrix& a, double tol, int max_iter,
                                   RandomSource src) {
  if (!a.square()) throw std::invalid_argument("leading_eigenpair: matrix not square");
  return leading_eigenpair_op(
      a.rows, [&](const double* x, double* y) { matvec_into(a, x, y); }, tol, max_iter,
      std::move(src));
}

EigenEstimate full_spectrum(const DenseMatrix& a, double tol, const EigOptions& opts) {
  if (!a.square()) throw std::invalid_argument("full_spectrum: matrix not square");
  if (a.rows > opts.max_n) throw std::invalid_argument("full_spectrum: n exceeds configured limit");
  const std::size_t n = a.rows;
  if (n == 1) return assemble(a, {{a.at(0, 0), 0.0}}, tol, opts.realness_tol, true);

  std::vector<double> h(a.data);
  hessenberg_reduce(h, n);
  auto ev = hessenberg_qr_eigenvalues(h, n, opts.max_sweeps);
  if (n <= opts.refine_max_n)
    for (auto& lam : ev) lam = refine_eigenvalue(a, lam);
  return assemble(a, std::move(ev), tol, opts.realness_tol, true);
}

EigenEstimate symmetric_spectrum(const DenseMatrix& s, double tol) {
  if (!s.square()) throw std::invalid_argument("symmetric_spectrum: matrix not square");
  const std::size_t n = s.rows;
  const double scale = std::max(1.0, entrywise_inf_norm(s));
  if (max_asymmetry(s) > 1e-12 * scale)
    throw std::invalid_argument("symmetric_spectrum: asymmetry beyond tolerance");

  // Cyclic Jacobi on a working copy; V accumulates rotations (columns are
  // eigenvectors).
  std::vector<double> m(s.data);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += m[i * n + j] * m[i * n + j];
    return std::sqrt(2.0 * acc);
  };

  const double fro = std::max(frobenius_norm(s), std::numeric_limits<double>::min());
  const double stop = std::max(tol, 1e-15) * fro;
  for (int sweep = 0; sweep < 60 && off() > stop; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m[k * n + p], akq = m[k * n + q];
          m[k * n + p] = c * akp - sn * akq;
          m[k * n + q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m[p * n + k], aqk = m[q * n + k];
          m[p * n + k] = c * apk - sn * aqk;
          m[q * n + k] = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - sn * vkq;
          v[k * n + q] = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double mi = std::abs(m[i * n + i]), mj = std::abs(m[j * n + j]);
    if (mi != mj) return mi > mj;
    return m[i * n + i] > m[j * n + j];
  });

  EigenEstimate est;
  est.eigenvalues.reserve(n);
  est.eigenvectors.resize(n);
  est.residuals.assign(n, 0.0);
  est.is_real.assign(n, true);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t k = order[idx];
    const double lam = m[k * n + k];
    est.eigenvalues.emplace_back(lam, 0.0);
    DenseVector u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i * n + k];
    fix_sign(u);
    est.residuals[idx] = residual_of(s, lam, u);
    est.eigenvectors[idx] = std::move(u);
  }
  return est;
}

EigenEstimate top_r_real(const DenseMatrix& a, std::size_t r, double tol, const EigOptions& opts) {
  if (r > a.rows) throw std::invalid_argument("top_r_real: r exceeds dimension");
  EigenEstimate full = full_spectrum(a, tol, opts);
  EigenEstimate est;
  est.eigenvalues.assign(full.eigenvalues.begin(), full.eigenvalues.begin() + r);
  est.eigenvectors.assign(std::make_move_iterator(full.eigenvectors.begin()),
                          std::make_move_iterator(full.eigenvectors.begin() + r));
  est.residuals.assign(full.residuals.begin(), full.residuals.begin() + r);
  est.is_real.assign(full.is_real.begin(), full.is_real.begin() + r);
  return est;
}

}  // namespace cohspec
