#include "cohspec/linalg.hpp"

#include <cmath>
#include <limits>

namespace cohspec {

DenseVector DenseVector::basis(std::size_t n, std::size_t i) {
  if (i >= n) throw std::invalid_argument("basis: index out of range");
  DenseVector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

DenseMatrix::DenseMatrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != rows * cols)
    throw std::invalid_argument("DenseMatrix: data size does not match dimensions");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> init) {
  rows = init.size();
  cols = rows ? init.begin()->size() : 0;
  data.reserve(rows * cols);
  for (const auto& r : init) {
    if (r.size() != cols) throw std::invalid_argument("DenseMatrix: ragged initializer");
    data.insert(data.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

void matvec_into(const DenseMatrix& a, const double* x, double* y) {
  const std::size_t n = a.rows, m = a.cols;
  const double* p = a.data.data();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = p + i * m;
    for (std::size_t j = 0; j < m; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_transpose_into(const DenseMatrix& a, const double* x, double* y) {
  const std::size_t n = a.rows, m = a.cols;
  for (std::size_t j = 0; j < m; ++j) y[j] = 0.0;
  const double* p = a.data.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double* row = p + i * m;
    for (std::size_t j = 0; j < m; ++j) y[j] += row[j] * xi;
  }
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  DenseVector y(a.rows);
  matvec_into(a, x.data.data(), y.data.data());
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix c(a.rows, b.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

double dot(const DenseVector& x, const DenseVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm2(const DenseVector& x) { return std::sqrt(dot(x, x)); }

DenseVector normalize(const DenseVector& x) {
  const double n = norm2(x);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  DenseVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / n;
  return y;
}

double operator_norm(const DenseMatrix& a, double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
  if (a.rows == 0 || a.cols == 0) throw std::invalid_argument("operator_norm: empty matrix");

  // Power iteration on A^T A; v never needs explicit A^T A.
  std::vector<double> v(a.cols), av(a.rows), w(a.cols);
  // Deterministic start with all modes populated.
  for (std::size_t j = 0; j < a.cols; ++j) v[j] = 1.0 + 0.5 * std::sin(double(j + 1));
  double nv = 0.0;
  for (double c : v) nv += c * c;
  nv = std::sqrt(nv);
  for (double& c : v) c /= nv;

  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    matvec_into(a, v.data(), av.data());
    double nav = 0.0;
    for (double c : av) nav += c * c;
    nav = std::sqrt(nav);
    if (nav == 0.0) return 0.0;  // v in the null space of a zero-ish map
    matvec_transpose_into(a, av.data(), w.data());
    double nw = 0.0;
    for (double c : w) nw += c * c;
    nw = std::sqrt(nw);
    if (nw == 0.0) return nav;
    const double next = nw / nav;  // Rayleigh estimate of sigma_max
    for (std::size_t j = 0; j < a.cols; ++j) v[j] = w[j] / nw;
    if (it > 0 && std::abs(next - sigma) <= tol * std::max(1.0, next)) return next;
    sigma = next;
  }
  throw ConvergenceError("operator_norm: power iteration did not converge", sigma,
                         std::numeric_limits<double>::quiet_NaN());
}

double entrywise_inf_norm(const DenseMatrix& a) {
  if (a.data.empty()) throw std::invalid_argument("entrywise_inf_norm: empty matrix");
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

double row_two_inf_norm(const DenseMatrix& a) {
  if (a.data.empty()) throw std::invalid_argument("row_two_inf_norm: empty matrix");
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    const double* r = a.row(i);
    for (std::size_t j = 0; j < a.cols; ++j) acc += r[j] * r[j];
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

double frobenius_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.data) acc += v * v;
  return std::sqrt(acc);
}

double max_asymmetry(const DenseMatrix& a) {
  if (!a.square()) throw std::invalid_argument("max_asymmetry: matrix not square");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j)
      m = std::max(m, std::abs(a.at(i, j) - a.at(j, i)));
  return m;
}

void check_finite(const DenseVector& x, const char* context) {
  for (double v : x.data)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(context) + ": non-finite entry");
}

void check_finite(const DenseMatrix& a, const char* context) {
  for (double v : a.data)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(context) + ": non-finite entry");
}

}  // namespace cohspec
