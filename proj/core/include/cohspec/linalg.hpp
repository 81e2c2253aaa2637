#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohspec {

// Thrown by iterative routines that fail to meet their tolerance within the
// iteration budget. Carries the last iterate so callers can inspect it.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double estimate, double residual)
      : std::runtime_error(what), last_estimate(estimate), last_residual(residual) {}
  double last_estimate = 0.0;
  double last_residual = 0.0;
};

struct DenseVector {
  std::vector<double> data;

  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0) : data(n, fill) {}
  DenseVector(std::initializer_list<double> init) : data(init) {}
  explicit DenseVector(std::vector<double> values) : data(std::move(values)) {}

  std::size_t size() const { return data.size(); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  static DenseVector basis(std::size_t n, std::size_t i);
};

// Row-major dense real matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}
  DenseMatrix(std::size_t r, std::size_t c, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> init);

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  bool square() const { return rows == cols; }

  static DenseMatrix identity(std::size_t n);
};

DenseVector matvec(const DenseMatrix& a, const DenseVector& x);
// y := A x, no allocation; x and y must not alias.
void matvec_into(const DenseMatrix& a, const double* x, double* y);
// y := A^T x.
void matvec_transpose_into(const DenseMatrix& a, const double* x, double* y);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

double dot(const DenseVector& x, const DenseVector& y);
double norm2(const DenseVector& x);
DenseVector normalize(const DenseVector& x);

// Largest singular value via power iteration on A^T A, relative accuracy tol.
double operator_norm(const DenseMatrix& a, double tol = 1e-10, int max_iter = 1000);

double entrywise_inf_norm(const DenseMatrix& a);
// Maximum row-wise l2 norm.
double row_two_inf_norm(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double max_asymmetry(const DenseMatrix& a);

void check_finite(const DenseVector& x, const char* context);
void check_finite(const DenseMatrix& a, const char* context);

}  // namespace cohspec
