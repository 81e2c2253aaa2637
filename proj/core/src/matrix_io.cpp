#include "cohspec/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cohspec {

void write_matrix(const DenseMatrix& m, std::ostream& out) {
  out << m.rows << ' ' << m.cols << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::string line;
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) line += ' ';
      std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

void write_matrix_file(const DenseMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open matrix file for writing: " + path);
  write_matrix(m, out);
}

DenseMatrix read_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows == 0 || cols == 0)
    throw std::runtime_error("matrix file: bad header (want 'n_rows n_cols')");
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i)
    if (!(in >> m.data[i])) throw std::runtime_error("matrix file: truncated or non-numeric data");
  check_finite(m, "matrix file");
  return m;
}

DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return read_matrix(in);
}

}  // namespace cohspec
