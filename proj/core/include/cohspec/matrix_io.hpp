#pragma once

#include <iosfwd>
#include <string>

#include "cohspec/linalg.hpp"

namespace cohspec {

// Text matrix format: first line "n_rows n_cols", then one row per line of
// space-separated decimals.
void write_matrix(const DenseMatrix& m, std::ostream& out);
void write_matrix_file(const DenseMatrix& m, const std::string& path);
DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix_file(const std::string& path);

}  // namespace cohspec
