#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fams/sparse_matrix.hpp"

namespace fams {

/// Coordinate real general format, 1-based indices, 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Reads coordinate real/integer matrices, general or symmetric.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

/// Dense column vector in array format.
void write_matrix_market_vector(const std::string& path, const std::vector<double>& v);

}  // namespace fams
