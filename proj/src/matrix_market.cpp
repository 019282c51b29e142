#include "fams/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fams {

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < a.rows(); ++r) {
    auto cols = a.row_cols(r);
    auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out << r + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_market(out, a);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix market: empty input");
  std::string lower = line;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.rfind("%%matrixmarket", 0) != 0) throw std::runtime_error("matrix market: missing banner");
  if (lower.find("coordinate") == std::string::npos)
    throw std::runtime_error("matrix market: only coordinate format is supported");
  if (lower.find("complex") != std::string::npos || lower.find("pattern") != std::string::npos)
    throw std::runtime_error("matrix market: only real/integer fields are supported");
  const bool symmetric = lower.find("symmetric") != std::string::npos;

  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  long rows = 0, cols = 0, entries = 0;
  if (!(header >> rows >> cols >> entries)) throw std::runtime_error("matrix market: bad size line");

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  for (long e = 0; e < entries; ++e) {
    long r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v))
      throw std::runtime_error("matrix market: truncated entry list at entry " + std::to_string(e + 1));
    t.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), v});
    if (symmetric && r != c) t.push_back({static_cast<int>(c - 1), static_cast<int>(r - 1), v});
  }
  return SparseMatrix::from_triplets(static_cast<int>(rows), static_cast<int>(cols), std::move(t));
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market_vector(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n" << std::setprecision(17);
  for (double x : v) out << x << '\n';
}

}  // namespace fams
