#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mmx {

using Eigen::VectorXd;

/// Compressed sparse row matrix. Column indices are sorted within each row;
/// duplicate scatter targets share one slot, so numeric assembly can run in
/// parallel with atomic adds into val.
struct Csr {
  int nrows = 0;
  int ncols = 0;
  std::vector<std::int64_t> rowptr;  // size nrows+1
  std::vector<int> col;
  std::vector<double> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }
  void set_zero() { std::fill(val.begin(), val.end(), 0.0); }
  /// Position of (r, c) in val; -1 if the pattern lacks it.
  std::int64_t find(int r, int c) const;
  double coeff(int r, int c) const;
  VectorXd diagonal() const;
  /// Same-pattern sum: this.val += s * other.val. Throws on pattern mismatch.
  void add_scaled(const Csr& other, double s);
  Eigen::MatrixXd dense() const;
};

/// Pattern from an adjacency callback: for each row, push the column indices
/// (need not be sorted or unique).
Csr csr_from_rows(int nrows, int ncols,
                  const std::vector<std::vector<int>>& rows_cols);

// Data-parallel kernels (OpenMP) and their serial twins. The serial versions
// are the reference the tests compare against and the baseline the benchmark
// target times.
namespace kernels {
void spmv(const Csr& A, const VectorXd& x, VectorXd& y);
double dot(const VectorXd& a, const VectorXd& b);
void axpy(double a, const VectorXd& x, VectorXd& y);  // y += a x
}  // namespace kernels

namespace ref {
void spmv(const Csr& A, const VectorXd& x, VectorXd& y);
double dot(const VectorXd& a, const VectorXd& b);
void axpy(double a, const VectorXd& x, VectorXd& y);
}  // namespace ref

void dump_matrix_market(const Csr& A, const std::string& path);

}  // namespace mmx
