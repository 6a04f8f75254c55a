#include "micromorphx/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mmx {

std::int64_t Csr::find(int r, int c) const {
  const auto lo = col.begin() + rowptr[r];
  const auto hi = col.begin() + rowptr[r + 1];
  auto it = std::lower_bound(lo, hi, c);
  if (it == hi || *it != c) return -1;
  return it - col.begin();
}

double Csr::coeff(int r, int c) const {
  const auto idx = find(r, c);
  return idx < 0 ? 0.0 : val[idx];
}

VectorXd Csr::diagonal() const {
  VectorXd d = VectorXd::Zero(nrows);
  for (int r = 0; r < nrows; ++r) {
    const auto idx = find(r, r);
    if (idx >= 0) d[r] = val[idx];
  }
  return d;
}

void Csr::add_scaled(const Csr& other, double s) {
  if (other.nrows != nrows || other.col != col || other.rowptr != rowptr)
    throw std::invalid_argument("add_scaled requires identical patterns");
  for (std::size_t i = 0; i < val.size(); ++i) val[i] += s * other.val[i];
}

Eigen::MatrixXd Csr::dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nrows, ncols);
  for (int r = 0; r < nrows; ++r)
    for (auto i = rowptr[r]; i < rowptr[r + 1]; ++i) D(r, col[i]) += val[i];
  return D;
}

Csr csr_from_rows(int nrows, int ncols, const std::vector<std::vector<int>>& rows_cols) {
  Csr A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.rowptr.assign(nrows + 1, 0);
  std::vector<std::vector<int>> cleaned(nrows);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < nrows; ++r) {
    auto cols = rows_cols[r];
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    cleaned[r] = std::move(cols);
  }
  for (int r = 0; r < nrows; ++r) A.rowptr[r + 1] = A.rowptr[r] + cleaned[r].size();
  A.col.resize(A.rowptr[nrows]);
  A.val.assign(A.rowptr[nrows], 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < nrows; ++r)
    std::copy(cleaned[r].begin(), cleaned[r].end(), A.col.begin() + A.rowptr[r]);
  return A;
}

namespace kernels {

void spmv(const Csr& A, const VectorXd& x, VectorXd& y) {
  y.resize(A.nrows);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < A.nrows; ++r) {
    double acc = 0.0;
    for (auto i = A.rowptr[r]; i < A.rowptr[r + 1]; ++i) acc += A.val[i] * x[A.col[i]];
    y[r] = acc;
  }
}

double dot(const VectorXd& a, const VectorXd& b) {
  double acc = 0.0;
  const int n = static_cast<int>(a.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double a, const VectorXd& x, VectorXd& y) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace kernels

namespace ref {

void spmv(const Csr& A, const VectorXd& x, VectorXd& y) {
  y.resize(A.nrows);
  for (int r = 0; r < A.nrows; ++r) {
    double acc = 0.0;
    for (auto i = A.rowptr[r]; i < A.rowptr[r + 1]; ++i) acc += A.val[i] * x[A.col[i]];
    y[r] = acc;
  }
}

double dot(const VectorXd& a, const VectorXd& b) {
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double a, const VectorXd& x, VectorXd& y) {
  for (int i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace ref

void dump_matrix_market(const Csr& A, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %lld\n", A.nrows, A.ncols, static_cast<long long>(A.nnz()));
  for (int r = 0; r < A.nrows; ++r)
    for (auto i = A.rowptr[r]; i < A.rowptr[r + 1]; ++i)
      std::fprintf(f, "%d %d %.17g\n", r + 1, A.col[i] + 1, A.val[i]);
  std::fclose(f);
}

}  // namespace mmx
