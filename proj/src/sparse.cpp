#include "icefem/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "icefem/errors.hpp"

namespace icefem {

double& SparseMatrix::at(int i, int j) {
  auto begin = cols.begin() + row_ptr[i], end = cols.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) throw Error("SparseMatrix::at: entry not in pattern");
  return vals[static_cast<size_t>(it - cols.begin())];
}

double SparseMatrix::get(int i, int j) const {
  auto begin = cols.begin() + row_ptr[i], end = cols.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return vals[static_cast<size_t>(it - cols.begin())];
}

void SparseMatrix::mat_vec(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = get(i, i);
  return d;
}

double SparseMatrix::symmetry_error() const {
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      err = std::max(err, std::abs(vals[k] - get(cols[k], i)));
  return err;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix make_csr(int n, std::vector<std::vector<int>>& row_cols) {
  SparseMatrix a;
  a.n = n;
  a.row_ptr.resize(n + 1, 0);
  size_t nnz = 0;
  for (int i = 0; i < n; ++i) {
    auto& rc = row_cols[i];
    std::sort(rc.begin(), rc.end());
    rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
    nnz += rc.size();
  }
  a.cols.reserve(nnz);
  for (int i = 0; i < n; ++i) {
    a.row_ptr[i] = static_cast<int>(a.cols.size());
    a.cols.insert(a.cols.end(), row_cols[i].begin(), row_cols[i].end());
  }
  a.row_ptr[n] = static_cast<int>(a.cols.size());
  a.vals.assign(a.cols.size(), 0.0);
  return a;
}

std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> b,
                              double tol, int max_iter, CgResult* result) {
  const int n = a.n;
  std::vector<double> x(n, 0.0);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    if (result) *result = {0, 0.0};
    return x;
  }
  if (max_iter <= 0) max_iter = std::max(2000, 20 * n);

  std::vector<double> diag = a.diagonal();
  for (int i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0))
      throw SolveError("solve_spd: nonpositive diagonal entry, matrix not SPD");
    diag[i] = 1.0 / diag[i];
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];

  double rel = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    a.mat_vec(p, ap);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0))
      throw SolveError("solve_spd: nonpositive curvature encountered, matrix not SPD");
    double alpha = rz / pap;
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm += r[i] * r[i];
    }
    rel = std::sqrt(rnorm) / bnorm;
    if (rel <= tol) {
      if (result) *result = {it, rel};
      return x;
    }
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = diag[i] * r[i];
      rz_new += r[i] * z[i];
    }
    double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolveError("solve_spd: CG stagnated, relative residual " +
                   std::to_string(rel) + " after " + std::to_string(max_iter) +
                   " iterations");
}

}  // namespace icefem
