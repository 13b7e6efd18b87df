#ifndef ICEFEM_SPARSE_HPP
#define ICEFEM_SPARSE_HPP

#include <span>
#include <vector>

namespace icefem {

/// Square CSR matrix with sorted, duplicate-free column indices per row.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  double& at(int i, int j);          // entry must exist in the pattern
  double get(int i, int j) const;    // 0 if not in the pattern
  void mat_vec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

  /// max_ij |A_ij - A_ji| over the stored pattern.
  double symmetry_error() const;
  double max_abs() const;
};

/// Builds the CSR pattern from per-row column lists (sorted and deduplicated
/// here).
SparseMatrix make_csr(int n, std::vector<std::vector<int>>& row_cols);

struct CgResult {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems; stops at ||b - Ax|| <= tol ||b||.  Throws SolveError on
/// non-convergence within the iteration cap or on an indefinite matrix.
std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> b,
                              double tol = 1e-10, int max_iter = 0,
                              CgResult* result = nullptr);

}  // namespace icefem

#endif
