#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

namespace censync {

/// Symmetric dense matrix; only the lower triangle is stored, so the
/// object cannot drift out of symmetry.
class DenseSymmetric {
public:
  explicit DenseSymmetric(int n);

  int order() const { return n_; }
  double at(int i, int j) const;
  void set(int i, int j, double v);
  void add(int i, int j, double v);

  double trace() const;
  double frobenius_norm() const;

private:
  int n_;
  std::vector<double> tri_;  // packed lower triangle, row-major
};

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major n*n; empty unless requested
};

/// Full spectrum of a dense symmetric matrix via cyclic Jacobi rotations.
/// Eigenvalues ascending; when vectors are requested, column j of the
/// returned matrix is the eigenvector of values[j].
EigenDecomposition eig_dense(const DenseSymmetric& m, bool want_vectors = false,
                             int dense_cap = 2000);

/// Structurally symmetric sparse matrix in compressed-row form. Triplets
/// are given once per unordered pair (i <= j) and both triangles are stored.
class SparseSymmetric {
public:
  SparseSymmetric(int n, const std::vector<std::tuple<int, int, double>>& upper_triplets);

  int order() const { return n_; }
  int64_t nnz() const { return static_cast<int64_t>(val_.size()); }

  void multiply(const double* x, double* y) const;  // y = M x
  double infnorm_rowsum() const;                    // max_i sum_j |M(i,j)|
  double gershgorin_upper() const;                  // upper bound on lambda_max
  DenseSymmetric to_dense() const;

private:
  int n_;
  std::vector<int64_t> row_ptr_;
  std::vector<int32_t> col_;
  std::vector<double> val_;
};

enum class Extremal { Largest, Smallest };

struct LanczosOptions {
  int max_iterations = 0;  // 0 -> max(300, ceil(50*sqrt(n)))
  double tol = 1e-10;      // residual tolerance, relative to matrix scale
};

struct ExtremalEig {
  double value;
  std::vector<double> vector;
  int iterations;
};

/// Extremal eigenpair of a sparse symmetric matrix by Lanczos iteration with
/// full reorthogonalization. If `deflate` is given it must be an (approximate)
/// null direction of the matrix; the iteration is confined to its orthogonal
/// complement. The smallest eigenvalue is found by running on sigma*I - M
/// with sigma a Gershgorin upper bound.
ExtremalEig extremal_eig(const SparseSymmetric& m, Extremal which,
                         const std::vector<double>* deflate = nullptr,
                         const LanczosOptions& opts = {});

struct PsdVerdict {
  double lambda2;           // smallest eigenvalue on the complement of span{1}
  bool strictly_certified;  // lambda2 > tolerance
};

/// PSD test for a matrix known to annihilate the all-ones vector.
PsdVerdict psd_with_known_null(const SparseSymmetric& m, const LanczosOptions& opts = {});

}  // namespace censync
