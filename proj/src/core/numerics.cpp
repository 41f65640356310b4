#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace censync {

DenseSymmetric::DenseSymmetric(int n) : n_(n) {
  if (n < 1) fail_invalid("DenseSymmetric: order must be positive");
  tri_.assign(static_cast<size_t>(n) * (n + 1) / 2, 0.0);
}

static size_t tri_index(int i, int j) {
  if (i < j) std::swap(i, j);
  return static_cast<size_t>(i) * (i + 1) / 2 + j;
}

double DenseSymmetric::at(int i, int j) const { return tri_[tri_index(i, j)]; }
void DenseSymmetric::set(int i, int j, double v) { tri_[tri_index(i, j)] = v; }
void DenseSymmetric::add(int i, int j, double v) { tri_[tri_index(i, j)] += v; }

double DenseSymmetric::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

double DenseSymmetric::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = at(i, j);
      s += (i == j) ? v * v : 2.0 * v * v;
    }
  return std::sqrt(s);
}

EigenDecomposition eig_dense(const DenseSymmetric& m, bool want_vectors, int dense_cap) {
  int n = m.order();
  if (n > dense_cap) fail_compute("eig_dense: order exceeds dense cap");

  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = m.at(i, j);
      if (!std::isfinite(v)) fail_invalid("eig_dense: non-finite entry");
      a[static_cast<size_t>(i) * n + j] = v;
    }

  std::vector<double> vec;
  if (want_vectors) {
    vec.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vec[static_cast<size_t>(i) * n + i] = 1.0;
  }

  auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
  // V is accumulated row-major here; columns become eigenvectors.
  auto V = [&](int i, int j) -> double& { return vec[static_cast<size_t>(i) * n + j]; };

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off == 0.0) break;
    double diag_scale = 0.0;
    for (int i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(A(i, i)));
    if (std::sqrt(off) <= 1e-15 * std::max(1e-300, diag_scale + std::sqrt(off)) * n) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        double scale = std::abs(A(p, p)) + std::abs(A(q, q));
        if (std::abs(apq) <= 1e-18 * scale || apq == 0.0) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);

        double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = akp - s * (akq + tau * akp);
          A(p, k) = A(k, p);
          A(k, q) = akq + s * (akp - tau * akq);
          A(q, k) = A(k, q);
        }
        if (want_vectors) {
          for (int k = 0; k < n; ++k) {
            double vkp = V(k, p), vkq = V(k, q);
            V(k, p) = vkp - s * (vkq + tau * vkp);
            V(k, q) = vkq + s * (vkp - tau * vkq);
          }
        }
      }
    }
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int x, int y) { return A(x, x) < A(y, y); });

  EigenDecomposition out;
  out.values.resize(n);
  for (int j = 0; j < n; ++j) out.values[j] = A(perm[j], perm[j]);
  if (want_vectors) {
    out.vectors.assign(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out.vectors[static_cast<size_t>(j) * n + i] = V(i, perm[j]);
  }
  return out;
}

SparseSymmetric::SparseSymmetric(int n,
                                 const std::vector<std::tuple<int, int, double>>& upper_triplets)
    : n_(n) {
  if (n < 1) fail_invalid("SparseSymmetric: order must be positive");
  std::vector<int32_t> count(n, 0);
  for (const auto& [i, j, v] : upper_triplets) {
    if (i < 0 || j < 0 || i >= n || j >= n || i > j)
      fail_invalid("SparseSymmetric: triplet out of range or not upper");
    if (!std::isfinite(v)) fail_invalid("SparseSymmetric: non-finite entry");
    ++count[i];
    if (i != j) ++count[j];
  }
  row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + count[i];
  col_.resize(row_ptr_[n]);
  val_.resize(row_ptr_[n]);
  std::vector<int64_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const auto& [i, j, v] : upper_triplets) {
    col_[cursor[i]] = j;
    val_[cursor[i]++] = v;
    if (i != j) {
      col_[cursor[j]] = i;
      val_[cursor[j]++] = v;
    }
  }
  // sort each row by column for reproducible arithmetic
  for (int i = 0; i < n; ++i) {
    int64_t lo = row_ptr_[i], hi = row_ptr_[i + 1];
    std::vector<std::pair<int32_t, double>> row;
    row.reserve(hi - lo);
    for (int64_t k = lo; k < hi; ++k) row.emplace_back(col_[k], val_[k]);
    std::sort(row.begin(), row.end());
    for (int64_t k = lo; k < hi; ++k) {
      col_[k] = row[k - lo].first;
      val_[k] = row[k - lo].second;
      if (k > lo && col_[k] == col_[k - 1])
        fail_invalid("SparseSymmetric: duplicate entry");
    }
  }
}

void SparseSymmetric::multiply(const double* x, double* y) const {
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
    y[i] = acc;
  }
}

double SparseSymmetric::infnorm_rowsum() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += std::abs(val_[k]);
    best = std::max(best, s);
  }
  return best;
}

double SparseSymmetric::gershgorin_upper() const {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) {
    double diag = 0.0, offsum = 0.0;
    for (int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] == i)
        diag += val_[k];
      else
        offsum += std::abs(val_[k]);
    }
    best = std::max(best, diag + offsum);
  }
  return best;
}

DenseSymmetric SparseSymmetric::to_dense() const {
  DenseSymmetric d(n_);
  for (int i = 0; i < n_; ++i)
    for (int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] <= i) d.set(i, col_[k], val_[k]);
  return d;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x,
// by Sturm sequence count.
int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  int cnt = 0;
  double d = 1.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    double b2 = (i == 0) ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - b2 / (d == 0.0 ? 1e-300 : d);
    if (d < 0.0) ++cnt;
  }
  return cnt;
}

// Largest eigenvalue of the tridiagonal by bisection.
double tridiag_largest(const std::vector<double>& alpha, const std::vector<double>& beta) {
  size_t k = alpha.size();
  double lo = alpha[0], hi = alpha[0];
  for (size_t i = 0; i < k; ++i) {
    double r = std::abs(i > 0 ? beta[i - 1] : 0.0) + std::abs(i < k - 1 ? beta[i] : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  double span = std::max(1.0, hi - lo);
  lo -= 1e-12 * span;
  hi += 1e-12 * span;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) >= static_cast<int>(k))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Approximate eigenvector of the tridiagonal at eigenvalue theta via two
// rounds of inverse iteration (Thomas solve with pivot rescue).
std::vector<double> tridiag_eigvec(const std::vector<double>& alpha,
                                   const std::vector<double>& beta, double theta) {
  size_t k = alpha.size();
  std::vector<double> s(k, 1.0 / std::sqrt(static_cast<double>(k)));
  double scale = 0.0;
  for (size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(alpha[i]));
  for (size_t i = 0; i + 1 < k; ++i) scale = std::max(scale, std::abs(beta[i]));
  double tiny = std::max(scale, 1.0) * 1e-150;

  for (int round = 0; round < 2; ++round) {
    // solve (T - theta I) x = s
    std::vector<double> diag(k), rhs = s;
    std::vector<double> sub(k > 1 ? k - 1 : 0);
    for (size_t i = 0; i < k; ++i) diag[i] = alpha[i] - theta;
    for (size_t i = 0; i + 1 < k; ++i) sub[i] = beta[i];
    for (size_t i = 0; i + 1 < k; ++i) {
      if (std::abs(diag[i]) < tiny) diag[i] = (diag[i] < 0 ? -tiny : tiny);
      double f = sub[i] / diag[i];
      diag[i + 1] -= f * sub[i];
      rhs[i + 1] -= f * rhs[i];
    }
    if (std::abs(diag[k - 1]) < tiny) diag[k - 1] = (diag[k - 1] < 0 ? -tiny : tiny);
    s[k - 1] = rhs[k - 1] / diag[k - 1];
    for (size_t ii = k - 1; ii-- > 0;)
      s[ii] = (rhs[ii] - beta[ii] * s[ii + 1]) / diag[ii];
    double nn = norm(s);
    if (!(nn > 0.0) || !std::isfinite(nn)) {
      s.assign(k, 0.0);
      s[k - 1] = 1.0;
      break;
    }
    for (auto& v : s) v /= nn;
  }
  return s;
}

}  // namespace

ExtremalEig extremal_eig(const SparseSymmetric& m, Extremal which,
                         const std::vector<double>* deflate, const LanczosOptions& opts) {
  int n = m.order();
  double scale = std::max(1.0, m.infnorm_rowsum());

  std::vector<double> w;  // normalized deflation direction
  if (deflate) {
    if (static_cast<int>(deflate->size()) != n)
      fail_invalid("extremal_eig: deflation vector has wrong length");
    w = *deflate;
    double wn = norm(w);
    if (!(wn > 0.0)) fail_invalid("extremal_eig: zero deflation vector");
    for (auto& v : w) v /= wn;
    std::vector<double> mw(n);
    m.multiply(w.data(), mw.data());
    if (norm(mw) > 1e-6 * scale)
      fail_invalid("extremal_eig: deflation vector is not a null direction");
  }

  int eff_dim = n - (deflate ? 1 : 0);
  if (eff_dim < 1) fail_invalid("extremal_eig: deflated problem is empty");

  // The smallest eigenvalue is computed as a largest-eigenvalue problem of
  // the spectrally flipped operator sigma*I - M.
  double sigma = 0.0;
  bool flipped = (which == Extremal::Smallest);
  if (flipped) sigma = m.gershgorin_upper() + 1.0;

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    m.multiply(x.data(), y.data());
    if (flipped)
      for (int i = 0; i < n; ++i) y[i] = sigma * x[i] - y[i];
  };

  int maxit = opts.max_iterations > 0
                  ? opts.max_iterations
                  : std::max(300, static_cast<int>(std::ceil(50.0 * std::sqrt(double(n)))));
  int basis_cap = std::min(maxit, eff_dim);

  RandomStream rs(0xCE75C0DEULL, static_cast<uint64_t>(n));
  auto random_orthonormal = [&](const std::vector<std::vector<double>>& basis)
      -> std::vector<double> {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<double> v(n);
      for (int i = 0; i < n; ++i) v[i] = rs.next_gaussian();
      if (deflate) axpy(-dot(w, v), w, v);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) axpy(-dot(b, v), b, v);
      double vn = norm(v);
      if (vn > 1e-8) {
        for (auto& x : v) x /= vn;
        return v;
      }
    }
    fail_compute("extremal_eig: could not generate a fresh start vector");
  };

  std::vector<std::vector<double>> basis;
  basis.reserve(basis_cap);
  std::vector<double> alpha_v, beta_v;
  basis.push_back(random_orthonormal(basis));

  double theta = 0.0;
  std::vector<double> ritz_in_basis;
  bool converged = false;
  int iters = 0;
  double tol_eff = opts.tol * std::max(scale, flipped ? sigma : 0.0);

  std::vector<double> u(n);
  while (static_cast<int>(basis.size()) <= basis_cap) {
    const auto& vj = basis.back();
    apply(vj, u);
    if (deflate) axpy(-dot(w, u), w, u);
    double a = dot(vj, u);
    alpha_v.push_back(a);
    ++iters;

    axpy(-a, vj, u);
    if (basis.size() >= 2) axpy(-beta_v.back(), basis[basis.size() - 2], u);
    for (int pass = 0; pass < 2; ++pass) {
      if (deflate) axpy(-dot(w, u), w, u);
      for (const auto& b : basis) axpy(-dot(b, u), b, u);
    }
    double bnorm = norm(u);

    size_t k = alpha_v.size();
    bool last_chance = static_cast<int>(basis.size()) == basis_cap ||
                       static_cast<int>(k) >= eff_dim;
    bool do_check = last_chance || k <= 64 || k % 4 == 0;
    if (do_check) {
      theta = tridiag_largest(alpha_v, beta_v);
      ritz_in_basis = tridiag_eigvec(alpha_v, beta_v, theta);
      double resid = bnorm * std::abs(ritz_in_basis[k - 1]);
      if (resid <= tol_eff || static_cast<int>(k) >= eff_dim) {
        converged = resid <= std::max(tol_eff, 1e-8 * std::max(1.0, std::abs(theta))) ||
                    static_cast<int>(k) >= eff_dim;
        break;
      }
    }
    if (last_chance) break;

    if (bnorm <= 1e-13 * std::max(1.0, scale)) {
      // invariant subspace found; continue in a fresh direction
      beta_v.push_back(0.0);
      basis.push_back(random_orthonormal(basis));
    } else {
      beta_v.push_back(bnorm);
      std::vector<double> next = u;
      for (auto& x : next) x /= bnorm;
      basis.push_back(std::move(next));
    }
  }

  if (!converged) fail_compute("extremal_eig: no convergence within iteration cap");

  std::vector<double> y(n, 0.0);
  for (size_t i = 0; i < basis.size() && i < ritz_in_basis.size(); ++i)
    axpy(ritz_in_basis[i], basis[i], y);
  if (deflate) axpy(-dot(w, y), w, y);
  double yn = norm(y);
  if (yn > 0)
    for (auto& x : y) x /= yn;

  ExtremalEig out;
  out.value = flipped ? sigma - theta : theta;
  out.vector = std::move(y);
  out.iterations = iters;
  return out;
}

PsdVerdict psd_with_known_null(const SparseSymmetric& m, const LanczosOptions& opts) {
  int n = m.order();
  double scale = std::max(1.0, m.infnorm_rowsum());
  std::vector<double> ones(n, 1.0), mo(n);
  m.multiply(ones.data(), mo.data());
  double viol = 0.0;
  for (double v : mo) viol = std::max(viol, std::abs(v));
  if (viol > 1e-8 * scale)
    fail_invalid("psd_with_known_null: matrix does not annihilate the all-ones vector");

  auto eig = extremal_eig(m, Extremal::Smallest, &ones, opts);
  double tau = 1e-8 * scale;
  return PsdVerdict{eig.value, eig.value > tau};
}

}  // namespace censync
