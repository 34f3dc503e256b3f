#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "cq/error.hpp"
#include "cq/random.hpp"

// Small hand-rolled dense linear algebra for the layout algorithms: power and
// subspace iteration for a few extremal eigenpairs, cyclic Jacobi for tiny
// symmetric eigenproblems, and a dense Cholesky solve.

namespace cq::detail {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(std::span<double> x, double alpha) {
  for (double& v : x) v *= alpha;
}

/// Removes the components along each (orthonormal) vector in `basis`.
/// Applied twice for numerical orthogonality.
inline void project_out(std::span<double> v, std::span<const Vec> basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : basis) axpy(-dot(v, b), b, v);
}

/// Deterministic start vector, not aligned with any structured direction.
inline Vec start_vector(std::size_t n, std::uint64_t salt) {
  Rng rng(derive_seed(0x5eedULL, {salt}));
  Vec v(n);
  for (double& x : v) x = uniform01(rng) - 0.5;
  return v;
}

struct EigenPair {
  double value = 0.0;
  Vec vector;
  bool converged = false;
  int iterations = 0;
};

/// Dominant eigenpair of (A + shift I) restricted to the complement of
/// `deflated`. `apply(x, y)` computes y = A x. The returned value is the
/// Rayleigh quotient of A itself (shift removed).
template <typename Apply>
EigenPair power_iteration(std::size_t n, Apply&& apply, double shift, std::span<const Vec> deflated,
                          Vec start, double tol, int max_iterations) {
  EigenPair out;
  Vec v = std::move(start), y(n);
  project_out(v, deflated);
  double nv = norm(v);
  if (nv == 0.0) throw NumericError("power iteration start vector lies in the deflated space");
  scale(v, 1.0 / nv);
  for (int it = 1; it <= max_iterations; ++it) {
    apply(v, y);
    axpy(shift, v, y);
    project_out(y, deflated);
    const double ny = norm(y);
    out.iterations = it;
    if (ny == 0.0) {
      out.converged = true;
      break;
    }
    scale(y, 1.0 / ny);
    double diff_same = 0.0, diff_flip = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diff_same += (y[i] - v[i]) * (y[i] - v[i]);
      diff_flip += (y[i] + v[i]) * (y[i] + v[i]);
    }
    std::swap(v, y);
    if (std::sqrt(std::min(diff_same, diff_flip)) < tol) {
      out.converged = true;
      break;
    }
  }
  apply(v, y);
  out.value = dot(v, y);
  out.vector = std::move(v);
  return out;
}

/// Eigen-decomposition of a small dense symmetric matrix (row-major p x p)
/// by cyclic Jacobi rotations. Returns eigenvalues ascending with the
/// matching eigenvectors as columns of `vectors` (row-major).
struct SmallEigen {
  Vec values;
  Vec vectors;
};

inline SmallEigen jacobi_eigen(Vec a, std::size_t p) {
  Vec v(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) v[i * p + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) off += a[i * p + j] * a[i * p + j];
    if (off < 1e-30) break;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        const double aij = a[i * p + j];
        if (std::abs(aij) < 1e-300) continue;
        const double theta = (a[j * p + j] - a[i * p + i]) / (2.0 * aij);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < p; ++k) {
          const double aki = a[k * p + i], akj = a[k * p + j];
          a[k * p + i] = c * aki - s * akj;
          a[k * p + j] = s * aki + c * akj;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double aik = a[i * p + k], ajk = a[j * p + k];
          a[i * p + k] = c * aik - s * ajk;
          a[j * p + k] = s * aik + c * ajk;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vki = v[k * p + i], vkj = v[k * p + j];
          v[k * p + i] = c * vki - s * vkj;
          v[k * p + j] = s * vki + c * vkj;
        }
      }
  }
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x * p + x] < a[y * p + y]; });
  SmallEigen out{Vec(p), Vec(p * p)};
  for (std::size_t c = 0; c < p; ++c) {
    out.values[c] = a[order[c] * p + order[c]];
    for (std::size_t r = 0; r < p; ++r) out.vectors[r * p + c] = v[r * p + order[c]];
  }
  return out;
}

/// Modified Gram-Schmidt on a block of vectors, also orthogonal to `fixed`.
inline void orthonormalize(std::vector<Vec>& block, std::span<const Vec> fixed) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    project_out(block[i], fixed);
    project_out(block[i], std::span<const Vec>(block.data(), i));
    const double nb = norm(block[i]);
    if (nb == 0.0) throw NumericError("subspace iteration lost rank");
    scale(block[i], 1.0 / nb);
  }
}

struct SubspaceResult {
  Vec values;              // Ritz values of A, descending
  std::vector<Vec> vectors;  // matching Ritz vectors
  bool converged = false;
  int iterations = 0;
};

/// Orthogonal iteration for the `p` algebraically largest eigenpairs of a
/// symmetric positive semidefinite operator (apply: y = A x), in the
/// complement of `fixed`. Convergence is measured on the Ritz values.
template <typename Apply>
SubspaceResult subspace_iteration(std::size_t n, std::size_t p, Apply&& apply, std::span<const Vec> fixed,
                                  double tol, int max_iterations) {
  std::vector<Vec> q(p), z(p, Vec(n));
  for (std::size_t i = 0; i < p; ++i) q[i] = start_vector(n, 101 + i);
  orthonormalize(q, fixed);

  SubspaceResult out;
  Vec previous(p, 0.0);
  auto ritz = [&]() {
    for (std::size_t i = 0; i < p; ++i) apply(q[i], z[i]);
    Vec h(p * p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) h[i * p + j] = 0.5 * (dot(q[i], z[j]) + dot(q[j], z[i]));
    return jacobi_eigen(std::move(h), p);
  };

  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t i = 0; i < p; ++i) apply(q[i], z[i]);
    std::swap(q, z);
    orthonormalize(q, fixed);
    out.iterations = it;
    if (it % 10 == 0 || it == max_iterations) {
      auto eig = ritz();
      double change = 0.0, scale_ref = 1e-300;
      for (std::size_t i = 0; i < p; ++i) {
        change = std::max(change, std::abs(eig.values[i] - previous[i]));
        scale_ref = std::max(scale_ref, std::abs(eig.values[i]));
      }
      previous = eig.values;
      if (change <= tol * scale_ref) {
        out.converged = true;
        break;
      }
    }
  }

  auto eig = ritz();
  out.values.resize(p);
  out.vectors.assign(p, Vec(n, 0.0));
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t col = p - 1 - c;  // descending
    out.values[c] = eig.values[col];
    for (std::size_t r = 0; r < p; ++r) axpy(eig.vectors[r * p + col], q[r], out.vectors[c]);
  }
  return out;
}

/// In-place Cholesky factor (lower, row-major) of an SPD matrix.
class Cholesky {
public:
  Cholesky(Vec a, std::size_t n) : n_(n), l_(std::move(a)) {
    for (std::size_t j = 0; j < n_; ++j) {
      double d = l_[j * n_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * n_ + k] * l_[j * n_ + k];
      if (!(d > 0.0)) throw NumericError("matrix is not positive definite");
      const double ljj = std::sqrt(d);
      l_[j * n_ + j] = ljj;
      for (std::size_t i = j + 1; i < n_; ++i) {
        double s = l_[i * n_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= l_[i * n_ + k] * l_[j * n_ + k];
        l_[i * n_ + j] = s / ljj;
      }
    }
  }

  void solve(std::span<double> b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l_[i * n_ + k] * b[k];
      b[i] = s / l_[i * n_ + i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = b[i];
      for (std::size_t k = i + 1; k < n_; ++k) s -= l_[k * n_ + i] * b[k];
      b[i] = s / l_[i * n_ + i];
    }
  }

private:
  std::size_t n_;
  Vec l_;
};

}  // namespace cq::detail
