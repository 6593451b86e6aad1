// Test-only reference implementations. Nothing here may call into the
// library code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "coexist/linalg.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct DenseEigen {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi rotations on a dense real symmetric matrix (row-major).
inline DenseEigen jacobi_symmetric(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  DenseEigen out;
  for (std::size_t idx : order) {
    out.values.push_back(a[idx * n + idx]);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + idx];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

/// Top eigenpair of a complex Hermitian matrix through its 2n x 2n real
/// embedding [[A, -B], [B, A]] with Q = A + iB.
inline std::pair<double, std::vector<cplx>> principal_pair(const std::vector<cplx>& q,
                                                           std::size_t n) {
  const std::size_t m = 2 * n;
  std::vector<double> emb(m * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx z = q[j * n + k];
      emb[j * m + k] = z.real();
      emb[j * m + n + k] = -z.imag();
      emb[(n + j) * m + k] = z.imag();
      emb[(n + j) * m + n + k] = z.real();
    }
  }
  const DenseEigen e = jacobi_symmetric(std::move(emb), m);
  const auto& top = e.vectors.back();
  std::vector<cplx> v(n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = cplx(top[k], top[n + k]);
    s += std::norm(v[k]);
  }
  for (auto& z : v) z /= std::sqrt(s);
  return {e.values.back(), v};
}

inline std::vector<cplx> random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> q(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    q[j * n + j] = g(rng);
    for (std::size_t k = j + 1; k < n; ++k) {
      const cplx z(g(rng), g(rng));
      q[j * n + k] = z;
      q[k * n + j] = std::conj(z);
    }
  }
  return q;
}

inline coexist::ComplexVector random_complex(std::size_t n, std::mt19937_64& rng,
                                             double sigma = 1.0) {
  std::normal_distribution<double> g(0.0, sigma);
  coexist::ComplexVector v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = cplx(g(rng), g(rng));
  return v;
}

/// Smallest entrywise distance between a and b over global phase rotations of b.
inline double phase_aligned_distance(const coexist::ComplexVector& a,
                                     const std::vector<cplx>& b) {
  cplx dot{0.0, 0.0};
  for (std::size_t k = 0; k < b.size(); ++k) dot += std::conj(b[k]) * a[k];
  const cplx rot = std::abs(dot) > 0 ? dot / std::abs(dot) : cplx(1.0, 0.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) worst = std::max(worst, std::abs(a[k] - rot * b[k]));
  return worst;
}

}  // namespace oracle
