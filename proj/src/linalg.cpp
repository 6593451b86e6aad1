#include "coexist/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace coexist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::size_t dim, cplx fill) : entries_(dim, fill) {}

ComplexVector::ComplexVector(std::initializer_list<cplx> entries) : entries_(entries) {}

ComplexVector::ComplexVector(std::vector<cplx> entries) : entries_(std::move(entries)) {}

double ComplexVector::squared_norm() const {
  double acc = 0.0;
  for (const auto& z : entries_) acc += std::norm(z);
  return acc;
}

double ComplexVector::norm() const { return std::sqrt(squared_norm()); }

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::domain_error("normalized: zero vector");
  ComplexVector out(*this);
  out *= cplx(1.0 / n, 0.0);
  return out;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "ComplexVector::operator+=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "ComplexVector::operator-=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexVector& ComplexVector::operator*=(cplx scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(cplx scale, ComplexVector v) { return v *= scale; }

cplx inner_product(const ComplexVector& a, const ComplexVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner_product");
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

void axpy(cplx scale, const ComplexVector& x, ComplexVector& a) {
  require_same_dim(a.dim(), x.dim(), "axpy");
  for (std::size_t k = 0; k < a.dim(); ++k) a[k] += scale * x[k];
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) { return HermitianMatrix(dim); }

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  HermitianMatrix m(dim);
  for (std::size_t k = 0; k < dim; ++k) m.entries_[k * dim + k] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::from_entries(std::size_t dim, std::vector<cplx> entries) {
  if (entries.size() != dim * dim) {
    throw std::invalid_argument("HermitianMatrix: expected " + std::to_string(dim * dim) +
                                " entries, got " + std::to_string(entries.size()));
  }
  double scale = 0.0;
  for (const auto& z : entries) scale = std::max(scale, std::abs(z));
  const double tol = 1e-12 * scale;

  HermitianMatrix m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j; k < dim; ++k) {
      const cplx a = entries[j * dim + k];
      const cplx b = entries[k * dim + j];
      if (std::abs(a - std::conj(b)) > tol) {
        throw std::invalid_argument("HermitianMatrix: entry (" + std::to_string(j) + "," +
                                    std::to_string(k) + ") is not the conjugate of (" +
                                    std::to_string(k) + "," + std::to_string(j) + ")");
      }
      const cplx sym = 0.5 * (a + std::conj(b));
      if (j == k) {
        m.entries_[j * dim + j] = sym.real();
      } else {
        m.entries_[j * dim + k] = sym;
        m.entries_[k * dim + j] = std::conj(sym);
      }
    }
  }
  return m;
}

void HermitianMatrix::add_outer(const ComplexVector& v, double weight) {
  require_same_dim(dim_, v.dim(), "outer_accumulate");
  for (std::size_t j = 0; j < dim_; ++j) {
    const cplx wj = weight * v[j];
    cplx* row = &entries_[j * dim_];
    for (std::size_t k = 0; k < dim_; ++k) row[k] += wj * std::conj(v[k]);
    // keep the diagonal exactly real
    row[j] = row[j].real();
  }
}

void HermitianMatrix::add_identity(double shift) {
  for (std::size_t k = 0; k < dim_; ++k) entries_[k * dim_ + k] += shift;
}

ComplexVector HermitianMatrix::multiply(const ComplexVector& x) const {
  require_same_dim(dim_, x.dim(), "HermitianMatrix::multiply");
  ComplexVector y(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const cplx* row = &entries_[j * dim_];
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < dim_; ++k) acc += row[k] * x[k];
    y[j] = acc;
  }
  return y;
}

double HermitianMatrix::quadratic_form(const ComplexVector& x) const {
  return inner_product(x, multiply(x)).real();
}

double HermitianMatrix::gershgorin_bound() const {
  double bound = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) row += std::abs(entries_[j * dim_ + k]);
    bound = std::max(bound, row);
  }
  return bound;
}

HermitianMatrix outer_accumulate(const HermitianMatrix& acc, const ComplexVector& v,
                                 double weight) {
  HermitianMatrix out(acc);
  out.add_outer(v, weight);
  return out;
}

// ---------------------------------------------------------------------------
// Principal eigenpair

namespace {

// Real symmetric tridiagonal matrix with diagonal `d` and off-diagonal `b`.
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> b;

  std::size_t size() const { return d.size(); }

  double pivmin() const {
    double m = 1.0;
    for (double x : b) m = std::max(m, x * x);
    return std::numeric_limits<double>::min() * m;
  }

  // Number of eigenvalues strictly less than x (Sturm sequence).
  std::size_t count_below(double x, double pmin) const {
    std::size_t count = 0;
    double q = d[0] - x;
    if (std::abs(q) < pmin) q = -pmin;
    if (q < 0.0) ++count;
    for (std::size_t k = 1; k < d.size(); ++k) {
      q = d[k] - x - b[k - 1] * b[k - 1] / q;
      if (std::abs(q) < pmin) q = -pmin;
      if (q < 0.0) ++count;
    }
    return count;
  }

  // k-th largest eigenvalue (k = 1 is the largest) by bisection.
  double kth_largest(std::size_t k) const {
    const std::size_t n = d.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (i > 0 ? b[i - 1] : 0.0) + (i + 1 < n ? b[i] : 0.0);
      lo = std::min(lo, d[i] - r);
      hi = std::max(hi, d[i] + r);
    }
    const double pmin = pivmin();
    const double widen = 4.0 * kEps * static_cast<double>(n) *
                             std::max(std::abs(lo), std::abs(hi)) + 2.0 * pmin;
    lo -= widen;
    hi += widen;
    for (int it = 0; it < 512; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid, pmin) > n - k) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + pmin) break;
    }
    return 0.5 * (lo + hi);
  }

  double norm_bound() const {
    double m = 0.0;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (i > 0 ? b[i - 1] : 0.0) + (i + 1 < n ? b[i] : 0.0);
      m = std::max(m, std::abs(d[i]) + r);
    }
    return m;
  }
};

// LU factorization with partial pivoting of (T - shift I), tridiagonal
// storage. Tiny pivots are replaced by `pert` so that solves at an
// eigenvalue stay finite.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const Tridiagonal& t, double shift, double pert) {
    const std::size_t n = t.size();
    d_.resize(n);
    du_.assign(n > 1 ? n - 1 : 0, 0.0);
    du2_.assign(n > 2 ? n - 2 : 0, 0.0);
    dl_.assign(n > 1 ? n - 1 : 0, 0.0);
    swap_.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i < n; ++i) d_[i] = t.d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      du_[i] = t.b[i];
      dl_[i] = t.b[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (std::abs(d_[i]) < pert) d_[i] = std::copysign(pert, d_[i]);
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double tmp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = tmp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swap_[i] = true;
      }
    }
    if (n > 0 && std::abs(d_[n - 1]) < pert) d_[n - 1] = std::copysign(pert, d_[n - 1]);
  }

  void solve(std::vector<double>& x) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swap_[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= dl_[i] * x[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = x[ii];
      if (ii + 1 < n) acc -= du_[ii] * x[ii + 1];
      if (ii + 2 < n) acc -= du2_[ii] * x[ii + 2];
      x[ii] = acc / d_[ii];
    }
  }

 private:
  std::vector<double> d_, du_, du2_, dl_;
  std::vector<bool> swap_;
};

double normalize_in_place(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s > 0.0) {
    for (double& v : x) v /= s;
  }
  return s;
}

double tridiagonal_residual(const Tridiagonal& t, const std::vector<double>& y, double mu) {
  const std::size_t n = t.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (t.d[i] - mu) * y[i];
    if (i > 0) r += t.b[i - 1] * y[i - 1];
    if (i + 1 < n) r += t.b[i] * y[i + 1];
    acc += r * r;
  }
  return std::sqrt(acc);
}

// Householder reduction Q = U T U^H with T tridiagonal; T is further
// made real by a diagonal unitary D, T = D S D^H.
struct HouseholderReduction {
  std::size_t n = 0;
  std::vector<std::vector<cplx>> reflectors;  // reflectors[k] acts on entries k+1..n-1
  std::vector<cplx> phases;                   // diagonal of D
  Tridiagonal real_form;

  explicit HouseholderReduction(const HermitianMatrix& q) : n(q.dim()) {
    std::vector<cplx> a(q.entries().begin(), q.entries().end());
    reflectors.resize(n > 2 ? n - 2 : 0);
    std::vector<cplx> p;
    for (std::size_t k = 0; k + 2 < n; ++k) {
      const std::size_t m = n - k - 1;
      std::vector<cplx> v(m);
      double tail = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        v[j] = a[(k + 1 + j) * n + k];
        if (j > 0) tail += std::norm(v[j]);
      }
      if (tail == 0.0) continue;
      const double s = std::sqrt(std::norm(v[0]) + tail);
      const double a0 = std::abs(v[0]);
      const cplx phase = a0 > 0.0 ? v[0] / a0 : cplx(1.0, 0.0);
      const cplx alpha = -phase * s;
      v[0] -= alpha;
      double vn = 0.0;
      for (const auto& z : v) vn += std::norm(z);
      vn = std::sqrt(vn);
      for (auto& z : v) z /= vn;

      // trailing block B <- H B H with H = I - 2 v v^H
      p.assign(m, cplx{0.0, 0.0});
      for (std::size_t i = 0; i < m; ++i) {
        const cplx* row = &a[(k + 1 + i) * n + (k + 1)];
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) acc += row[j] * v[j];
        p[i] = acc;
      }
      double kappa = 0.0;
      for (std::size_t i = 0; i < m; ++i) kappa += (std::conj(v[i]) * p[i]).real();
      for (std::size_t i = 0; i < m; ++i) p[i] = 2.0 * p[i] - 2.0 * kappa * v[i];
      for (std::size_t i = 0; i < m; ++i) {
        cplx* row = &a[(k + 1 + i) * n + (k + 1)];
        const cplx vi = v[i];
        const cplx pi = p[i];
        for (std::size_t j = 0; j < m; ++j) {
          row[j] -= vi * std::conj(p[j]) + pi * std::conj(v[j]);
        }
        row[i] = row[i].real();
      }
      a[(k + 1) * n + k] = alpha;
      a[k * n + (k + 1)] = std::conj(alpha);
      for (std::size_t j = 1; j < m; ++j) {
        a[(k + 1 + j) * n + k] = 0.0;
        a[k * n + (k + 1 + j)] = 0.0;
      }
      reflectors[k] = std::move(v);
    }

    real_form.d.resize(n);
    real_form.b.resize(n > 0 ? n - 1 : 0);
    phases.assign(n, cplx{1.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) real_form.d[i] = a[i * n + i].real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const cplx e = a[(i + 1) * n + i];
      const double mag = std::abs(e);
      real_form.b[i] = mag;
      phases[i + 1] = mag > 0.0 ? phases[i] * (e / mag) : phases[i];
    }
  }

  ComplexVector lift(const std::vector<double>& y) const {
    ComplexVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = phases[i] * y[i];
    for (std::size_t kk = reflectors.size(); kk-- > 0;) {
      const auto& v = reflectors[kk];
      if (v.empty()) continue;
      cplx dot{0.0, 0.0};
      for (std::size_t j = 0; j < v.size(); ++j) dot += std::conj(v[j]) * x[kk + 1 + j];
      dot *= 2.0;
      for (std::size_t j = 0; j < v.size(); ++j) x[kk + 1 + j] -= dot * v[j];
    }
    return x;
  }
};

}  // namespace

void apply_phase_convention(ComplexVector& v) {
  double peak = 0.0;
  for (const auto& z : v) peak = std::max(peak, std::abs(z));
  if (!(peak > 0.0)) return;
  // first entry within rounding of the peak, so near-ties resolve stably
  const double cutoff = peak * (1.0 - 1e-9);
  for (const auto& z : v) {
    const double mag = std::abs(z);
    if (mag >= cutoff) {
      v *= std::conj(z) / mag;
      break;
    }
  }
  for (auto& z : v) {
    if (std::abs(z) >= cutoff) {
      z = cplx(std::abs(z.real()), 0.0);
      break;
    }
  }
}

EigenPair principal_eigenvector(const HermitianMatrix& q, const EigenOptions& opts) {
  const std::size_t n = q.dim();
  if (n == 0) throw std::invalid_argument("principal_eigenvector: empty matrix");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("principal_eigenvector: tol must be > 0");
  if (opts.max_iter < 1) throw std::invalid_argument("principal_eigenvector: max_iter must be >= 1");

  const HouseholderReduction red(q);
  const Tridiagonal& t = red.real_form;
  const double scale = std::max(t.norm_bound(), q.gershgorin_bound());
  const double mu_top = t.kth_largest(1);

  // Residual reachable in floating point for a backward-stable reduction.
  const double floor = 64.0 * static_cast<double>(n) * kEps * scale;
  const double target = std::max(opts.tol * std::max(1.0, std::abs(mu_top)), floor);
  const double pert = kEps * std::max(scale, std::numeric_limits<double>::min());

  EigenPair out;
  if (n >= 2) {
    const double mu_next = t.kth_largest(2);
    out.degenerate = (mu_top - mu_next) <= 1e-10 * std::max(1.0, scale);
  }

  const ShiftedTridiagonalLU lu(t, mu_top, pert);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  std::vector<double> y(n);

  for (int attempt = 0; attempt < 2 && !out.converged; ++attempt) {
    for (auto& v : y) v = gauss(rng);
    normalize_in_place(y);
    for (int it = 0; it < opts.max_iter; ++it) {
      lu.solve(y);
      if (!(normalize_in_place(y) > 0.0) || !std::isfinite(y[0])) {
        for (auto& v : y) v = gauss(rng);
        normalize_in_place(y);
      }
      ++out.iterations;
      if (tridiagonal_residual(t, y, mu_top) <= 0.25 * target && it >= 1) break;
    }

    ComplexVector v = red.lift(y);
    v *= 1.0 / v.norm();
    apply_phase_convention(v);
    const ComplexVector qv = q.multiply(v);
    const double mu = inner_product(v, qv).real();
    ComplexVector r = qv;
    axpy(-mu, v, r);
    out.vector = std::move(v);
    out.value = mu;
    out.residual = r.norm();
    out.converged = out.residual <= std::max(opts.tol * std::max(1.0, std::abs(mu)), floor);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormalization

ComplexVector project_out(const ComplexVector& x, std::span<const ComplexVector> basis) {
  ComplexVector r(x);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) axpy(-inner_product(b, r), b, r);
  }
  return r;
}

std::vector<ComplexVector> orthonormal_basis(std::span<const ComplexVector> vectors,
                                             double rel_tol) {
  std::vector<ComplexVector> basis;
  for (const auto& u : vectors) {
    const double nu = u.norm();
    if (!(nu > 0.0)) continue;
    ComplexVector r = project_out(u, basis);
    const double nr = r.norm();
    if (nr < rel_tol * nu) continue;
    r *= 1.0 / nr;
    basis.push_back(std::move(r));
  }
  return basis;
}

}  // namespace coexist
