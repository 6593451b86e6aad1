#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace coexist {

using cplx = std::complex<double>;

/// Dense complex column vector. Holds channels, beamformers, matched-filter
/// outputs and steering vectors.
class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim, cplx fill = {0.0, 0.0});
  ComplexVector(std::initializer_list<cplx> entries);
  explicit ComplexVector(std::vector<cplx> entries);

  std::size_t dim() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  cplx& operator[](std::size_t k) { return entries_[k]; }
  const cplx& operator[](std::size_t k) const { return entries_[k]; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::span<const cplx> view() const { return entries_; }
  std::span<cplx> view() { return entries_; }

  double squared_norm() const;
  double norm() const;

  /// Unit-norm copy. Throws std::domain_error for the zero vector.
  ComplexVector normalized() const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(cplx scale);

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<cplx> entries_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(cplx scale, ComplexVector v);

/// Returns sum_k conj(a_k) * b_k. The first argument is conjugated, so
/// inner_product(w, h) is the beamformer response w^H h.
cplx inner_product(const ComplexVector& a, const ComplexVector& b);

/// a += scale * x
void axpy(cplx scale, const ComplexVector& x, ComplexVector& a);

/// Dense Hermitian matrix, row-major. Hermitian symmetry is checked when
/// built from arbitrary entries and preserved by every mutating operation.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix identity(std::size_t dim);

  /// Throws std::invalid_argument when entries.size() != dim*dim or when
  /// entry(j,k) differs from conj(entry(k,j)) beyond rounding level. The stored
  /// matrix is the exact Hermitian part of the input.
  static HermitianMatrix from_entries(std::size_t dim, std::vector<cplx> entries);

  std::size_t dim() const { return dim_; }
  cplx operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::span<const cplx> entries() const { return entries_; }

  /// this += weight * v v^H
  void add_outer(const ComplexVector& v, double weight);
  /// this += shift * I
  void add_identity(double shift);

  ComplexVector multiply(const ComplexVector& x) const;

  /// Real part of x^H Q x.
  double quadratic_form(const ComplexVector& x) const;

  /// Max absolute row sum; bounds every eigenvalue magnitude.
  double gershgorin_bound() const;

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  explicit HermitianMatrix(std::size_t dim);

  std::size_t dim_ = 0;
  std::vector<cplx> entries_;
};

/// Returns acc + weight * v v^H.
HermitianMatrix outer_accumulate(const HermitianMatrix& acc, const ComplexVector& v,
                                 double weight);

struct EigenOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct EigenPair {
  ComplexVector vector;  // unit norm, largest-magnitude entry real and >= 0
  double value = 0.0;    // algebraically largest eigenvalue
  double residual = 0.0; // ||Q v - value v||
  int iterations = 0;
  bool converged = false;
  // Top eigenvalue (numerically) repeated: any vector of the eigenspace is
  // an equally valid answer, the returned one depends on the start vector.
  bool degenerate = false;
};

/// Principal eigenpair of a Hermitian matrix: the eigenvector of the
/// algebraically largest eigenvalue.
///
/// The matrix is reduced to real tridiagonal form with Householder
/// reflections, the top eigenvalue is isolated by Sturm-count bisection
/// and the eigenvector is obtained by shift-and-invert power iteration at
/// that eigenvalue, then mapped back. Large negative eigenvalues never
/// attract the iteration, which is what separates this from plain power
/// iteration on an indefinite matrix.
///
/// Throws std::invalid_argument for dim 0, tol <= 0 or max_iter < 1.
EigenPair principal_eigenvector(const HermitianMatrix& q, const EigenOptions& opts = {});

/// Rotates v by a unit phase so that its largest-magnitude entry (first one
/// on ties) is real and nonnegative.
void apply_phase_convention(ComplexVector& v);

/// Orthonormal basis of span(vectors) by twice-iterated modified Gram-Schmidt.
/// A vector is dropped when its residual after projection falls below
/// rel_tol times its own norm. Zero vectors are always dropped.
std::vector<ComplexVector> orthonormal_basis(std::span<const ComplexVector> vectors,
                                             double rel_tol);

/// x - B B^H x for an orthonormal set B, applied twice.
ComplexVector project_out(const ComplexVector& x, std::span<const ComplexVector> basis);

}  // namespace coexist
