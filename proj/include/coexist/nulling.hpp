#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "coexist/channel.hpp"
#include "coexist/linalg.hpp"

namespace coexist {

/// Raised when a hard null cannot be formed: too many victims for the
/// array, or the desired channel lies in the victim span.
class InfeasibleNullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either a finite regularization weight lambda >= 0 or the hard-null
/// (lambda -> infinity) mode.
class NullingConfig {
 public:
  static NullingConfig regularized(double lambda, EigenOptions eigen = {});
  static NullingConfig hard_null(EigenOptions eigen = {});
  /// +infinity maps to hard_null, anything else to regularized.
  static NullingConfig from_lambda(double lambda, EigenOptions eigen = {});

  bool is_hard_null() const { return !lambda_.has_value(); }
  /// Regularization weight; +infinity in hard-null mode.
  double lambda() const;
  const EigenOptions& eigen() const { return eigen_; }

 private:
  NullingConfig(std::optional<double> lambda, EigenOptions eigen) : lambda_(lambda), eigen_(eigen) {}

  std::optional<double> lambda_;
  EigenOptions eigen_;
};

struct Beamformer {
  ComplexVector w;            // unit norm
  double attained_objective;  // |w^H h0~|^2 - lambda sum |w^H h_i|^2 (signal term for hard null)
  bool degenerate = false;    // top eigenvalue of Q not simple
};

/// Q = h0~ h0~^H - lambda sum_i h_i h_i^H with h0~ = h0 / ||h0||.
HermitianMatrix build_q(const ComplexVector& h0, std::span<const ComplexVector> victims, double lambda);

/// Maximizer of |w^H h0~|^2 - lambda sum_i |w^H h_i|^2 over unit vectors,
/// or the normalized projection of h0~ off span{h_i} in hard-null mode.
///
/// Finite lambda: Q only acts on span{h0~, h_1..h_K}, so when that span is
/// a proper subspace the eigenproblem is solved on an orthonormal basis of
/// it (exact Rayleigh-Ritz) and embedded back; otherwise Q is solved
/// directly. Both give the principal eigenvector of Q.
Beamformer solve_beamformer(const ComplexVector& h0, std::span<const ComplexVector> victims,
                            const NullingConfig& cfg);

/// E_D |w^H h0|^2 / N0 with the desired user's budget (linear).
double snr0(const Beamformer& bf, const ComplexVector& h0, const LinkBudget& budget);

/// E_D |w^H h_i|^2 / N0 with the victim's budget (linear). Evaluate against
/// the true channel, not the estimate the null was placed on.
double inr(const Beamformer& bf, const ComplexVector& h_victim, const LinkBudget& budget);

/// Victim directions closer than this (relative) to the span of the others
/// collapse into one null direction.
inline constexpr double kNullRankTolerance = 1e-10;

}  // namespace coexist
