#pragma once

#include <cstddef>

#include "coexist/channel.hpp"
#include "coexist/linalg.hpp"
#include "coexist/random.hpp"

namespace coexist {

/// Matched-filter output r = h a + w on one preamble/delay hypothesis.
struct PreambleObservation {
  ComplexVector r;
  cplx symbol;             // a, |a|^2 = E_U
  bool hypothesis_true;    // ground truth: a victim transmitted on this slot
};

/// Draws r = h a + w (present) or r = w (absent) with w ~ CN(0, N0 I) and
/// a = sqrt(E_U). The noise is drawn in both cases so that paired calls see
/// the same noise stream.
PreambleObservation observe_preamble(const ComplexVector& h, const LinkBudget& budget, bool present,
                                     Rng& rng);

/// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
/// log Q(a, x), accurate deep in the upper tail.
double log_regularized_gamma_q(double a, double x);

/// Threshold t with P(||r||^2 >= t N0 | noise only) = p_fa. ||r||^2 / N0 is
/// Gamma(n_tx, 1) (a chi-square with 2 n_tx degrees of freedom, halved), so
/// t solves Q(n_tx, t) = p_fa. Throws std::invalid_argument outside
/// 0 < p_fa < 1 or for n_tx == 0.
double chi2_tail_threshold(double p_fa, std::size_t n_tx);

class DetectionConfig {
 public:
  static DetectionConfig calibrate(double p_fa, std::size_t n_tx);

  double p_fa() const { return p_fa_; }
  std::size_t n_tx() const { return n_tx_; }
  double threshold_t() const { return threshold_; }

 private:
  DetectionConfig(double p_fa, std::size_t n_tx, double t) : p_fa_(p_fa), n_tx_(n_tx), threshold_(t) {}

  double p_fa_;
  std::size_t n_tx_;
  double threshold_;
};

/// Energy detector: ||r||^2 >= t N0 (boundary counts as a detection).
bool detect(const PreambleObservation& obs, const DetectionConfig& cfg, double noise_energy);

struct ChannelEstimate {
  ComplexVector h_hat;
  double error_var_per_component;  // N0 / E_U
};

/// h_hat = conj(a) / |a|^2 * r, error variance N0 / E_U from `budget`.
/// Throws std::invalid_argument for a == 0.
ChannelEstimate estimate_channel(const PreambleObservation& obs, const LinkBudget& budget);

}  // namespace coexist
