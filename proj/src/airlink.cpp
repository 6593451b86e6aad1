#include "coexist/airlink.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coexist {

PreambleObservation observe_preamble(const ComplexVector& h, const LinkBudget& budget, bool present,
                                     Rng& rng) {
  const double n0 = budget.noise_energy_j();
  const cplx a(std::sqrt(budget.energy_ul_j()), 0.0);
  PreambleObservation obs{ComplexVector(h.dim()), a, present};
  for (std::size_t k = 0; k < h.dim(); ++k) {
    const cplx w = complex_gaussian(rng, n0);
    obs.r[k] = present ? h[k] * a + w : w;
  }
  return obs;
}

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("incomplete gamma: requires a > 0 and x >= 0");
  }
}

// log of x^a e^-x / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double series_p(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Continued fraction for Q(a, x) without the prefactor (modified Lentz).
double continued_fraction_q(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return series_p(a, x);
  return 1.0 - std::exp(log_prefactor(a, x)) * continued_fraction_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - series_p(a, x);
  return std::exp(log_prefactor(a, x)) * continued_fraction_q(a, x);
}

double log_regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::log1p(-series_p(a, x));
  return log_prefactor(a, x) + std::log(continued_fraction_q(a, x));
}

double chi2_tail_threshold(double p_fa, std::size_t n_tx) {
  if (!(p_fa > 0.0 && p_fa < 1.0)) {
    throw std::invalid_argument("chi2_tail_threshold: p_fa must be in (0,1), got " + std::to_string(p_fa));
  }
  if (n_tx == 0) throw std::invalid_argument("chi2_tail_threshold: n_tx must be >= 1");
  const double a = static_cast<double>(n_tx);
  const double target = std::log(p_fa);
  // log Q(a, t) decreases strictly from 0 at t = 0
  double lo = 0.0;
  double hi = std::max(1.0, a);
  while (log_regularized_gamma_q(a, hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (log_regularized_gamma_q(a, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

DetectionConfig DetectionConfig::calibrate(double p_fa, std::size_t n_tx) {
  return DetectionConfig(p_fa, n_tx, chi2_tail_threshold(p_fa, n_tx));
}

bool detect(const PreambleObservation& obs, const DetectionConfig& cfg, double noise_energy) {
  if (obs.r.dim() != cfg.n_tx()) {
    throw std::invalid_argument("detect: threshold calibrated for n_tx=" + std::to_string(cfg.n_tx()) +
                                " but observation has dim " + std::to_string(obs.r.dim()));
  }
  return obs.r.squared_norm() >= cfg.threshold_t() * noise_energy;
}

ChannelEstimate estimate_channel(const PreambleObservation& obs, const LinkBudget& budget) {
  const double energy = std::norm(obs.symbol);
  if (!(energy > 0.0)) throw std::invalid_argument("estimate_channel: zero preamble symbol");
  ChannelEstimate est{obs.r, budget.noise_energy_j() / budget.energy_ul_j()};
  est.h_hat *= std::conj(obs.symbol) / energy;
  return est;
}

}  // namespace coexist
