#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/units.hpp"

namespace coexist {

/// Sorted sample set in dB. evaluate() is the right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples_db);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }

  /// Fraction of samples <= x. Throws std::logic_error when empty.
  double evaluate(double x) const;
  /// Smallest sample x with evaluate(x) >= p, p in (0, 1].
  double quantile(double p) const;
  /// Midpoint of the two central samples for an even count.
  double median() const;

 private:
  std::vector<double> values_;
};

/// 1 - cdf.evaluate(threshold_db). Throws std::logic_error for an empty cdf.
double exceedance(const EmpiricalCdf& cdf, double threshold_db);

// ---------------------------------------------------------------------------
// Single victim sweep

struct SingleVictimSweepSpec {
  std::vector<ArrayGeometry> geoms{ArrayGeometry(4, 4), ArrayGeometry(4, 16), ArrayGeometry(4, 64)};
  double desired_azimuth_rad = 0.0;
  double victim_azimuth_rad = 0.2617993877991494;  // 15 deg
  std::vector<double> gamma_u_grid_db = default_gamma_grid();
  RadioParams radio;
  /// Null on the true channel instead of the preamble estimate (the
  /// E_U -> infinity limit).
  bool perfect_csi = false;
  int trials_per_point = 100;
  std::uint64_t master_seed = 1;
  int threads = 1;
  double db_floor = kDefaultDbFloor;

  void validate() const;
  static std::vector<double> default_gamma_grid();  // -20..60 dB, 5 dB steps
};

struct SweepPoint {
  std::size_t n_tx;
  double gamma_u_db;
  double mean_inr_linear;
  double mean_inr_db;  // floored
};

/// Hard null on a one-shot preamble estimate of a single line-of-sight
/// victim whose gain is set from gamma_u by G = gamma_u N0 / E_U. The INR is
/// averaged in the linear domain, then converted. Rows ordered by geometry,
/// then grid point.
std::vector<SweepPoint> run_single_victim_sweep(const SingleVictimSweepSpec& spec);

// ---------------------------------------------------------------------------
// Multi victim Monte Carlo

struct MultiVictimScenarioSpec {
  ArrayGeometry geom{4, 16};
  int n_victims = 10;
  // per-victim average gain drawn uniformly in dB
  double victim_gain_db_min = -160.0;
  double victim_gain_db_max = -100.0;
  double desired_gain_db_min = -125.0;
  double desired_gain_db_max = -105.0;
  int paths = 3;
  MultipathModel multipath;
  /// +infinity selects the hard null.
  std::vector<double> lambda_grid{0.0, 1e11, 1e12};
  bool use_estimates = true;
  bool detection_enabled = true;
  double p_fa = 1e-8;
  RadioParams radio;
  int trials = 100;
  std::uint64_t master_seed = 1;
  int threads = 1;
  double db_floor = kDefaultDbFloor;

  void validate() const;
};

struct MultiVictimTrial {
  std::size_t trial = 0;
  bool skipped = false;       // some lambda in the grid asked for an infeasible null
  std::string skip_reason;
  double snr0_matched_filter = 0.0;          // E_D ||h0||^2 / N0, linear
  std::vector<double> victim_gain_db;        // drawn average gains
  std::vector<bool> detected;                // per victim
  std::vector<double> snr0;                  // per lambda, linear
  std::vector<std::vector<double>> inr;      // [lambda][victim], linear
};

struct LambdaDistributions {
  double lambda;
  EmpiricalCdf inr_db;   // every victim of every completed trial
  EmpiricalCdf snr0_db;  // one sample per completed trial
};

struct MultiVictimResult {
  std::vector<double> lambdas;
  std::vector<MultiVictimTrial> trials;  // by trial index, skipped ones included
  std::vector<LambdaDistributions> per_lambda;
  std::size_t completed_trials = 0;
  std::size_t skipped_trials = 0;
  std::size_t victims_scored = 0;
  std::size_t victims_detected = 0;
  double threshold_t = 0.0;
};

/// Per trial: draw the desired and victim channels, send every victim's
/// preamble through detection and estimation, null the detected victims
/// for each lambda and score SNR0 and every victim's INR against the true
/// channels. Trials are seeded independently from (master_seed, trial) and
/// each victim's channel and preamble noise from (master_seed, trial,
/// victim), so runs that differ only in lambda, array size or CSI mode see
/// the same draws.
MultiVictimResult run_multi_victim(const MultiVictimScenarioSpec& spec);

struct AntennaStudyEntry {
  ArrayGeometry geom;
  MultiVictimResult result;
  std::vector<double> median_inr_db;        // per lambda
  std::vector<double> median_snr0_loss_db;  // per lambda, per-trial matched filter minus achieved
};

/// run_multi_victim for each geometry with the spec's seed.
std::vector<AntennaStudyEntry> antenna_scaling_study(const MultiVictimScenarioSpec& spec,
                                                     const std::vector<ArrayGeometry>& geoms);

}  // namespace coexist
