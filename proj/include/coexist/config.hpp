#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/sim.hpp"

namespace coexist {

enum class Scenario { single_victim_sweep, multi_victim, threshold_calc, antenna_study };

/// "single-victim-sweep", "multi-victim", "threshold-calc", "antenna-study"
std::string_view scenario_name(Scenario s);
/// Throws ConfigError for an unknown name.
Scenario parse_scenario(std::string_view name);

/// Parse or validation failure. The message names the line (for syntax
/// errors) or the key and the violated constraint.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArrayShape {
  std::size_t rows;
  std::size_t cols;
  friend bool operator==(const ArrayShape&, const ArrayShape&) = default;
};

/// Every knob of a run in engineering units. Defaults are the reference
/// radio parameters (10 GHz, 100 MHz, -174 dBm/Hz, 30 dBm, NF 3/2/7 dB,
/// 20 us preamble, p_fa 1e-8, 4x16 array).
struct RunConfig {
  Scenario scenario = Scenario::multi_victim;

  // radio
  double carrier_ghz = 10.0;
  double bandwidth_mhz = 100.0;
  double noise_psd_dbm_per_hz = -174.0;
  double tx_power_dbm = 30.0;
  double victim_tx_power_dbm = 30.0;
  double nf_bs_db = 3.0;
  double nf_victim_db = 2.0;
  double nf_ue_db = 7.0;
  double preamble_duration_us = 20.0;
  double p_fa = 1e-8;

  // array
  std::size_t array_rows = 4;
  std::size_t array_cols = 16;
  double element_spacing = 0.5;

  // run control
  std::uint64_t seed = 1;
  int trials = 100;
  int threads = 1;
  double db_floor = kDefaultDbFloor;

  // single-victim sweep
  std::vector<ArrayShape> sweep_arrays{{4, 4}, {4, 16}, {4, 64}};
  double desired_azimuth_deg = 0.0;
  double victim_azimuth_deg = 15.0;
  double gamma_u_min_db = -20.0;
  double gamma_u_max_db = 60.0;
  double gamma_u_step_db = 5.0;
  bool perfect_csi = false;

  // multi-victim and antenna study
  int n_victims = 10;
  double victim_gain_min_db = -160.0;
  double victim_gain_max_db = -100.0;
  double desired_gain_min_db = -125.0;
  double desired_gain_max_db = -105.0;
  int paths = 3;
  std::vector<double> lambdas{0.0, 1e11, 1e12};
  bool use_estimates = true;
  bool detection = true;
  double azimuth_min_deg = -60.0;
  double azimuth_max_deg = 60.0;
  double elevation_min_deg = -30.0;
  double elevation_max_deg = 0.0;
  double dominant_fraction_min = 0.7;
  std::vector<ArrayShape> study_arrays{{4, 16}, {4, 32}, {4, 64}, {4, 128}};

  // threshold-calc; 0 means array_rows * array_cols
  std::size_t n_tx = 0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  // SI views, valid after validate()
  RadioParams radio() const;
  ArrayGeometry array() const;
  std::size_t threshold_n_tx() const;
  SingleVictimSweepSpec sweep_spec() const;
  MultiVictimScenarioSpec multi_victim_spec() const;
  std::vector<ArrayGeometry> study_geometries() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Line-oriented `key = value` document; `#` starts a comment; blank lines
/// are ignored. Lists are comma separated, arrays are written `RxC`, lambda
/// lists accept `inf` for the hard null, booleans are `true`/`false`.
/// Unknown and repeated keys are errors. Missing keys keep their defaults.
/// The result is validated.
RunConfig parse_config(std::string_view text);

/// Every key with its current value; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Shortest decimal that reads back to the same double; `inf`, `-inf` and
/// `nan` for non-finite values.
std::string format_double(double v);

/// Lambda token used in file names and CSV cells: shortest decimal without
/// `+` in the exponent (0, 1e11, 2.5e-3), `inf` for the hard null.
std::string lambda_token(double lambda);

}  // namespace coexist
