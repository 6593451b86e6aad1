#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coexist/linalg.hpp"
#include "coexist/random.hpp"

namespace coexist {

/// Uniform rectangular array: `rows` vertical by `cols` horizontal
/// isotropic elements, spacing in wavelengths. Element (row r, column c) is
/// stored at index r * cols + c.
class ArrayGeometry {
 public:
  ArrayGeometry(std::size_t rows, std::size_t cols, double element_spacing = 0.5);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double element_spacing() const { return spacing_; }
  std::size_t n_tx() const { return rows_ * cols_; }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  double spacing_;
};

/// Energies of one link, all in SI units. The noise figure is the one of
/// the receiver this budget describes, so a scenario keeps one budget per
/// receiving side.
class LinkBudget {
 public:
  struct Params {
    double carrier_hz;
    double bandwidth_hz;
    double tx_power_w;          // downlink
    double victim_tx_power_w;   // uplink preamble
    double preamble_duration_s;
    double noise_psd_w_per_hz;
    double noise_figure_linear;
  };

  /// Throws std::invalid_argument naming the first non-positive field.
  explicit LinkBudget(const Params& p);

  const Params& params() const { return p_; }

  /// Energy per downlink symbol, P / B.
  double energy_dl_j() const { return energy_dl_; }
  /// Total preamble energy, P_victim * T_pre.
  double energy_ul_j() const { return energy_ul_; }
  /// Noise energy per sample, PSD * NF.
  double noise_energy_j() const { return noise_energy_; }

 private:
  Params p_;
  double energy_dl_;
  double energy_ul_;
  double noise_energy_;
};

enum class Receiver { base_station, victim, desired_user };

/// Radio parameters shared by a scenario, with a separate noise figure per
/// receiving side.
struct RadioParams {
  double carrier_hz = 10e9;
  double bandwidth_hz = 100e6;
  double tx_power_w = 1.0;
  double victim_tx_power_w = 1.0;
  double preamble_duration_s = 20e-6;
  double noise_psd_w_per_hz = 3.981071705534972e-21;  // -174 dBm/Hz
  double nf_base_station_linear = 1.9952623149688795;  // 3 dB
  double nf_victim_linear = 1.5848931924611136;        // 2 dB
  double nf_desired_user_linear = 5.011872336272722;   // 7 dB

  LinkBudget budget(Receiver side) const;
};

struct PathSpec {
  double azimuth_rad = 0.0;
  double elevation_rad = 0.0;
  cplx gain{1.0, 0.0};
};

/// Distribution of the synthetic multipath generator.
struct MultipathModel {
  double azimuth_min_rad = -1.0471975511965976;   // -60 deg
  double azimuth_max_rad = 1.0471975511965976;    // +60 deg
  double elevation_min_rad = -0.5235987755982988; // -30 deg
  double elevation_max_rad = 0.0;
  double dominant_fraction_min = 0.7;

  void validate() const;
};

inline constexpr int kMaxPaths = 3;

/// Per-entry phase 2 pi d (c sin(az) cos(el) + r sin(el)); every entry has
/// unit magnitude.
ComplexVector steering_vector(const ArrayGeometry& geom, double azimuth_rad, double elevation_rad);

/// Sum of per-path steering vectors weighted by the complex path gains.
ComplexVector synth_channel(const ArrayGeometry& geom, std::span<const PathSpec> paths);

/// Random narrowband channel with `n_paths` paths whose expected average
/// per-antenna gain is 10^(gain_db/10). The first path carries a fraction
/// f ~ U[dominant_fraction_min, 1] of the power, the rest is split evenly.
/// Path phases are uniform; angles uniform over the model's ranges.
ComplexVector sample_multipath(const ArrayGeometry& geom, double gain_db, int n_paths, Rng& rng,
                               const MultipathModel& model = {});

/// Path draw used by sample_multipath, exposed for tests.
std::vector<PathSpec> sample_paths(double gain_db, int n_paths, Rng& rng,
                                   const MultipathModel& model = {});

/// ||h||^2 / N_tx
double average_gain(const ComplexVector& h);

/// gamma_U = E_U * G / N0 (linear)
double uplink_snr_per_antenna(const LinkBudget& budget, double gain);

/// 10 log10(E_D / E_U)
double energy_ratio_db(const LinkBudget& budget);

struct ChannelSet {
  ComplexVector desired;
  std::vector<ComplexVector> victims;

  std::vector<double> victim_gains() const;
};

}  // namespace coexist
