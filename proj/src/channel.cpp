#include "coexist/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "coexist/units.hpp"

namespace coexist {

ArrayGeometry::ArrayGeometry(std::size_t rows, std::size_t cols, double element_spacing)
    : rows_(rows), cols_(cols), spacing_(element_spacing) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ArrayGeometry: rows and cols must be >= 1");
  if (!(element_spacing > 0.0)) throw std::invalid_argument("ArrayGeometry: element_spacing must be > 0");
}

LinkBudget::LinkBudget(const Params& p) : p_(p) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("LinkBudget: ") + name + " must be finite and > 0");
    }
  };
  positive(p.carrier_hz, "carrier_hz");
  positive(p.bandwidth_hz, "bandwidth_hz");
  positive(p.tx_power_w, "tx_power_w");
  positive(p.victim_tx_power_w, "victim_tx_power_w");
  positive(p.preamble_duration_s, "preamble_duration_s");
  positive(p.noise_psd_w_per_hz, "noise_psd_w_per_hz");
  positive(p.noise_figure_linear, "noise_figure_linear");
  energy_dl_ = p.tx_power_w / p.bandwidth_hz;
  energy_ul_ = p.victim_tx_power_w * p.preamble_duration_s;
  noise_energy_ = p.noise_psd_w_per_hz * p.noise_figure_linear;
}

LinkBudget RadioParams::budget(Receiver side) const {
  double nf = nf_base_station_linear;
  switch (side) {
    case Receiver::base_station: nf = nf_base_station_linear; break;
    case Receiver::victim: nf = nf_victim_linear; break;
    case Receiver::desired_user: nf = nf_desired_user_linear; break;
  }
  return LinkBudget({carrier_hz, bandwidth_hz, tx_power_w, victim_tx_power_w,
                     preamble_duration_s, noise_psd_w_per_hz, nf});
}

void MultipathModel::validate() const {
  const double pi = std::numbers::pi;
  if (!(azimuth_min_rad >= -pi && azimuth_max_rad <= pi && azimuth_min_rad < azimuth_max_rad)) {
    throw std::invalid_argument("MultipathModel: azimuth range must be an interval within [-pi, pi]");
  }
  if (!(elevation_min_rad >= -pi / 2 && elevation_max_rad <= pi / 2 &&
        elevation_min_rad <= elevation_max_rad)) {
    throw std::invalid_argument("MultipathModel: elevation range must lie within [-pi/2, pi/2]");
  }
  if (!(dominant_fraction_min > 0.0 && dominant_fraction_min <= 1.0)) {
    throw std::invalid_argument("MultipathModel: dominant_fraction_min must be in (0, 1]");
  }
}

ComplexVector steering_vector(const ArrayGeometry& geom, double azimuth_rad, double elevation_rad) {
  const double pi = std::numbers::pi;
  if (!(std::abs(azimuth_rad) <= pi) || !(std::abs(elevation_rad) <= pi / 2)) {
    throw std::invalid_argument("steering_vector: angle out of range");
  }
  const double k = 2.0 * pi * geom.element_spacing();
  const double u = std::sin(azimuth_rad) * std::cos(elevation_rad);
  const double v = std::sin(elevation_rad);
  ComplexVector a(geom.n_tx());
  for (std::size_t r = 0; r < geom.rows(); ++r) {
    for (std::size_t c = 0; c < geom.cols(); ++c) {
      const double phase = k * (static_cast<double>(c) * u + static_cast<double>(r) * v);
      a[r * geom.cols() + c] = (phase == 0.0) ? cplx(1.0, 0.0) : std::polar(1.0, phase);
    }
  }
  return a;
}

ComplexVector synth_channel(const ArrayGeometry& geom, std::span<const PathSpec> paths) {
  if (paths.empty()) throw std::invalid_argument("synth_channel: empty path list");
  ComplexVector h(geom.n_tx());
  for (const auto& p : paths) axpy(p.gain, steering_vector(geom, p.azimuth_rad, p.elevation_rad), h);
  return h;
}

std::vector<PathSpec> sample_paths(double gain_db, int n_paths, Rng& rng, const MultipathModel& model) {
  if (n_paths < 1 || n_paths > kMaxPaths) {
    throw std::invalid_argument("sample_multipath: n_paths must be in [1, " +
                                std::to_string(kMaxPaths) + "]");
  }
  model.validate();
  const double power = db_to_linear(gain_db);
  std::uniform_real_distribution<double> az(model.azimuth_min_rad, model.azimuth_max_rad);
  std::uniform_real_distribution<double> el(model.elevation_min_rad, model.elevation_max_rad);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> frac(model.dominant_fraction_min, 1.0);

  // fixed draw order so the stream layout does not depend on the array
  const double f = n_paths == 1 ? 1.0 : frac(rng);
  std::vector<PathSpec> paths(static_cast<std::size_t>(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    const double share = p == 0 ? f : (1.0 - f) / static_cast<double>(n_paths - 1);
    auto& spec = paths[static_cast<std::size_t>(p)];
    spec.azimuth_rad = az(rng);
    spec.elevation_rad = el(rng);
    spec.gain = std::polar(std::sqrt(power * share), phase(rng));
  }
  return paths;
}

ComplexVector sample_multipath(const ArrayGeometry& geom, double gain_db, int n_paths, Rng& rng,
                               const MultipathModel& model) {
  const auto paths = sample_paths(gain_db, n_paths, rng, model);
  return synth_channel(geom, paths);
}

double average_gain(const ComplexVector& h) {
  if (h.empty()) throw std::invalid_argument("average_gain: empty channel");
  return h.squared_norm() / static_cast<double>(h.dim());
}

double uplink_snr_per_antenna(const LinkBudget& budget, double gain) {
  if (!(gain >= 0.0)) throw std::invalid_argument("uplink_snr_per_antenna: gain must be >= 0");
  return budget.energy_ul_j() * gain / budget.noise_energy_j();
}

double energy_ratio_db(const LinkBudget& budget) {
  return linear_to_db(budget.energy_dl_j() / budget.energy_ul_j());
}

std::vector<double> ChannelSet::victim_gains() const {
  std::vector<double> g;
  g.reserve(victims.size());
  for (const auto& h : victims) g.push_back(average_gain(h));
  return g;
}

}  // namespace coexist
