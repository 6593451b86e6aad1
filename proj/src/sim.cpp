#include "coexist/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "coexist/airlink.hpp"
#include "coexist/nulling.hpp"
#include "coexist/random.hpp"

namespace coexist {

namespace {

// Stream tags for derive_seed.
enum : std::uint64_t {
  kSweepNoise = 0x53575045,
  kDesired = 0x44455349,
  kVictimChannel = 0x5643484e,
  kVictimNoise = 0x564e4f49,
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, count). Each index writes only its own output
// slot, so the result does not depend on scheduling. The exception of the
// lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr err;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (err) std::rethrow_exception(err);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples_db) : values_(std::move(samples_db)) {
  for (double v : values_) {
    if (std::isnan(v)) throw std::invalid_argument("EmpiricalCdf: NaN sample");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCdf::evaluate(double x) const {
  if (values_.empty()) throw std::logic_error("EmpiricalCdf: empty");
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (values_.empty()) throw std::logic_error("EmpiricalCdf: empty");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("EmpiricalCdf::quantile: p must be in (0,1]");
  const double n = static_cast<double>(values_.size());
  auto k = static_cast<std::size_t>(std::ceil(p * n));
  k = std::clamp<std::size_t>(k, 1, values_.size());
  return values_[k - 1];
}

double EmpiricalCdf::median() const {
  if (values_.empty()) throw std::logic_error("EmpiricalCdf: empty");
  const std::size_t n = values_.size();
  if (n % 2 == 1) return values_[n / 2];
  return 0.5 * (values_[n / 2 - 1] + values_[n / 2]);
}

double exceedance(const EmpiricalCdf& cdf, double threshold_db) { return 1.0 - cdf.evaluate(threshold_db); }

// ---------------------------------------------------------------------------

std::vector<double> SingleVictimSweepSpec::default_gamma_grid() {
  std::vector<double> g;
  for (int db = -20; db <= 60; db += 5) g.push_back(db);
  return g;
}

void SingleVictimSweepSpec::validate() const {
  require(!geoms.empty(), "single-victim sweep: geometry list is empty");
  require(!gamma_u_grid_db.empty(), "single-victim sweep: gamma_u grid is empty");
  require(trials_per_point >= 1, "single-victim sweep: trials_per_point must be >= 1");
  for (double g : gamma_u_grid_db) require(std::isfinite(g), "single-victim sweep: gamma_u grid must be finite");
  require(std::abs(desired_azimuth_rad) <= 3.141592653589793 && std::abs(victim_azimuth_rad) <= 3.141592653589793,
          "single-victim sweep: azimuths must lie in [-pi, pi]");
}

std::vector<SweepPoint> run_single_victim_sweep(const SingleVictimSweepSpec& spec) {
  spec.validate();
  const LinkBudget bs = spec.radio.budget(Receiver::base_station);
  const LinkBudget victim = spec.radio.budget(Receiver::victim);
  const std::size_t n_gamma = spec.gamma_u_grid_db.size();
  std::vector<SweepPoint> out(spec.geoms.size() * n_gamma);

  parallel_for(out.size(), spec.threads, [&](std::size_t idx) {
    const ArrayGeometry& geom = spec.geoms[idx / n_gamma];
    const std::size_t gi = idx % n_gamma;
    const double gamma_db = spec.gamma_u_grid_db[gi];
    const double gain = db_to_linear(gamma_db) * bs.noise_energy_j() / bs.energy_ul_j();
    const ComplexVector h0 = steering_vector(geom, spec.desired_azimuth_rad, 0.0);
    const ComplexVector h = std::sqrt(gain) * steering_vector(geom, spec.victim_azimuth_rad, 0.0);
    const auto cfg = NullingConfig::hard_null();

    double acc = 0.0;
    for (int t = 0; t < spec.trials_per_point; ++t) {
      std::vector<ComplexVector> nulled;
      if (spec.perfect_csi) {
        nulled.push_back(h);
      } else {
        Rng rng(derive_seed(spec.master_seed, {kSweepNoise, gi, static_cast<std::uint64_t>(t)}));
        nulled.push_back(estimate_channel(observe_preamble(h, bs, true, rng), bs).h_hat);
      }
      acc += inr(solve_beamformer(h0, nulled, cfg), h, victim);
    }
    const double mean = acc / spec.trials_per_point;
    out[idx] = {geom.n_tx(), gamma_db, mean, to_db_floored(mean, spec.db_floor)};
  });
  return out;
}

// ---------------------------------------------------------------------------

void MultiVictimScenarioSpec::validate() const {
  require(n_victims >= 0, "multi-victim: n_victims must be >= 0");
  require(trials >= 1, "multi-victim: trials must be >= 1");
  require(paths >= 1 && paths <= kMaxPaths, "multi-victim: paths must be in [1, " + std::to_string(kMaxPaths) + "]");
  require(victim_gain_db_min <= victim_gain_db_max && std::isfinite(victim_gain_db_min) &&
              std::isfinite(victim_gain_db_max),
          "multi-victim: victim gain range must be finite with min <= max");
  require(desired_gain_db_min <= desired_gain_db_max && std::isfinite(desired_gain_db_min) &&
              std::isfinite(desired_gain_db_max),
          "multi-victim: desired gain range must be finite with min <= max");
  require(!lambda_grid.empty(), "multi-victim: lambda grid is empty");
  for (double l : lambda_grid) {
    require(l >= 0.0 && (std::isfinite(l) || l == std::numeric_limits<double>::infinity()),
            "multi-victim: lambda values must be >= 0 (inf for hard null)");
  }
  require(p_fa > 0.0 && p_fa < 1.0, "multi-victim: p_fa must be in (0,1)");
  multipath.validate();
}

namespace {

double uniform_db(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MultiVictimTrial run_trial(const MultiVictimScenarioSpec& spec, std::size_t trial, const DetectionConfig& det,
                           const std::vector<NullingConfig>& configs) {
  const LinkBudget bs = spec.radio.budget(Receiver::base_station);
  const LinkBudget victim = spec.radio.budget(Receiver::victim);
  const LinkBudget ue = spec.radio.budget(Receiver::desired_user);
  const auto nv = static_cast<std::size_t>(spec.n_victims);

  MultiVictimTrial out;
  out.trial = trial;

  Rng desired_rng(derive_seed(spec.master_seed, {kDesired, trial}));
  const double desired_db = uniform_db(desired_rng, spec.desired_gain_db_min, spec.desired_gain_db_max);
  const ComplexVector h0 = sample_multipath(spec.geom, desired_db, spec.paths, desired_rng, spec.multipath);
  out.snr0_matched_filter = ue.energy_dl_j() * h0.squared_norm() / ue.noise_energy_j();

  std::vector<ComplexVector> truth;
  std::vector<ComplexVector> nulled;
  truth.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    Rng chan_rng(derive_seed(spec.master_seed, {kVictimChannel, trial, k}));
    const double g_db = uniform_db(chan_rng, spec.victim_gain_db_min, spec.victim_gain_db_max);
    truth.push_back(sample_multipath(spec.geom, g_db, spec.paths, chan_rng, spec.multipath));
    out.victim_gain_db.push_back(g_db);

    Rng noise_rng(derive_seed(spec.master_seed, {kVictimNoise, trial, k}));
    const auto obs = observe_preamble(truth.back(), bs, true, noise_rng);
    const bool hit = !spec.detection_enabled || detect(obs, det, bs.noise_energy_j());
    out.detected.push_back(hit);
    if (!hit) continue;
    nulled.push_back(spec.use_estimates ? estimate_channel(obs, bs).h_hat : truth.back());
  }

  for (const auto& cfg : configs) {
    Beamformer bf;
    try {
      bf = solve_beamformer(h0, nulled, cfg);
    } catch (const InfeasibleNullError& e) {
      out.skipped = true;
      out.skip_reason = e.what();
      out.snr0.clear();
      out.inr.clear();
      return out;
    }
    out.snr0.push_back(snr0(bf, h0, ue));
    std::vector<double> row;
    row.reserve(nv);
    for (const auto& h : truth) row.push_back(inr(bf, h, victim));
    out.inr.push_back(std::move(row));
  }
  return out;
}

std::vector<NullingConfig> nulling_configs(const std::vector<double>& grid) {
  std::vector<NullingConfig> out;
  for (double l : grid) out.push_back(NullingConfig::from_lambda(l));
  return out;
}

}  // namespace

MultiVictimResult run_multi_victim(const MultiVictimScenarioSpec& spec) {
  spec.validate();
  const auto det = DetectionConfig::calibrate(spec.p_fa, spec.geom.n_tx());
  const auto configs = nulling_configs(spec.lambda_grid);

  MultiVictimResult res;
  res.lambdas = spec.lambda_grid;
  res.threshold_t = det.threshold_t();
  res.trials.resize(static_cast<std::size_t>(spec.trials));
  parallel_for(res.trials.size(), spec.threads,
               [&](std::size_t t) { res.trials[t] = run_trial(spec, t, det, configs); });

  const std::size_t nl = spec.lambda_grid.size();
  std::vector<std::vector<double>> inr_db(nl), snr_db(nl);
  for (const auto& tr : res.trials) {
    if (tr.skipped) {
      ++res.skipped_trials;
      continue;
    }
    ++res.completed_trials;
    res.victims_scored += tr.detected.size();
    res.victims_detected += static_cast<std::size_t>(std::count(tr.detected.begin(), tr.detected.end(), true));
    for (std::size_t l = 0; l < nl; ++l) {
      snr_db[l].push_back(to_db_floored(tr.snr0[l], spec.db_floor));
      for (double v : tr.inr[l]) inr_db[l].push_back(to_db_floored(v, spec.db_floor));
    }
  }
  for (std::size_t l = 0; l < nl; ++l) {
    res.per_lambda.push_back({spec.lambda_grid[l], EmpiricalCdf(std::move(inr_db[l])), EmpiricalCdf(std::move(snr_db[l]))});
  }
  return res;
}

std::vector<AntennaStudyEntry> antenna_scaling_study(const MultiVictimScenarioSpec& spec,
                                                     const std::vector<ArrayGeometry>& geoms) {
  if (geoms.empty()) throw std::invalid_argument("antenna study: geometry list is empty");
  std::vector<AntennaStudyEntry> out;
  for (const auto& g : geoms) {
    MultiVictimScenarioSpec s = spec;
    s.geom = g;
    AntennaStudyEntry entry{g, run_multi_victim(s), {}, {}};
    const auto& r = entry.result;
    for (std::size_t l = 0; l < r.lambdas.size(); ++l) {
      std::vector<double> loss;
      for (const auto& tr : r.trials) {
        if (tr.skipped) continue;
        loss.push_back(to_db_floored(tr.snr0_matched_filter, s.db_floor) - to_db_floored(tr.snr0[l], s.db_floor));
      }
      const auto& inr_cdf = r.per_lambda[l].inr_db;
      entry.median_inr_db.push_back(inr_cdf.empty() ? std::numeric_limits<double>::quiet_NaN() : inr_cdf.median());
      entry.median_snr0_loss_db.push_back(loss.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                       : EmpiricalCdf(std::move(loss)).median());
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace coexist
