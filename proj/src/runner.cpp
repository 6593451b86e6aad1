#include "coexist/runner.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coexist/airlink.hpp"
#include "coexist/sim.hpp"
#include "coexist/units.hpp"

namespace coexist {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw std::runtime_error("cannot create output directory " + dir_.string() +
                               (ec ? ": " + ec.message() : std::string()));
    }
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + p.string());
    files_.push_back(p);
  }

  std::vector<fs::path> files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

std::string db(double linear, double floor_db) { return format_double(to_db_floored(linear, floor_db)); }

struct Summary {
  std::ostringstream body;

  template <class T>
  void put(std::string_view key, const T& value) {
    body << key << " = " << value << '\n';
  }
  void put(std::string_view key, double value) { body << key << " = " << format_double(value) << '\n'; }
  void section(std::string_view name) { body << '\n' << '[' << name << "]\n"; }
};

void radio_section(Summary& s, const RunConfig& cfg) {
  const RadioParams radio = cfg.radio();
  const LinkBudget bs = radio.budget(Receiver::base_station);
  s.section("derived");
  s.put("energy_dl_j", bs.energy_dl_j());
  s.put("energy_ul_j", bs.energy_ul_j());
  s.put("energy_ratio_db", energy_ratio_db(bs));
  s.put("noise_energy_bs_j", bs.noise_energy_j());
  s.put("noise_energy_victim_j", radio.budget(Receiver::victim).noise_energy_j());
  s.put("noise_energy_ue_j", radio.budget(Receiver::desired_user).noise_energy_j());
  s.put("estimation_error_var", bs.noise_energy_j() / bs.energy_ul_j());
}

void run_sweep(const RunConfig& cfg, OutputDir& out, Summary& s) {
  const auto pts = run_single_victim_sweep(cfg.sweep_spec());
  std::string csv = "n_tx,gamma_u_db,mean_inr_db\n";
  for (const auto& p : pts) {
    csv += std::to_string(p.n_tx) + ',' + format_double(p.gamma_u_db) + ',' + format_double(p.mean_inr_db) + '\n';
  }
  out.write("results.csv", csv);
  s.section("results");
  s.put("grid_points", pts.size());
  s.put("trials_per_point", cfg.trials);
}

void write_lambda_cdfs(const MultiVictimResult& r, const std::string& infix, OutputDir& out) {
  for (const auto& l : r.per_lambda) {
    const std::string tok = lambda_token(l.lambda);
    out.write("cdf_inr" + infix + "_" + tok + ".csv", cdf_csv(l.inr_db));
    out.write("cdf_snr0" + infix + "_" + tok + ".csv", cdf_csv(l.snr0_db));
  }
}

void multi_counts(Summary& s, const MultiVictimResult& r, const std::string& prefix) {
  s.put(prefix + "threshold_t", r.threshold_t);
  s.put(prefix + "completed_trials", r.completed_trials);
  s.put(prefix + "skipped_trials", r.skipped_trials);
  s.put(prefix + "victims_scored", r.victims_scored);
  s.put(prefix + "victims_detected", r.victims_detected);
  for (const auto& tr : r.trials) {
    if (tr.skipped) s.put(prefix + "skipped_trial_" + std::to_string(tr.trial), tr.skip_reason);
  }
}

void run_multi(const RunConfig& cfg, OutputDir& out, Summary& s) {
  const auto r = run_multi_victim(cfg.multi_victim_spec());
  std::string csv = "trial,victim,lambda,detected,inr_db,snr0_db\n";
  for (const auto& tr : r.trials) {
    if (tr.skipped) continue;
    for (std::size_t l = 0; l < r.lambdas.size(); ++l) {
      const std::string prefix = std::to_string(tr.trial) + ',';
      const std::string lam = lambda_token(r.lambdas[l]);
      const std::string snr = db(tr.snr0[l], cfg.db_floor);
      for (std::size_t k = 0; k < tr.inr[l].size(); ++k) {
        csv += prefix + std::to_string(k) + ',' + lam + ',' + (tr.detected[k] ? "1" : "0") + ',' +
               db(tr.inr[l][k], cfg.db_floor) + ',' + snr + '\n';
      }
    }
  }
  out.write("results.csv", csv);
  write_lambda_cdfs(r, "", out);
  s.section("results");
  multi_counts(s, r, "");
  for (const auto& l : r.per_lambda) {
    const std::string tok = lambda_token(l.lambda);
    if (!l.inr_db.empty()) {
      s.put("inr_exceed_-6db_" + tok, exceedance(l.inr_db, -6.0));
      s.put("median_inr_db_" + tok, l.inr_db.median());
    }
    if (!l.snr0_db.empty()) s.put("median_snr0_db_" + tok, l.snr0_db.median());
  }
}

void run_study(const RunConfig& cfg, OutputDir& out, Summary& s) {
  const auto study = antenna_scaling_study(cfg.multi_victim_spec(), cfg.study_geometries());
  std::string csv = "n_tx,lambda,median_inr_db,median_snr0_loss_db\n";
  s.section("results");
  for (const auto& e : study) {
    const std::string n = std::to_string(e.geom.n_tx());
    for (std::size_t l = 0; l < e.result.lambdas.size(); ++l) {
      // no victims means nothing to interfere with
      const double inr_med = e.result.per_lambda[l].inr_db.empty() ? cfg.db_floor : e.median_inr_db[l];
      const double loss = e.result.completed_trials == 0 ? 0.0 : e.median_snr0_loss_db[l];
      csv += n + ',' + lambda_token(e.result.lambdas[l]) + ',' + format_double(inr_med) + ',' +
             format_double(loss) + '\n';
    }
    write_lambda_cdfs(e.result, "_n" + n, out);
    multi_counts(s, e.result, "n" + n + "_");
  }
  out.write("results.csv", csv);
}

void run_threshold(const RunConfig& cfg, OutputDir& out, Summary& s) {
  const std::size_t n = cfg.threshold_n_tx();
  const auto det = DetectionConfig::calibrate(cfg.p_fa, n);
  const double n0 = cfg.radio().budget(Receiver::base_station).noise_energy_j();
  out.write("results.csv", "n_tx,p_fa,threshold_t,threshold_energy_j\n" + std::to_string(n) + ',' +
                               format_double(cfg.p_fa) + ',' + format_double(det.threshold_t()) + ',' +
                               format_double(det.threshold_t() * n0) + '\n');
  s.section("results");
  s.put("threshold_n_tx", n);
  s.put("threshold_p_fa", cfg.p_fa);
  s.put("threshold_t", det.threshold_t());
  s.put("threshold_energy_j", det.threshold_t() * n0);
}

}  // namespace

fs::path resolve_output_dir(const std::optional<std::string>& flag, const char* env_value) {
  if (flag && !flag->empty()) return *flag;
  if (env_value && *env_value) return env_value;
  throw std::invalid_argument(std::string("no output directory: pass --out or set ") + kOutDirEnv);
}

std::string cdf_csv(const EmpiricalCdf& cdf) {
  std::string out = "value_db,cdf\n";
  const auto& v = cdf.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k + 1 < v.size() && v[k + 1] == v[k]) continue;
    out += format_double(v[k]) + ',' + format_double(static_cast<double>(k + 1) / static_cast<double>(v.size())) +
           '\n';
  }
  return out;
}

RunReport run_scenario(const RunConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  OutputDir out(out_dir);
  Summary s;
  s.put("scenario", scenario_name(cfg.scenario));
  s.put("seed", cfg.seed);
  s.put("threads", cfg.threads);
  radio_section(s, cfg);
  switch (cfg.scenario) {
    case Scenario::single_victim_sweep: run_sweep(cfg, out, s); break;
    case Scenario::multi_victim: run_multi(cfg, out, s); break;
    case Scenario::antenna_study: run_study(cfg, out, s); break;
    case Scenario::threshold_calc: run_threshold(cfg, out, s); break;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  s.section("run");
  s.put("runtime_s", secs);
  s.section("config");
  s.body << serialize_config(cfg);
  RunReport report{{}, s.body.str()};
  out.write("summary.txt", report.summary);
  report.files = out.files();
  return report;
}

}  // namespace coexist
