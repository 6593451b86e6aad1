#include "coexist/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "coexist/units.hpp"

namespace coexist {

namespace {

constexpr std::string_view kScenarioNames[] = {"single-victim-sweep", "multi-victim", "threshold-calc",
                                               "antenna-study"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Value parsers throw std::invalid_argument with a short reason; the caller
// adds line and key.
double parse_number(std::string_view s, bool allow_infinite) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  if (std::isnan(v) || (!allow_infinite && std::isinf(v))) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s) {
  Int v{};
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::vector<ArrayShape> parse_shapes(std::string_view s) {
  std::vector<ArrayShape> out;
  for (auto item : split_list(s)) {
    const auto x = item.find('x');
    if (x == std::string_view::npos) {
      throw std::invalid_argument("expected RxC array shapes, got '" + std::string(item) + "'");
    }
    out.push_back({parse_integer<std::size_t>(trim(item.substr(0, x))),
                   parse_integer<std::size_t>(trim(item.substr(x + 1)))});
  }
  return out;
}

std::vector<double> parse_lambdas(std::string_view s) {
  std::vector<double> out;
  for (auto item : split_list(s)) out.push_back(parse_number(item, true));
  return out;
}

std::string join_shapes(const std::vector<ArrayShape>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(v[k].rows) + "x" + std::to_string(v[k].cols);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ',';
    out += format_double(v[k]);
  }
  return out;
}

struct Field {
  std::string_view key;
  std::function<void(RunConfig&, std::string_view)> parse;
  std::function<std::string(const RunConfig&)> format;
};

Field real(std::string_view key, double RunConfig::*m) {
  return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_number(v, false); },
          [m](const RunConfig& c) { return format_double(c.*m); }};
}

template <class Int>
Field integer(std::string_view key, Int RunConfig::*m) {
  return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_integer<Int>(v); },
          [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field boolean(std::string_view key, bool RunConfig::*m) {
  return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_bool(v); },
          [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field shapes(std::string_view key, std::vector<ArrayShape> RunConfig::*m) {
  return {key, [m](RunConfig& c, std::string_view v) { c.*m = parse_shapes(v); },
          [m](const RunConfig& c) { return join_shapes(c.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario", [](RunConfig& c, std::string_view v) { c.scenario = parse_scenario(v); },
       [](const RunConfig& c) { return std::string(scenario_name(c.scenario)); }},
      real("carrier_ghz", &RunConfig::carrier_ghz),
      real("bandwidth_mhz", &RunConfig::bandwidth_mhz),
      real("noise_psd_dbm_per_hz", &RunConfig::noise_psd_dbm_per_hz),
      real("tx_power_dbm", &RunConfig::tx_power_dbm),
      real("victim_tx_power_dbm", &RunConfig::victim_tx_power_dbm),
      real("nf_bs_db", &RunConfig::nf_bs_db),
      real("nf_victim_db", &RunConfig::nf_victim_db),
      real("nf_ue_db", &RunConfig::nf_ue_db),
      real("preamble_duration_us", &RunConfig::preamble_duration_us),
      real("p_fa", &RunConfig::p_fa),
      integer("array_rows", &RunConfig::array_rows),
      integer("array_cols", &RunConfig::array_cols),
      real("element_spacing", &RunConfig::element_spacing),
      integer("seed", &RunConfig::seed),
      integer("trials", &RunConfig::trials),
      integer("threads", &RunConfig::threads),
      real("db_floor", &RunConfig::db_floor),
      shapes("sweep_arrays", &RunConfig::sweep_arrays),
      real("desired_azimuth_deg", &RunConfig::desired_azimuth_deg),
      real("victim_azimuth_deg", &RunConfig::victim_azimuth_deg),
      real("gamma_u_min_db", &RunConfig::gamma_u_min_db),
      real("gamma_u_max_db", &RunConfig::gamma_u_max_db),
      real("gamma_u_step_db", &RunConfig::gamma_u_step_db),
      boolean("perfect_csi", &RunConfig::perfect_csi),
      integer("n_victims", &RunConfig::n_victims),
      real("victim_gain_min_db", &RunConfig::victim_gain_min_db),
      real("victim_gain_max_db", &RunConfig::victim_gain_max_db),
      real("desired_gain_min_db", &RunConfig::desired_gain_min_db),
      real("desired_gain_max_db", &RunConfig::desired_gain_max_db),
      integer("paths", &RunConfig::paths),
      {"lambdas", [](RunConfig& c, std::string_view v) { c.lambdas = parse_lambdas(v); },
       [](const RunConfig& c) { return join_doubles(c.lambdas); }},
      boolean("use_estimates", &RunConfig::use_estimates),
      boolean("detection", &RunConfig::detection),
      real("azimuth_min_deg", &RunConfig::azimuth_min_deg),
      real("azimuth_max_deg", &RunConfig::azimuth_max_deg),
      real("elevation_min_deg", &RunConfig::elevation_min_deg),
      real("elevation_max_deg", &RunConfig::elevation_max_deg),
      real("dominant_fraction_min", &RunConfig::dominant_fraction_min),
      shapes("study_arrays", &RunConfig::study_arrays),
      integer("n_tx", &RunConfig::n_tx),
  };
  return table;
}

void check(bool ok, std::string_view key, const std::string& constraint) {
  if (!ok) throw ConfigError(std::string(key) + ": " + constraint);
}

std::vector<ArrayGeometry> geometries(const std::vector<ArrayShape>& shapes, double spacing) {
  std::vector<ArrayGeometry> out;
  for (const auto& s : shapes) out.emplace_back(s.rows, s.cols, spacing);
  return out;
}

}  // namespace

std::string_view scenario_name(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

Scenario parse_scenario(std::string_view name) {
  for (int k = 0; k < 4; ++k) {
    if (kScenarioNames[k] == name) return static_cast<Scenario>(k);
  }
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected single-victim-sweep, multi-victim, threshold-calc or antenna-study)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string lambda_token(double lambda) {
  std::string s = format_double(lambda);
  if (const auto plus = s.find("e+"); plus != std::string::npos) s.erase(plus + 1, 1);
  return s;
}

void RunConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0; };
  check(positive(carrier_ghz), "carrier_ghz", "must be > 0");
  check(positive(bandwidth_mhz), "bandwidth_mhz", "must be > 0");
  check(positive(preamble_duration_us), "preamble_duration_us", "must be > 0");
  check(p_fa > 0.0 && p_fa < 1.0, "p_fa", "must be in (0,1), got " + format_double(p_fa));
  check(array_rows >= 1, "array_rows", "must be >= 1");
  check(array_cols >= 1, "array_cols", "must be >= 1");
  check(positive(element_spacing), "element_spacing", "must be > 0");
  check(trials >= 1, "trials", "must be >= 1");
  check(threads >= 0, "threads", "must be >= 0 (0 uses every hardware thread)");
  check(!sweep_arrays.empty(), "sweep_arrays", "must list at least one array");
  for (const auto& s : sweep_arrays) check(s.rows >= 1 && s.cols >= 1, "sweep_arrays", "rows and cols must be >= 1");
  check(std::abs(desired_azimuth_deg) <= 180.0, "desired_azimuth_deg", "must be in [-180, 180]");
  check(std::abs(victim_azimuth_deg) <= 180.0, "victim_azimuth_deg", "must be in [-180, 180]");
  check(positive(gamma_u_step_db), "gamma_u_step_db", "must be > 0");
  check(gamma_u_min_db <= gamma_u_max_db, "gamma_u_min_db", "must be <= gamma_u_max_db");
  check(n_victims >= 0, "n_victims", "must be >= 0");
  check(victim_gain_min_db <= victim_gain_max_db, "victim_gain_min_db", "must be <= victim_gain_max_db");
  check(desired_gain_min_db <= desired_gain_max_db, "desired_gain_min_db", "must be <= desired_gain_max_db");
  check(paths >= 1 && paths <= kMaxPaths, "paths", "must be in [1, " + std::to_string(kMaxPaths) + "]");
  check(!lambdas.empty(), "lambdas", "must list at least one value");
  for (double l : lambdas) check(l >= 0.0, "lambdas", "values must be >= 0 or inf");
  check(azimuth_min_deg < azimuth_max_deg && azimuth_min_deg >= -180.0 && azimuth_max_deg <= 180.0,
        "azimuth_min_deg", "azimuth range must satisfy -180 <= min < max <= 180");
  check(elevation_min_deg <= elevation_max_deg && elevation_min_deg >= -90.0 && elevation_max_deg <= 90.0,
        "elevation_min_deg", "elevation range must satisfy -90 <= min <= max <= 90");
  check(dominant_fraction_min > 0.0 && dominant_fraction_min <= 1.0, "dominant_fraction_min",
        "must be in (0, 1]");
  check(!study_arrays.empty(), "study_arrays", "must list at least one array");
  for (const auto& s : study_arrays) check(s.rows >= 1 && s.cols >= 1, "study_arrays", "rows and cols must be >= 1");

  const RadioParams r = radio();
  for (auto side : {Receiver::base_station, Receiver::victim, Receiver::desired_user}) {
    try {
      (void)r.budget(side);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("radio parameters: ") + e.what());
    }
  }
}

RadioParams RunConfig::radio() const {
  RadioParams r;
  r.carrier_hz = carrier_ghz * 1e9;
  r.bandwidth_hz = bandwidth_mhz * 1e6;
  r.tx_power_w = dbm_to_watts(tx_power_dbm);
  r.victim_tx_power_w = dbm_to_watts(victim_tx_power_dbm);
  r.preamble_duration_s = preamble_duration_us * 1e-6;
  r.noise_psd_w_per_hz = dbm_to_watts(noise_psd_dbm_per_hz);
  r.nf_base_station_linear = db_to_linear(nf_bs_db);
  r.nf_victim_linear = db_to_linear(nf_victim_db);
  r.nf_desired_user_linear = db_to_linear(nf_ue_db);
  return r;
}

ArrayGeometry RunConfig::array() const { return ArrayGeometry(array_rows, array_cols, element_spacing); }

std::size_t RunConfig::threshold_n_tx() const { return n_tx == 0 ? array_rows * array_cols : n_tx; }

SingleVictimSweepSpec RunConfig::sweep_spec() const {
  SingleVictimSweepSpec s;
  s.geoms = geometries(sweep_arrays, element_spacing);
  s.desired_azimuth_rad = deg_to_rad(desired_azimuth_deg);
  s.victim_azimuth_rad = deg_to_rad(victim_azimuth_deg);
  s.gamma_u_grid_db.clear();
  // integer stepping keeps the grid free of accumulated rounding
  const auto steps = static_cast<long>(std::floor((gamma_u_max_db - gamma_u_min_db) / gamma_u_step_db + 1e-9));
  for (long k = 0; k <= steps; ++k) s.gamma_u_grid_db.push_back(gamma_u_min_db + k * gamma_u_step_db);
  s.radio = radio();
  s.perfect_csi = perfect_csi;
  s.trials_per_point = trials;
  s.master_seed = seed;
  s.threads = threads;
  s.db_floor = db_floor;
  return s;
}

MultiVictimScenarioSpec RunConfig::multi_victim_spec() const {
  MultiVictimScenarioSpec s;
  s.geom = array();
  s.n_victims = n_victims;
  s.victim_gain_db_min = victim_gain_min_db;
  s.victim_gain_db_max = victim_gain_max_db;
  s.desired_gain_db_min = desired_gain_min_db;
  s.desired_gain_db_max = desired_gain_max_db;
  s.paths = paths;
  s.multipath.azimuth_min_rad = deg_to_rad(azimuth_min_deg);
  s.multipath.azimuth_max_rad = deg_to_rad(azimuth_max_deg);
  s.multipath.elevation_min_rad = deg_to_rad(elevation_min_deg);
  s.multipath.elevation_max_rad = deg_to_rad(elevation_max_deg);
  s.multipath.dominant_fraction_min = dominant_fraction_min;
  s.lambda_grid = lambdas;
  s.use_estimates = use_estimates;
  s.detection_enabled = detection;
  s.p_fa = p_fa;
  s.radio = radio();
  s.trials = trials;
  s.master_seed = seed;
  s.threads = threads;
  s.db_floor = db_floor;
  return s;
}

std::vector<ArrayGeometry> RunConfig::study_geometries() const { return geometries(study_arrays, element_spacing); }

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "config line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");

    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.key == key) field = &f;
    }
    if (!field) throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + ": key '" + std::string(key) + "' given twice");
    }
    try {
      field->parse(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + std::string(key) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& f : fields()) os << f.key << " = " << f.format(cfg) << '\n';
  return os.str();
}

}  // namespace coexist
