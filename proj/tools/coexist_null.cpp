#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "coexist/config.hpp"
#include "coexist/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-nulling coexistence simulator"};
  std::string scenario;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("scenario", scenario, "single-victim-sweep | multi-victim | threshold-calc | antenna-study")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file")->required();
  app.add_option("--out", out_dir, std::string("output directory (default: $") + coexist::kOutDirEnv + ")");
  app.add_option("--seed", seed, "master seed, overrides the config");
  app.add_option("--threads", threads, "worker threads, 0 = all cores; overrides the config");
  CLI11_PARSE(app, argc, argv);

  try {
    coexist::RunConfig cfg = coexist::parse_config(read_file(config_path));
    cfg.scenario = coexist::parse_scenario(scenario);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    cfg.validate();
    const auto dir = coexist::resolve_output_dir(out_dir, std::getenv(coexist::kOutDirEnv));
    const auto report = coexist::run_scenario(cfg, dir);
    std::cout << "coexist-null: " << scenario << ": wrote " << report.files.size() << " files to " << dir.string()
              << '\n';
  } catch (const std::exception& e) {
    std::cerr << "coexist-null: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
