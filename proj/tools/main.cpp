#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "segrega/config.hpp"

using namespace segrega;

namespace {

struct Flags {
  std::string config;
  std::string mu_schedule;
  std::string grid;
  std::string point;
  std::string out;
  int threads = 0;
  long long seed = -1;
  std::string datum_file;
  std::string model;
  std::string partition;
  std::string grid_dump;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--mu-schedule", f.mu_schedule, "comma-separated increasing mu values");
  app->add_option("--grid", f.grid, "polar grid NRxNT");
  app->add_option("--point", f.point, "interior point x1,x2");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--threads", f.threads, "worker threads (1 = reference path)");
  app->add_option("--seed", f.seed, "seed for randomized suites");
}

ExperimentConfig resolve(const Flags& f) {
  Json file;
  std::filesystem::path base;
  if (!f.config.empty()) {
    file = read_json_file(f.config);
    base = std::filesystem::path(f.config).parent_path();
  }
  Json flags = Json::object();
  if (!f.mu_schedule.empty()) flags["mu_schedule"] = parse_list_flag(f.mu_schedule);
  if (!f.grid.empty()) flags["grid"] = parse_grid_flag(f.grid);
  if (!f.point.empty()) {
    const auto v = parse_list_flag(f.point);
    if (v.size() != 2) throw Error(ErrorCode::ConfigError, "--point expects x1,x2");
    flags["point"] = v;
  }
  if (!f.out.empty()) flags["out"] = f.out;
  if (f.threads != 0) flags["threads"] = f.threads;
  if (f.seed >= 0) flags["seed"] = f.seed;
  if (f.seed < -1) throw Error(ErrorCode::ConfigError, "--seed must be nonnegative");
  if (!f.datum_file.empty()) flags["datum"] = f.datum_file;
  if (!f.model.empty()) {
    flags["source"] = "model";
    flags["model"] = f.model;
  }
  if (!f.partition.empty()) {
    flags["source"] = "file";
    flags["partition"] = f.partition;
  }
  if (!f.grid_dump.empty()) flags["grid_dump"] = f.grid_dump;
  return load_config(file, flags, base);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segregated limit configurations: harmonic certification, PDE solver and nodal partitions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Flags flags;
  auto* solve = app.add_subcommand("solve", "run the mu-continuation and extract the partition");
  auto* certify = app.add_subcommand("certify", "moment and derivative certification of 2s-points");
  auto* verify = app.add_subcommand("verify", "identity, graph, classification and regularity checks");
  auto* harmonic = app.add_subcommand("harmonic", "harmonic extension of the alternating datum");
  auto* datum = app.add_subcommand("datum", "boundary datum tools");
  auto* validate = datum->add_subcommand("validate", "check admissibility and print the normalized datum");
  datum->require_subcommand(1);
  for (auto* sub : {solve, certify, verify, harmonic, validate}) add_common(sub, flags);
  verify->add_option("--model", flags.model, "synthetic source: r3cos3, x1, six, four_four, three_five, four_three_three, quad_triple");
  verify->add_option("--partition", flags.partition, "partition JSON written by solve or verify");
  verify->add_option("--grid-dump", flags.grid_dump, "grid CSV matching --partition");
  validate->add_option("file", flags.datum_file, "datum JSON, or a config holding one (default: the datum of --config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    if (verify->parsed()) return cli::cmd_verify(cfg);
    if (solve->parsed()) return cli::cmd_solve(cfg);
    if (certify->parsed()) return cli::cmd_certify(cfg);
    if (harmonic->parsed()) return cli::cmd_harmonic(cfg);
    return cli::cmd_datum_validate(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kChecksFailed;
  }
}
