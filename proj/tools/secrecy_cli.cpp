// secrecy: sweeps, single-point queries and the Monte Carlo oracle for the
// correlated Rayleigh wiretap channel.
//
//   secrecy sweep --mode limit-vs-cgr --cgr-db=-30:2:30 --pcc 0,0.5,0.9,1
//   secrecy point --cgr 1 --pcc 0.5 --pbar-db 10
//   secrecy oracle --samples 1000000 --seed 7

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wiretap/channel_model.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/sweep.hpp"

namespace {

using wiretap::sweep::SweepSpec;
using wiretap::sweep::UsageError;

constexpr int kExitRowErrors = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string mode;
  std::string pbar_db;
  std::string cgr;
  std::string cgr_db;
  std::string pcc;
  std::string format;
  std::string base;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::uint64_t samples = 0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  int max_subdivisions = 0;
  std::string config;
  std::string out = "stdout";
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--pbar-db", f.pbar_db, "Average power grid in dB: list a,b,c or range start:step:stop");
  cmd->add_option("--cgr", f.cgr, "CGR grid (linear)");
  cmd->add_option("--cgr-db", f.cgr_db, "CGR grid in dB");
  cmd->add_option("--pcc", f.pcc, "PCC list");
  cmd->add_option("--format", f.format, "csv|json");
  cmd->add_option("--base", f.base, "nats|bits");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = machine parallelism)");
  cmd->add_option("--samples", f.samples, "Monte Carlo samples per grid point (oracle)");
  cmd->add_option("--rel-tol", f.rel_tol, "Quadrature relative tolerance");
  cmd->add_option("--abs-tol", f.abs_tol, "Quadrature absolute tolerance");
  cmd->add_option("--max-subdivisions", f.max_subdivisions, "Quadrature subdivision budget");
  cmd->add_option("--config", f.config, "JSON config; keys mirror the flags, flags win");
  cmd->add_option("--out", f.out, "Output path or 'stdout'");
}

bool given(const CLI::App& cmd, const std::string& name) {
  const auto* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

// Config first, then every flag the user actually passed.
SweepSpec build_spec(const CLI::App& cmd, const Flags& f, SweepSpec spec, std::string& out_path) {
  using namespace wiretap::sweep;
  if (!f.config.empty()) {
    const auto config = read_config(f.config);
    if (config.contains("mode") && !given(cmd, "--mode")) spec = default_spec(parse_mode(config["mode"].get<std::string>()));
    spec = apply_config(config, spec);
    if (config.contains("out") && cmd.count("--out") == 0) out_path = config["out"].get<std::string>();
  }
  if (cmd.count("--cgr") && cmd.count("--cgr-db")) throw UsageError("give either --cgr or --cgr-db, not both");
  if (cmd.count("--pbar-db")) spec.power_grid_db = parse_grid(f.pbar_db);
  if (cmd.count("--cgr")) spec.cgr_grid = parse_grid(f.cgr);
  if (cmd.count("--cgr-db")) {
    spec.cgr_grid = parse_grid(f.cgr_db);
    for (double& k : spec.cgr_grid) k = db_to_linear(k);
  }
  if (cmd.count("--pcc")) spec.pcc_list = parse_grid(f.pcc);
  if (cmd.count("--format")) spec.format = parse_format(f.format);
  if (cmd.count("--base")) spec.base = parse_base(f.base);
  if (cmd.count("--seed")) spec.seed = f.seed;
  if (cmd.count("--workers")) spec.workers = f.workers;
  if (cmd.count("--samples")) spec.samples = f.samples;
  if (cmd.count("--rel-tol")) spec.quadrature.relative_tolerance = f.rel_tol;
  if (cmd.count("--abs-tol")) spec.quadrature.absolute_tolerance = f.abs_tol;
  if (cmd.count("--max-subdivisions")) spec.quadrature.max_subdivisions = f.max_subdivisions;
  if (cmd.count("--out")) out_path = f.out;
  spec.validate();
  return spec;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "stdout" || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

int run_table(const CLI::App& cmd, const Flags& f, wiretap::sweep::Mode default_mode) {
  using namespace wiretap::sweep;
  const Mode mode = given(cmd, "--mode") ? parse_mode(f.mode) : default_mode;
  std::string out_path = f.out;
  const SweepSpec spec = build_spec(cmd, f, default_spec(mode), out_path);
  const Table table = run_sweep(spec);
  emit(render(table, spec), out_path);
  for (std::size_t i = 0; i < table.row_errors.size(); ++i) {
    if (!table.row_errors[i].empty()) std::cerr << "row " << i << ": " << table.row_errors[i] << "\n";
  }
  return table.ok() ? 0 : kExitRowErrors;
}

int run_point(const CLI::App& cmd, const Flags& f) {
  using namespace wiretap::sweep;
  std::string out_path = f.out;
  SweepSpec defaults;
  defaults.cgr_grid = {1.0};
  defaults.pcc_list = {0.0};
  const SweepSpec spec = build_spec(cmd, f, defaults, out_path);
  std::optional<double> p_bar;
  if (!spec.power_grid_db.empty()) p_bar = db_to_linear(spec.power_grid_db.front());
  const auto params = wiretap::channel::ChannelParams::from_cgr(spec.cgr_grid.front(), spec.pcc_list.front());
  nlohmann::json record;
  int status = 0;
  try {
    record = single_point(params, p_bar, spec.quadrature_spec(), spec.base);
  } catch (const std::exception& e) {
    record = {{"kappa", params.cgr()}, {"rho", params.pcc}, {"error", e.what()}};
    status = kExitRowErrors;
  }
  emit(record.dump(2) + "\n", out_path);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy capacity of the correlated Rayleigh wiretap channel"};
  app.require_subcommand(1);

  Flags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep (CSV or JSON table)");
  sweep->add_option("--mode", sweep_flags.mode,
                    "capacity-vs-power | limit-vs-cgr | normalized-loss-vs-cgr | oracle");
  add_common(sweep, sweep_flags);

  Flags point_flags;
  auto* point = app.add_subcommand("point", "Single parameter point as a JSON record");
  add_common(point, point_flags);

  Flags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "Monte Carlo oracle suite");
  add_common(oracle, oracle_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep) return run_table(*sweep, sweep_flags, wiretap::sweep::Mode::LimitVsCgr);
    if (*point) return run_point(*point, point_flags);
    if (*oracle) return run_table(*oracle, oracle_flags, wiretap::sweep::Mode::Oracle);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const wiretap::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRowErrors;
  }
  return kExitUsage;
}
