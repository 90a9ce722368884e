#include "wiretap/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "wiretap/capacity.hpp"
#include "wiretap/montecarlo.hpp"
#include "wiretap/parallel.hpp"
#include "wiretap/power_alloc.hpp"

namespace wiretap::sweep {
namespace {

using channel::ChannelParams;
using nlohmann::json;

double to_unit(double nats, Base base) { return base == Base::Bits ? nats / std::numbers::ln2 : nats; }

std::string unit_suffix(Base base) { return base == Base::Bits ? "bits" : "nats"; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError("empty number in grid");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + t + "'");
  return v;
}

// CSV-safe single-line error text.
std::string sanitize(std::string message) {
  for (char& c : message) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return "error: " + message;
}

struct Task {
  double kappa;
  double rho;
  double p_bar_db;
};

std::vector<Task> expand(const SweepSpec& spec, bool with_power) {
  std::vector<Task> tasks;
  for (double kappa : spec.cgr_grid) {
    for (double rho : spec.pcc_list) {
      if (with_power) {
        for (double db : spec.power_grid_db) tasks.push_back({kappa, rho, db});
      } else {
        tasks.push_back({kappa, rho, 0.0});
      }
    }
  }
  return tasks;
}

constexpr double kBlank = std::numeric_limits<double>::quiet_NaN();

Table capacity_vs_power(const SweepSpec& spec) {
  const auto unit = unit_suffix(spec.base);
  Table table;
  table.columns = {"p_bar_db",          "kappa",         "rho",          "c_s_" + unit, "c_s_err",
                   "c_lim_" + unit, "lambda_star", "mean_power", "status"};
  const auto tasks = expand(spec, true);
  table.rows.resize(tasks.size());
  table.row_errors.resize(tasks.size());
  const auto quad = spec.quadrature_spec();

  parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    double c_s = kBlank, c_err = kBlank, c_lim = kBlank, lambda = kBlank, mean = kBlank;
    std::string error;
    try {
      c_lim = capacity::secrecy_limit(t.kappa, t.rho);
      const auto estimate = capacity::ergodic_secrecy_capacity(
          ChannelParams::from_cgr(t.kappa, t.rho), power::PowerConstraint::from_db(t.p_bar_db), quad);
      c_s = estimate.value;
      c_err = estimate.error;
      lambda = estimate.policy->lambda;
      mean = estimate.policy->achieved_mean_power;
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto num = [](double v) -> Cell {
      if (std::isnan(v)) return std::string{};
      return v;
    };
    table.rows[i] = {t.p_bar_db,
                     t.kappa,
                     t.rho,
                     num(to_unit(c_s, spec.base)),
                     num(to_unit(c_err, spec.base)),
                     num(to_unit(c_lim, spec.base)),
                     num(lambda),
                     num(mean),
                     error.empty() ? std::string("ok") : sanitize(error)};
    table.row_errors[i] = error;
  });
  return table;
}

template <class Eval>
Table limit_table(const SweepSpec& spec, std::vector<std::string> value_columns, const Eval& eval) {
  Table table;
  table.columns = {"kappa_db", "kappa", "rho"};
  for (auto& c : value_columns) table.columns.push_back(std::move(c));
  table.columns.push_back("status");
  const auto tasks = expand(spec, false);
  const std::size_t width = table.columns.size() - 4;
  table.rows.resize(tasks.size());
  table.row_errors.resize(tasks.size());

  parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    std::vector<Cell> row{linear_to_db(t.kappa), t.kappa, t.rho};
    std::string error;
    try {
      for (double v : eval(t.kappa, t.rho)) row.emplace_back(v);
    } catch (const std::exception& e) {
      error = e.what();
      row.resize(3);
      for (std::size_t c = 0; c < width; ++c) row.emplace_back(std::string{});
    }
    row.emplace_back(error.empty() ? std::string("ok") : sanitize(error));
    table.rows[i] = std::move(row);
    table.row_errors[i] = error;
  });
  return table;
}

Table oracle_table(const SweepSpec& spec) {
  std::vector<ChannelParams> grid;
  for (const auto& t : expand(spec, false)) grid.push_back(ChannelParams::from_cgr(t.kappa, t.rho));
  montecarlo::OracleOptions options;
  options.workers = spec.workers;
  options.quadrature = spec.quadrature_spec();
  if (!spec.power_grid_db.empty()) options.p_bar = db_to_linear(spec.power_grid_db.front());

  Table table;
  table.columns = {"target", "kappa", "rho", "analytic_value", "mc_value", "standard_error", "z_score",
                   "samples", "seed", "status"};
  const auto reports = montecarlo::run_oracle_suite(grid, spec.samples, spec.seed, options);
  for (const auto& r : reports) {
    const bool ok = std::abs(r.z_score) < 5.0;
    table.rows.push_back({r.target, r.params.cgr(), r.params.pcc, r.analytic_value, r.mc_value, r.standard_error,
                          r.z_score, static_cast<double>(r.samples), static_cast<double>(r.seed),
                          std::string(ok ? "ok" : "error: |z| >= 5")});
    table.row_errors.push_back(ok ? std::string{} : "|z| >= 5 for " + r.target);
  }
  return table;
}

json cell_to_json(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return *d;
  return std::get<std::string>(cell);
}

json number_list(const std::vector<double>& v) { return json(v); }

std::vector<double> grid_from_json(const json& value, const char* key) {
  if (value.is_string()) return parse_grid(value.get<std::string>());
  if (value.is_number()) return {value.get<double>()};
  if (value.is_array()) {
    std::vector<double> out;
    for (const auto& item : value) {
      if (!item.is_number()) throw UsageError(std::string("config key '") + key + "' must hold numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }
  throw UsageError(std::string("config key '") + key + "' must be a list, range string or number");
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::CapacityVsPower: return "capacity-vs-power";
    case Mode::LimitVsCgr: return "limit-vs-cgr";
    case Mode::NormalizedLossVsCgr: return "normalized-loss-vs-cgr";
    case Mode::Oracle: return "oracle";
  }
  return "unknown";
}

std::string_view to_string(Format format) { return format == Format::Csv ? "csv" : "json"; }
std::string_view to_string(Base base) { return base == Base::Nats ? "nats" : "bits"; }

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::CapacityVsPower, Mode::LimitVsCgr, Mode::NormalizedLossVsCgr, Mode::Oracle}) {
    if (text == to_string(m)) return m;
  }
  throw UsageError("unknown mode '" + std::string(text) + "'");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("unknown format '" + std::string(text) + "' (csv|json)");
}

Base parse_base(std::string_view text) {
  if (text == "nats") return Base::Nats;
  if (text == "bits") return Base::Bits;
  throw UsageError("unknown base '" + std::string(text) + "' (nats|bits)");
}

void SweepSpec::validate() const {
  if (cgr_grid.empty()) throw UsageError("the CGR grid is empty");
  if (pcc_list.empty()) throw UsageError("the PCC list is empty");
  if (mode == Mode::CapacityVsPower && power_grid_db.empty()) throw UsageError("the power grid is empty");
  for (double k : cgr_grid) {
    if (!(k > 0.0) || !std::isfinite(k)) throw UsageError("CGR values must be positive and finite");
  }
  for (double r : pcc_list) {
    if (!(r >= 0.0 && r <= 1.0)) throw UsageError("PCC values must lie in [0, 1]");
  }
  if (mode == Mode::Oracle) {
    for (double r : pcc_list) {
      if (!(r < 1.0)) throw UsageError("oracle mode needs PCC values below 1");
    }
    if (samples < montecarlo::kMinOracleSamples) throw UsageError("oracle mode needs at least 10000 samples");
  }
  try {
    quadrature_spec().validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

numerics::QuadratureSpec SweepSpec::quadrature_spec() const {
  numerics::QuadratureSpec q;
  if (quadrature.relative_tolerance) q.relative_tolerance = *quadrature.relative_tolerance;
  if (quadrature.absolute_tolerance) q.absolute_tolerance = *quadrature.absolute_tolerance;
  if (quadrature.max_subdivisions) q.max_subdivisions = *quadrature.max_subdivisions;
  return q;
}

SweepSpec default_spec(Mode mode) {
  SweepSpec spec;
  spec.mode = mode;
  spec.power_grid_db = parse_grid("-10:2:50");
  switch (mode) {
    case Mode::CapacityVsPower:
      spec.cgr_grid = {1.0, 0.5};
      spec.pcc_list = {0.0, 0.5, 0.9};
      break;
    case Mode::LimitVsCgr:
      spec.cgr_grid = parse_grid("-30:2:30");
      for (double& k : spec.cgr_grid) k = db_to_linear(k);
      spec.pcc_list = {0.0, 0.5, 0.9, 1.0};
      break;
    case Mode::NormalizedLossVsCgr:
      spec.cgr_grid = parse_grid("-30:2:30");
      for (double& k : spec.cgr_grid) k = db_to_linear(k);
      spec.pcc_list = {0.3, 0.5, 0.7, 0.9};
      break;
    case Mode::Oracle: {
      spec.cgr_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 10.0};
      spec.pcc_list = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9};
      spec.power_grid_db = {10.0};
      break;
    }
  }
  return spec;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError("empty grid");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = t.find(':', start);
      parts.push_back(parse_number(std::string_view(t).substr(start, colon - start)));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw UsageError("range must be start:step:stop, got '" + t + "'");
    const double first = parts[0];
    const double step = parts[1];
    const double last = parts[2];
    if (step == 0.0) throw UsageError("range step must be nonzero");
    const double span = (last - first) / step;
    if (span < -1e-9) throw UsageError("range step points away from stop in '" + t + "'");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    if (count > 1'000'000) throw UsageError("range has too many points");
    for (std::size_t i = 0; i < count; ++i) out.push_back(first + static_cast<double>(i) * step);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = t.find(',', start);
    out.push_back(parse_number(std::string_view(t).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double value) { return 10.0 * std::log10(value); }

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

bool Table::ok() const {
  for (const auto& e : row_errors) {
    if (!e.empty()) return false;
  }
  return true;
}

Table run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto unit = unit_suffix(spec.base);
  switch (spec.mode) {
    case Mode::CapacityVsPower:
      return capacity_vs_power(spec);
    case Mode::LimitVsCgr:
      return limit_table(spec, {"c_lim_" + unit, "lower_" + unit, "upper_" + unit},
                         [&](double kappa, double rho) {
                           const auto bounds = capacity::limit_bounds(ChannelParams::from_cgr(kappa, rho));
                           return std::vector<double>{to_unit(capacity::secrecy_limit(kappa, rho), spec.base),
                                                      to_unit(bounds.lower, spec.base),
                                                      to_unit(bounds.upper, spec.base)};
                         });
    case Mode::NormalizedLossVsCgr:
      return limit_table(spec, {"normalized", "one_minus_rho"}, [](double kappa, double rho) {
        return std::vector<double>{capacity::secrecy_limit(kappa, rho) / capacity::limit_independent(kappa),
                                   1.0 - rho};
      });
    case Mode::Oracle:
      return oracle_table(spec);
  }
  throw UsageError("unknown mode");
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const double* d = std::get_if<double>(&row[c])) {
        out += format_number(*d);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

json to_json(const Table& table, const SweepSpec& spec) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) obj[table.columns[c]] = cell_to_json(row[c]);
    rows.push_back(std::move(obj));
  }
  return {{"version", kVersion}, {"spec", spec_to_json(spec)}, {"rows", std::move(rows)}};
}

std::string render(const Table& table, const SweepSpec& spec) {
  if (spec.format == Format::Csv) return to_csv(table);
  return to_json(table, spec).dump(2) + "\n";
}

std::string reformat_csv(std::string_view csv) {
  std::string out;
  std::size_t line_start = 0;
  bool header = true;
  while (line_start < csv.size()) {
    auto line_end = csv.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = csv.size();
    const std::string_view line = csv.substr(line_start, line_end - line_start);
    if (header) {
      out.append(line);
      header = false;
    } else {
      std::size_t cell_start = 0;
      bool first = true;
      while (true) {
        const auto comma = line.find(',', cell_start);
        const std::string cell(line.substr(cell_start, comma - cell_start));
        if (!first) out += ',';
        first = false;
        char* end = nullptr;
        const double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size()) {
          out += format_number(v);
        } else {
          out += cell;
        }
        if (comma == std::string_view::npos) break;
        cell_start = comma + 1;
      }
    }
    out += '\n';
    line_start = line_end + 1;
  }
  return out;
}

json spec_to_json(const SweepSpec& spec) {
  json q = json::object();
  if (spec.quadrature.relative_tolerance) q["rel-tol"] = *spec.quadrature.relative_tolerance;
  if (spec.quadrature.absolute_tolerance) q["abs-tol"] = *spec.quadrature.absolute_tolerance;
  if (spec.quadrature.max_subdivisions) q["max-subdivisions"] = *spec.quadrature.max_subdivisions;
  json out = {{"mode", to_string(spec.mode)},
              {"pbar-db", number_list(spec.power_grid_db)},
              {"cgr", number_list(spec.cgr_grid)},
              {"pcc", number_list(spec.pcc_list)},
              {"format", to_string(spec.format)},
              {"base", to_string(spec.base)},
              {"seed", spec.seed},
              {"samples", spec.samples}};
  for (auto& [k, v] : q.items()) out[k] = v;
  return out;
}

SweepSpec apply_config(const json& config, SweepSpec base) {
  if (!config.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : config.items()) {
      if (key == "mode") {
        base.mode = parse_mode(value.get<std::string>());
      } else if (key == "pbar-db") {
        base.power_grid_db = grid_from_json(value, "pbar-db");
      } else if (key == "cgr") {
        base.cgr_grid = grid_from_json(value, "cgr");
      } else if (key == "cgr-db") {
        base.cgr_grid = grid_from_json(value, "cgr-db");
        for (double& k : base.cgr_grid) k = db_to_linear(k);
      } else if (key == "pcc") {
        base.pcc_list = grid_from_json(value, "pcc");
      } else if (key == "format") {
        base.format = parse_format(value.get<std::string>());
      } else if (key == "base") {
        base.base = parse_base(value.get<std::string>());
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "workers") {
        base.workers = value.get<unsigned>();
      } else if (key == "samples") {
        base.samples = value.get<std::uint64_t>();
      } else if (key == "rel-tol") {
        base.quadrature.relative_tolerance = value.get<double>();
      } else if (key == "abs-tol") {
        base.quadrature.absolute_tolerance = value.get<double>();
      } else if (key == "max-subdivisions") {
        base.quadrature.max_subdivisions = value.get<int>();
      } else if (key == "out" || key == "version") {
        // consumed by the command-line front end / informational
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return base;
}

json single_point(const ChannelParams& params, std::optional<double> p_bar, const numerics::QuadratureSpec& spec,
                  Base base) {
  params.validate(true);
  const double kappa = params.cgr();
  const auto bounds = capacity::limit_bounds(params);
  json out = {{"kappa", kappa},
              {"rho", params.pcc},
              {"base", to_string(base)},
              {"limit", to_unit(capacity::secrecy_limit(kappa, params.pcc), base)},
              {"loss_term", to_unit(capacity::limit_loss_term(kappa, params.pcc), base)},
              {"lower", to_unit(bounds.lower, base)},
              {"upper", to_unit(bounds.upper, base)}};
  if (params.pcc < 1.0) {
    const auto integral = capacity::limit_via_ratio_integral(params, spec);
    out["limit_ratio_integral"] = to_unit(integral.value, base);
    out["limit_ratio_integral_err"] = to_unit(integral.error, base);
  } else {
    out["limit_ratio_integral"] = nullptr;
  }
  if (p_bar) {
    const auto estimate = capacity::ergodic_secrecy_capacity(params, power::PowerConstraint{*p_bar}, spec);
    out["p_bar"] = *p_bar;
    out["p_bar_db"] = linear_to_db(*p_bar);
    out["c_s"] = to_unit(estimate.value, base);
    out["c_s_err"] = to_unit(estimate.error, base);
    out["lambda_star"] = estimate.policy->lambda;
    out["mean_power"] = estimate.policy->achieved_mean_power;
  }
  return out;
}

}  // namespace wiretap::sweep
