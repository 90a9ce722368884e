#pragma once

// Parameter sweeps behind the command-line tool: grids over (P, kappa, rho),
// tabular results, and their CSV / JSON encodings.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wiretap/channel_model.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::sweep {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid sweep request (bad grid syntax, empty grid, rho out of range, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { CapacityVsPower, LimitVsCgr, NormalizedLossVsCgr, Oracle };
enum class Format { Csv, Json };
enum class Base { Nats, Bits };

std::string_view to_string(Mode mode);
std::string_view to_string(Format format);
std::string_view to_string(Base base);
Mode parse_mode(std::string_view text);
Format parse_format(std::string_view text);
Base parse_base(std::string_view text);

struct QuadratureOverrides {
  std::optional<double> relative_tolerance;
  std::optional<double> absolute_tolerance;
  std::optional<int> max_subdivisions;
};

struct SweepSpec {
  Mode mode = Mode::LimitVsCgr;
  std::vector<double> power_grid_db;  ///< P in dB
  std::vector<double> cgr_grid;       ///< kappa, linear
  std::vector<double> pcc_list;       ///< rho
  Format format = Format::Csv;
  Base base = Base::Nats;
  std::uint64_t seed = 20240601;
  unsigned workers = 0;  ///< 0 = machine parallelism
  std::uint64_t samples = 1'000'000;  ///< oracle mode only
  QuadratureOverrides quadrature{};

  /// Throws UsageError when a grid needed by the mode is empty or a value is
  /// out of range.
  void validate() const;
  numerics::QuadratureSpec quadrature_spec() const;
};

/// Defaults for a mode: P from -10 to 50 dB in 2 dB steps, kappa from -30 to
/// 30 dB (limit modes) or {1, 0.5} (capacity), rho lists per mode.
SweepSpec default_spec(Mode mode);

/// "a,b,c" or "start:step:stop" (inclusive, step may be negative).
std::vector<double> parse_grid(std::string_view text);
double db_to_linear(double db);
double linear_to_db(double value);

/// Fixed 12-significant-digit formatting used by every numeric CSV cell.
std::string format_number(double value);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// One entry per row; empty when the row computed cleanly.
  std::vector<std::string> row_errors;

  bool ok() const;
};

/// Evaluates every grid point (concurrently, up to spec.workers) and returns
/// the rows in grid order.
Table run_sweep(const SweepSpec& spec);

std::string to_csv(const Table& table);
/// {"version", "spec", "rows"}; rows are objects keyed by column name.
nlohmann::json to_json(const Table& table, const SweepSpec& spec);
std::string render(const Table& table, const SweepSpec& spec);

/// Parses CSV emitted by to_csv and writes it back out: numeric cells are
/// re-formatted, text cells copied.
std::string reformat_csv(std::string_view csv);

nlohmann::json spec_to_json(const SweepSpec& spec);
/// Applies the keys of a config object (same names as the command-line flags)
/// on top of `base`.
SweepSpec apply_config(const nlohmann::json& config, SweepSpec base);

/// Everything known at one parameter point: limit (closed form and, for
/// rho < 1, ratio integral), bounds, and with a budget the capacity, multiplier
/// and achieved mean power.
nlohmann::json single_point(const channel::ChannelParams& params, std::optional<double> p_bar,
                            const numerics::QuadratureSpec& spec, Base base = Base::Nats);

}  // namespace wiretap::sweep
