#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "wiretap/capacity.hpp"
#include "wiretap/sweep.hpp"

using namespace wiretap;
using namespace wiretap::sweep;

TEST_CASE("parse_grid: lists and ranges") {
  CHECK(parse_grid("1,2.5, 4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(parse_grid("0.3") == std::vector<double>{0.3});
  CHECK(parse_grid("-10:2:50").size() == 31);
  CHECK(parse_grid("-10:2:50").back() == 50.0);
  CHECK(parse_grid("30:-2:-30").size() == 31);
  CHECK(parse_grid("0:0.1:1").size() == 11);
  CHECK(parse_grid("0:0.1:1").back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_grid(""), UsageError);
  CHECK_THROWS_AS(parse_grid("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_grid("1:0:2"), UsageError);
  CHECK_THROWS_AS(parse_grid("1:1"), UsageError);
  CHECK_THROWS_AS(parse_grid("2:1:0"), UsageError);
  CHECK_THROWS_AS(parse_grid("abc"), UsageError);
}

TEST_CASE("format_number and dB conversion") {
  CHECK(format_number(std::numbers::ln2) == "0.69314718056");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(linear_to_db(0.001) == doctest::Approx(-30.0).epsilon(1e-15));
}

TEST_CASE("parse_mode / parse_format / parse_base") {
  CHECK(parse_mode("capacity-vs-power") == Mode::CapacityVsPower);
  CHECK(parse_mode("normalized-loss-vs-cgr") == Mode::NormalizedLossVsCgr);
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_base("bits") == Base::Bits);
  CHECK_THROWS_AS(parse_mode("limit"), UsageError);
  CHECK_THROWS_AS(parse_base("dB"), UsageError);
}

TEST_CASE("limit-vs-cgr: values, bounds and CSV round trip") {
  SweepSpec spec = default_spec(Mode::LimitVsCgr);
  const Table table = run_sweep(spec);
  CHECK(table.ok());
  REQUIRE(table.rows.size() == 31 * 4);
  CHECK(table.columns.front() == "kappa_db");
  CHECK(table.columns.back() == "status");
  for (const auto& row : table.rows) {
    const double kappa = std::get<double>(row[1]);
    const double rho = std::get<double>(row[2]);
    const double limit = std::get<double>(row[3]);
    CHECK(limit == capacity::secrecy_limit(kappa, rho));
    CHECK(std::get<double>(row[4]) <= limit * (1.0 + 1e-14));
    CHECK(limit <= std::get<double>(row[5]) * (1.0 + 1e-14));
    CHECK(std::get<std::string>(row[6]) == "ok");
  }
  const std::string csv = to_csv(table);
  CHECK(reformat_csv(csv) == csv);
}

TEST_CASE("limit-vs-cgr: bits are nats over ln 2") {
  SweepSpec nats = default_spec(Mode::LimitVsCgr);
  nats.cgr_grid = {0.1, 1.0, 10.0};
  SweepSpec bits = nats;
  bits.base = Base::Bits;
  const Table a = run_sweep(nats);
  const Table b = run_sweep(bits);
  CHECK(b.columns[3] == "c_lim_bits");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    for (std::size_t c = 3; c < 6; ++c) {
      CHECK(format_number(std::get<double>(b.rows[i][c])) ==
            format_number(std::get<double>(a.rows[i][c]) / std::numbers::ln2));
    }
  }
}

TEST_CASE("normalized-loss-vs-cgr: tends to 1 - rho at low CGR") {
  const Table table = run_sweep(default_spec(Mode::NormalizedLossVsCgr));
  CHECK(table.ok());
  for (const auto& row : table.rows) {
    const double normalized = std::get<double>(row[3]);
    const double one_minus_rho = std::get<double>(row[4]);
    CHECK(normalized >= one_minus_rho - 1e-12);
    CHECK(normalized <= 1.0);
    if (std::get<double>(row[0]) == -30.0) CHECK(std::abs(normalized - one_minus_rho) < 1e-3);
  }
}

TEST_CASE("capacity-vs-power: small grid, error rows at full correlation") {
  SweepSpec spec = default_spec(Mode::CapacityVsPower);
  spec.power_grid_db = {0.0, 20.0};
  spec.cgr_grid = {1.0};
  spec.pcc_list = {0.5, 1.0};
  const Table table = run_sweep(spec);
  REQUIRE(table.rows.size() == 4);
  CHECK(!table.ok());
  CHECK(table.row_errors[0].empty());
  CHECK(table.row_errors[1].empty());
  CHECK(!table.row_errors[2].empty());
  CHECK(std::get<double>(table.rows[1][3]) > std::get<double>(table.rows[0][3]));
  CHECK(std::get<double>(table.rows[1][3]) < std::get<double>(table.rows[1][5]));
  CHECK(std::get<std::string>(table.rows[2][3]).empty());
  CHECK(std::get<std::string>(table.rows[2].back()).rfind("error: ", 0) == 0);
}

TEST_CASE("run_sweep: identical output for any worker count") {
  SweepSpec spec = default_spec(Mode::CapacityVsPower);
  spec.power_grid_db = {0.0, 10.0, 30.0};
  spec.workers = 1;
  const std::string one = to_csv(run_sweep(spec));
  spec.workers = 3;
  CHECK(to_csv(run_sweep(spec)) == one);
}

TEST_CASE("SweepSpec validation") {
  SweepSpec spec = default_spec(Mode::LimitVsCgr);
  spec.pcc_list = {1.2};
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec = default_spec(Mode::Oracle);
  spec.pcc_list = {1.0};
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec = default_spec(Mode::Oracle);
  spec.samples = 100;
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec = default_spec(Mode::CapacityVsPower);
  spec.cgr_grid = {};
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec = default_spec(Mode::CapacityVsPower);
  spec.quadrature.relative_tolerance = -1.0;
  CHECK_THROWS_AS(spec.validate(), UsageError);
}

TEST_CASE("apply_config and spec_to_json") {
  const auto config = nlohmann::json::parse(R"({"cgr-db": "-10:10:10", "pcc": [0, 0.5], "base": "bits",
                                                "seed": 5, "rel-tol": 1e-8})");
  const SweepSpec spec = apply_config(config, default_spec(Mode::LimitVsCgr));
  REQUIRE(spec.cgr_grid.size() == 3);
  CHECK(spec.cgr_grid[0] == doctest::Approx(0.1));
  CHECK(spec.pcc_list == std::vector<double>{0.0, 0.5});
  CHECK(spec.base == Base::Bits);
  CHECK(spec.seed == 5);
  CHECK(spec.quadrature_spec().relative_tolerance == 1e-8);

  const auto j = spec_to_json(spec);
  CHECK(j["mode"] == "limit-vs-cgr");
  CHECK(j["rel-tol"] == 1e-8);
  const SweepSpec round = apply_config(j, SweepSpec{});
  CHECK(round.cgr_grid == spec.cgr_grid);
  CHECK(round.mode == spec.mode);

  CHECK_THROWS_AS(apply_config(nlohmann::json::parse(R"({"pcc": 0.5, "nope": 1})"), SweepSpec{}), UsageError);
  CHECK_THROWS_AS(apply_config(nlohmann::json::parse(R"({"seed": "x"})"), SweepSpec{}), UsageError);
  CHECK_THROWS_AS(apply_config(nlohmann::json::parse("[1]"), SweepSpec{}), UsageError);
}

TEST_CASE("to_json: document structure") {
  SweepSpec spec = default_spec(Mode::LimitVsCgr);
  spec.cgr_grid = {1.0};
  spec.pcc_list = {0.0};
  const auto doc = to_json(run_sweep(spec), spec);
  CHECK(doc["version"] == kVersion);
  CHECK(doc["spec"]["mode"] == "limit-vs-cgr");
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["c_lim_nats"].get<double>() == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(doc["rows"][0]["status"] == "ok");
}

TEST_CASE("single_point: limit fields and capacity") {
  const auto indep = single_point(channel::ChannelParams::from_cgr(1.0, 0.0), std::nullopt, {});
  CHECK(indep["limit"].get<double>() == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(indep["loss_term"].get<double>() == 0.0);
  CHECK(std::abs(indep["limit_ratio_integral"].get<double>() - std::numbers::ln2) < 1e-9);
  CHECK(!indep.contains("c_s"));

  const auto full = single_point(channel::ChannelParams::from_cgr(2.0, 1.0), std::nullopt, {}, Base::Bits);
  CHECK(full["limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(full["limit_ratio_integral"].is_null());

  const auto powered = single_point(channel::ChannelParams::from_cgr(1.0, 0.0), 10.0, {});
  CHECK(powered["p_bar_db"].get<double>() == doctest::Approx(10.0));
  CHECK(powered["c_s"].get<double>() < powered["limit"].get<double>());
  CHECK(powered["mean_power"].get<double>() == doctest::Approx(10.0).epsilon(1e-4));
}
