#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "pdem/cli.hpp"
#include "pdem/error.hpp"

using namespace pdem;

namespace {

const DeviceParams ref = DeviceParams::reference();

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

cli::SweepSpec small_sweep() {
  cli::SweepSpec spec;
  spec.e_min = ref.V0() + 0.05;
  spec.e_max = 60.0;
  spec.n_e = 25;
  spec.mu2_values = {0.0, 0.3, 3.0};
  spec.method = cli::MethodSel::Both;
  return spec;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in("# device\n g = 2.0 \nmu1=3 # deeper\n\na0=1.5\n");
  const auto o = cli::parse_config(in);
  CHECK(*o.g == 2.0);
  CHECK(*o.mu1 == 3.0);
  CHECK(!o.mu2);
  CHECK(*o.a0 == 1.5);

  std::istringstream bad_key("gamma=1\n");
  CHECK_THROWS_AS(cli::parse_config(bad_key), NumericalError);
  std::istringstream bad_value("g=1.5x\n");
  CHECK_THROWS_AS(cli::parse_config(bad_value), NumericalError);
  std::istringstream no_eq("g 1.5\n");
  CHECK_THROWS_AS(cli::parse_config(no_eq), NumericalError);
}

TEST_CASE("flags override the config file for every key") {
  using Field = std::optional<double> cli::ParamOverrides::*;
  using Getter = double (DeviceParams::*)() const;
  const std::vector<std::tuple<const char*, Field, Getter, double, double>> keys{
      {"g", &cli::ParamOverrides::g, &DeviceParams::g, 1.7, 1.9},
      {"mu1", &cli::ParamOverrides::mu1, &DeviceParams::mu1, 3.0, 5.0},
      {"mu2", &cli::ParamOverrides::mu2, &DeviceParams::mu2, 0.7, 1.1},
      {"a0", &cli::ParamOverrides::a0, &DeviceParams::a0, 2.0, 3.0}};
  for (const auto& [name, field, get, file_value, flag_value] : keys) {
    CAPTURE(name);
    cli::ParamOverrides file, flags;
    file.*field = file_value;
    CHECK((cli::resolve_params(file, flags).*get)() == file_value);
    flags.*field = flag_value;
    CHECK((cli::resolve_params(file, flags).*get)() == flag_value);
    CHECK((cli::resolve_params({}, {}).*get)() == (ref.*get)());
  }
}

TEST_CASE("number format") {
  CHECK(cli::format_number(1.0) == "1");
  CHECK(cli::format_number(-0.0) == "0");
  CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(cli::format_number(-2.5e-20) == "-2.5e-20");
  CHECK(cli::format_number(123456789.123456789) == "123456789.123");
}

TEST_CASE("sweep validation") {
  auto spec = small_sweep();
  spec.e_min = ref.V0();
  CHECK_THROWS_AS(cli::validate(spec, ref), NumericalError);
  spec = small_sweep();
  spec.n_e = 1;
  CHECK_THROWS_AS(cli::validate(spec, ref), NumericalError);
  spec = small_sweep();
  spec.mu2_values.clear();
  CHECK_THROWS_AS(cli::validate(spec, ref), NumericalError);

  spec = small_sweep();
  spec.e_min = -3.0;
  std::ostringstream csv, log;
  CHECK(cli::cmd_scatter(spec, ref, csv, log) == cli::kUsageError);
  CHECK(csv.str().empty());
}

TEST_CASE("scatter CSV is deterministic and independent of the thread count") {
  const auto spec = small_sweep();
  std::ostringstream a, b, c, log;
  CHECK(cli::cmd_scatter(spec, ref, a, log, 1) == cli::kSuccess);
  CHECK(cli::cmd_scatter(spec, ref, b, log, 1) == cli::kSuccess);
  CHECK(cli::cmd_scatter(spec, ref, c, log, 4) == cli::kSuccess);
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().find('\r') == std::string::npos);

  const auto rows = parse_csv(a.str());
  REQUIRE(rows.size() == 1 + 25 * 3 * 2);
  CHECK(rows[0] == std::vector<std::string>{"E", "mu2", "T2", "RL2", "RR2",
                                            "pseudo_unitarity_deficit", "method", "error"});
  CHECK(rows[1][6] == "analytic");
  CHECK(rows[2][6] == "oracle");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 8);
    CHECK(rows[i][7].empty());
    if (rows[i][1] == "0") CHECK(std::abs(std::stod(rows[i][5])) < 1e-8);
  }
}

TEST_CASE("one-sided sweeps leave the other reflection empty") {
  auto spec = small_sweep();
  spec.side = cli::SideSel::Left;
  spec.method = cli::MethodSel::Analytic;
  const auto rows = cli::scatter_rows(spec, ref);
  for (const auto& r : rows) {
    CHECK(r.T2);
    CHECK(r.RL2);
    CHECK(!r.RR2);
    CHECK(!r.deficit);
  }
}

TEST_CASE("scatter SVG") {
  auto spec = small_sweep();
  std::ostringstream csv, log, svg;
  CHECK(cli::cmd_scatter(spec, ref, csv, log, 2, &svg) == cli::kSuccess);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("polyline") != std::string::npos);
}

TEST_CASE("bound table") {
  std::ostringstream csv, out;
  CHECK(cli::cmd_bound(ref, csv, out) == cli::kSuccess);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"n", "E_analytic", "E_oracle", "abs_diff", "k_b",
                                            "residual", "imag_E"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) < 1e-6);

  const auto herm = cli::bound_table(ref.with_mu2(0.0));
  REQUIRE(herm.rows.size() == 2);
  for (const auto& r : herm.rows) {
    REQUIRE(r.E_analytic);
    REQUIRE(r.E_oracle);
    CHECK(std::abs(*r.E_analytic - *r.E_oracle) < 1e-6);
    CHECK(r.imag_E < 1e-8);
  }
}

TEST_CASE("shallow narrow well gives an empty table") {
  const DeviceParams shallow(5.0, 0.1, 0.3, 0.5);
  std::ostringstream csv, out;
  CHECK(cli::cmd_bound(shallow, csv, out) == cli::kSuccess);
  CHECK(csv.str() == "n,E_analytic,E_oracle,abs_diff,k_b,residual,imag_E\n");
  CHECK(cli::oracle_bound_energies(shallow).empty());
  // the same well at the reference g violates g sqrt(mu1) > 1/2
  CHECK_THROWS_AS(DeviceParams(1.5, 0.1, 0.3, 0.5), NumericalError);
}

TEST_CASE("switch command") {
  std::ostringstream csv, out;
  CHECK(cli::cmd_switch(ref, 8.0, 78, csv, out) == cli::kSuccess);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 79);
  CHECK(rows[0] == std::vector<std::string>{"mu2", "ReE0", "ImE0", "regime"});
  CHECK(rows[1][3] == "bound");
  CHECK(rows.back()[3] == "resonance");

  const auto table = cli::bound_table(ref);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(*table.rows.front().E_analytic).epsilon(1e-10));
  CHECK(out.str().find("switching mu2* = ") == 0);
  CHECK(out.str().find("regime resonance") != std::string::npos);

  std::ostringstream bad_csv, bad_out;
  CHECK(cli::cmd_switch(ref, 0.1, 10, bad_csv, bad_out) == cli::kUsageError);
}

TEST_CASE("wider devices switch earlier") {
  auto crossing = [](double a0) {
    const DeviceParams p(1.5, 4.0, 0.3, a0);
    const auto scan = analytic::switching_scan(p, cli::mu2_grid(p, 9.0, 88));
    REQUIRE(scan.crossing_mu2);
    return *scan.crossing_mu2;
  };
  const double narrow = crossing(2.0), base = crossing(2.5), wide = crossing(3.0);
  CHECK(narrow > base);
  CHECK(base > wide);
}

TEST_CASE("profile command") {
  CHECK(cli::parse_profile_kind("scatter-left")->type == cli::ProfileKind::Type::ScatterLeft);
  CHECK(cli::parse_profile_kind("scatter-right")->type == cli::ProfileKind::Type::ScatterRight);
  CHECK(cli::parse_profile_kind("bound-12")->bound_index == 12);
  CHECK(!cli::parse_profile_kind("bound-"));
  CHECK(!cli::parse_profile_kind("bound-1x"));
  CHECK(!cli::parse_profile_kind("left"));

  const cli::ProfileKind ground{cli::ProfileKind::Type::Bound, 0};
  std::ostringstream csv, log;
  CHECK(cli::cmd_profile(ref, 0.0, ground, -7.0, 7.0, 701, csv, log) == cli::kSuccess);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 702);
  CHECK(rows[0] == std::vector<std::string>{"z", "RePsi", "ImPsi", "ReV", "ImV", "m"});
  double peak = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    peak = std::max(peak, std::hypot(std::stod(rows[i][1]), std::stod(rows[i][2])));
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));

  std::ostringstream c2, l2;
  const cli::ProfileKind missing{cli::ProfileKind::Type::Bound, 7};
  CHECK(cli::cmd_profile(ref, 0.0, missing, -1.0, 1.0, 3, c2, l2) == cli::kUsageError);
  CHECK(l2.str().find("UnknownBoundIndex") != std::string::npos);
}

TEST_CASE("scattering profile columns") {
  const cli::ProfileKind left{cli::ProfileKind::Type::ScatterLeft, 0};
  const double a0 = ref.a0();
  std::ostringstream csv, log, svg;
  CHECK(cli::cmd_profile(ref, 44.0, left, a0 - 1e-6, a0 + 1e-6, 2, csv, log, &svg) ==
        cli::kSuccess);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][4]) - std::stod(rows[2][4]) == doctest::Approx(0.27854).epsilon(1e-4));
  CHECK(std::stod(rows[1][3]) == doctest::Approx(std::stod(rows[2][3])).epsilon(1e-5));
  CHECK(svg.str().rfind("<svg", 0) == 0);

  std::ostringstream below, l2;
  CHECK(cli::cmd_profile(ref, -2.0, left, -1.0, 1.0, 3, below, l2) == cli::kUsageError);
}

TEST_CASE("selftest flags a corrupted fixture") {
  const std::string path = "corrupted_hyp2f1_cases.txt";
  {
    std::ifstream in(PDEM_FIXTURE_DIR "/hyp2f1_cases.txt");
    std::ofstream out(path);
    std::string line;
    bool changed = false;
    while (std::getline(in, line)) {
      if (!changed && !line.empty() && line[0] != '#') {
        line.replace(line.rfind(' ') + 1, std::string::npos, "0.5");
        changed = true;
      }
      out << line << '\n';
    }
  }
  std::ostringstream report;
  CHECK(cli::cmd_selftest(path, report) != cli::kSuccess);
  CHECK(report.str().find("[FAIL] 10 special-function fixture") != std::string::npos);
  CHECK(report.str().find("fixture check failed") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("selftest report is reproducible") {
  std::ostringstream a, b;
  const int ca = cli::cmd_selftest(PDEM_FIXTURE_DIR "/hyp2f1_cases.txt", a);
  const int cb = cli::cmd_selftest(PDEM_FIXTURE_DIR "/hyp2f1_cases.txt", b);
  CHECK(ca == cb);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("[PASS] 10 special-function fixture") != std::string::npos);
}
