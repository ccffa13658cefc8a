#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pdem/cli.hpp"
#include "pdem/error.hpp"

#ifndef PDEM_FIXTURE_DIR
#define PDEM_FIXTURE_DIR "tests/fixtures"
#endif

namespace {

using namespace pdem;

struct Common {
  std::string config;
  cli::ParamOverrides flags;
  std::string out;
  std::string svg;
  std::string method = "analytic";
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--config", c.config, "key=value file with g, mu1, mu2, a0");
  app.add_option("--g", c.flags.g, "mass-profile constant g");
  app.add_option("--mu1", c.flags.mu1, "well depth mu1");
  app.add_option("--mu2", c.flags.mu2, "non-Hermiticity strength mu2");
  app.add_option("--a0", c.flags.a0, "device half-width a0");
  app.add_option("--out", c.out, "CSV output path (default: stdout)");
  app.add_option("--method", c.method, "analytic|oracle|both")
      ->check(CLI::IsMember({"analytic", "oracle", "both"}));
  app.add_option("--svg", c.svg, "also write an SVG chart to this path");
}

DeviceParams load_params(const Common& c) {
  cli::ParamOverrides file;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw NumericalError(ErrorKind::InvalidParams, "cannot open config '" + c.config + "'");
    file = cli::parse_config(in);
  }
  return cli::resolve_params(file, c.flags);
}

/// Owns an optional file stream; falls back to `fallback` when path is empty.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;

  Sink(const std::string& path, std::ostream* fallback) : stream(fallback) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw NumericalError(ErrorKind::InvalidParams, "cannot write '" + path + "'");
    stream = file.get();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering and bound states of a PT-symmetric position-dependent-mass device"};
  app.require_subcommand(1);
  Common common;

  auto* scatter = app.add_subcommand("scatter", "sweep |T|^2, |R_L|^2, |R_R|^2 over energy and mu2");
  add_common(*scatter, common);
  std::optional<double> e_min;
  double e_max = 60.0;
  std::size_t n_e = 200;
  std::vector<double> mu2_list;
  std::string side = "both";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  scatter->add_option("--e-min", e_min, "lowest energy (default: first point above V0)");
  scatter->add_option("--e-max", e_max, "highest energy")->capture_default_str();
  scatter->add_option("--n-e", n_e, "number of energies")->capture_default_str();
  scatter->add_option("--mu2-list", mu2_list, "mu2 values (default: the device mu2)")
      ->delimiter(',');
  scatter->add_option("--side", side, "left|right|both")
      ->check(CLI::IsMember({"left", "right", "both"}))
      ->capture_default_str();
  scatter->add_option("--threads", threads, "worker threads");

  auto* bound = app.add_subcommand("bound", "bound-state table from both methods");
  add_common(*bound, common);

  auto* sw = app.add_subcommand("switch", "track the ground state in mu2");
  add_common(*sw, common);
  double mu2_max = 80.0;
  std::size_t n_mu2 = 800;
  sw->add_option("--mu2-max", mu2_max, "upper end of the mu2 grid")->capture_default_str();
  sw->add_option("--n-mu2", n_mu2, "number of mu2 points")->capture_default_str();

  auto* prof = app.add_subcommand("profile", "wavefunction, potential and mass along z");
  add_common(*prof, common);
  double E = 44.0, z_min = -6.0, z_max = 6.0;
  std::size_t n_z = 601;
  std::string kind_text = "scatter-left";
  prof->add_option("--E", E, "energy for scattering profiles")->capture_default_str();
  prof->add_option("--kind", kind_text, "scatter-left|scatter-right|bound-N")->capture_default_str();
  prof->add_option("--z-min", z_min)->capture_default_str();
  prof->add_option("--z-max", z_max)->capture_default_str();
  prof->add_option("--n-z", n_z)->capture_default_str();

  auto* self = app.add_subcommand("selftest", "run the acceptance checks");
  std::string fixture = std::string(PDEM_FIXTURE_DIR) + "/hyp2f1_cases.txt";
  self->add_option("--fixture", fixture, "2F1 reference table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsageError;
  }

  try {
    if (self->parsed()) return cli::cmd_selftest(fixture, std::cout);

    const DeviceParams p = load_params(common);
    Sink csv(common.out, &std::cout);
    Sink svg(common.svg, nullptr);

    if (scatter->parsed()) {
      cli::SweepSpec spec;
      spec.e_min = e_min ? *e_min : p.V0() + (e_max - p.V0()) / static_cast<double>(n_e);
      spec.e_max = e_max;
      spec.n_e = n_e;
      spec.mu2_values = mu2_list.empty() ? std::vector<double>{p.mu2()} : mu2_list;
      spec.side = side == "left" ? cli::SideSel::Left
                  : side == "right" ? cli::SideSel::Right
                                    : cli::SideSel::Both;
      spec.method = common.method == "oracle" ? cli::MethodSel::Oracle
                    : common.method == "both" ? cli::MethodSel::Both
                                              : cli::MethodSel::Analytic;
      spec.output_path = common.out;
      return cli::cmd_scatter(spec, p, *csv.stream, std::cerr, threads, svg.stream);
    }
    if (bound->parsed()) {
      std::ostream& table_out = common.out.empty() ? std::cerr : std::cout;
      return cli::cmd_bound(p, *csv.stream, table_out);
    }
    if (sw->parsed()) {
      return cli::cmd_switch(p, mu2_max, n_mu2, *csv.stream, std::cerr, svg.stream);
    }
    if (prof->parsed()) {
      const auto kind = cli::parse_profile_kind(kind_text);
      if (!kind) {
        std::cerr << "unknown profile kind '" << kind_text << "'\n";
        return cli::kUsageError;
      }
      return cli::cmd_profile(p, E, *kind, z_min, z_max, n_z, *csv.stream, std::cerr, svg.stream);
    }
  } catch (const NumericalError& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidParams ? cli::kUsageError : cli::kNumericalFailure;
  }
  return cli::kUsageError;
}
