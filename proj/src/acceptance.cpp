#include "pdem/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pdem/analytic.hpp"
#include "pdem/cli.hpp"
#include "pdem/error.hpp"
#include "pdem/model.hpp"
#include "pdem/oracle.hpp"

namespace pdem::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

/// E_i = V0 + (E_top - V0) i / n, i = 1..n.
std::vector<double> open_grid(const DeviceParams& p, double E_top, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(p.V0() + (E_top - p.V0()) * i / n);
  return out;
}

struct BothSides {
  ScatteringResult left;
  ScatteringResult right;
};

BothSides scatter_both(double E, const DeviceParams& p) {
  return {analytic::match_scatter(E, p, Side::Left), analytic::match_scatter(E, p, Side::Right)};
}

CriterionResult make(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

}  // namespace

std::vector<Hyp2F1Case> load_hyp2f1_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture '" + path + "'");
  std::vector<Hyp2F1Case> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double v[10];
    for (double& x : v) {
      if (!(ss >> x)) throw std::runtime_error("malformed fixture row: " + line);
    }
    out.push_back({{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}}, {v[8], v[9]}});
  }
  return out;
}

CriterionResult bound_regression(const Options&) {
  auto r = make(1, "bound-state regression");
  const auto t0 = Clock::now();
  const DeviceParams p = DeviceParams::reference();
  const double expected[] = {-8.82, -2.64, -0.70};

  cli::BoundTable table;
  try {
    table = cli::bound_table(p);
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  bool ok = table.rows.size() == 3;
  double worst_pair = 0.0;
  std::string found;
  for (const auto& row : table.rows) {
    if (!found.empty()) found += ' ';
    found += row.E_analytic ? fmt("%.6f", *row.E_analytic) : "(oracle only)";
    if (row.E_analytic && row.E_oracle) {
      worst_pair = std::max(worst_pair, std::abs(*row.E_analytic - *row.E_oracle));
    } else {
      ok = false;
    }
  }
  if (ok) {
    for (std::size_t n = 0; n < 3; ++n) {
      ok = ok && std::abs(*table.rows[n].E_analytic - expected[n]) <= 0.01;
    }
  }
  ok = ok && worst_pair < 1e-6 && seconds_since(t0) < 10.0;
  r.passed = ok;
  r.detail = std::to_string(table.rows.size()) + " states [" + found +
             "], expected [-8.82 -2.64 -0.70]; max |analytic - oracle| = " +
             fmt("%.2e", worst_pair);
  return r;
}

CriterionResult hermitian_unitarity(const Options&) {
  auto r = make(2, "hermitian-limit unitarity");
  const auto t0 = Clock::now();
  const DeviceParams p = DeviceParams::reference().with_mu2(0.0);
  double flux = 0.0, asym = 0.0;
  try {
    for (double E : open_grid(p, 60.0, 200)) {
      const auto s = scatter_both(E, p);
      for (const auto* side : {&s.left, &s.right}) {
        flux = std::max(flux, std::abs(std::norm(side->R) + std::norm(side->T) - 1.0));
      }
      asym = std::max(asym, std::abs(std::abs(s.left.R) - std::abs(s.right.R)));
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  r.passed = flux < 1e-8 && asym < 1e-10 && seconds_since(t0) < 10.0;
  r.detail = "max ||R|^2+|T|^2-1| = " + fmt("%.2e", flux) + ", max ||R_L|-|R_R|| = " +
             fmt("%.2e", asym);
  return r;
}

CriterionResult reciprocity(const Options&) {
  auto r = make(3, "transmission reciprocity");
  const DeviceParams p = DeviceParams::reference();
  double worst = 0.0;
  try {
    for (double E : open_grid(p, 60.0, 200)) {
      const auto s = scatter_both(E, p);
      worst = std::max(worst, std::abs(s.left.T - s.right.T));
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  r.passed = worst < 1e-10;
  r.detail = "max |T_L - T_R| = " + fmt("%.2e", worst);
  return r;
}

CriterionResult anomalous_reflection(const Options&) {
  auto r = make(4, "anomalous reflection");
  const DeviceParams p = DeviceParams::reference();
  const auto grid = open_grid(p, 60.0, 200);
  std::vector<double> T2;
  std::size_t anomalous = 0;
  double max_RR = 0.0;
  try {
    for (double E : grid) {
      const auto s = scatter_both(E, p);
      T2.push_back(std::norm(s.left.T));
      max_RR = std::max(max_RR, std::abs(s.right.R));
      if (std::abs(s.left.R) < 1.0 && std::abs(s.right.R) > 1.0) ++anomalous;
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  bool monotone = true;
  for (std::size_t i = T2.size() - 10; i < T2.size(); ++i) {
    monotone = monotone && T2[i] > T2[i - 1] && std::abs(1.0 - T2[i]) < std::abs(1.0 - T2[i - 1]);
  }
  r.passed = anomalous > 0 && monotone;
  r.detail = std::to_string(anomalous) + " grid points with |R_L|<1<|R_R| (max |R_R| = " +
             fmt("%.4f", max_RR) + "); |T|^2 monotone toward 1 at high E: " +
             (monotone ? "yes" : "no");
  return r;
}

CriterionResult transmission_dip(const Options&) {
  auto r = make(5, "large-mu2 transmission dip");
  const DeviceParams p = DeviceParams::reference().with_mu2(3.0);
  std::vector<double> T2;
  try {
    for (double E : open_grid(p, 60.0, 200)) {
      T2.push_back(std::norm(analytic::match_scatter(E, p, Side::Left).T));
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  const double lo_end = T2.front(), hi_end = T2.back();
  std::optional<double> best;
  for (std::size_t i = 1; i + 1 < T2.size(); ++i) {
    if (T2[i] < T2[i - 1] && T2[i] <= T2[i + 1]) {
      if (!best || T2[i] < *best) best = T2[i];
    }
  }
  r.passed = best && *best < lo_end && *best < hi_end;
  r.detail = "deepest interior minimum |T|^2 = " + (best ? fmt("%.4f", *best) : std::string("none")) +
             ", endpoints " + fmt("%.4f", lo_end) + " / " + fmt("%.4f", hi_end);
  return r;
}

CriterionResult no_spectral_singularity(const Options&) {
  auto r = make(6, "no spectral singularity");
  double worst_cond = 0.0, largest = 0.0;
  bool finite = true;
  try {
    for (double mu2 : {0.0, 0.3, 1.0, 3.0, 5.0}) {
      const DeviceParams p = DeviceParams::reference().with_mu2(mu2);
      for (double E : open_grid(p, 100.0, 200)) {
        const auto s = scatter_both(E, p);
        for (const auto* side : {&s.left, &s.right}) {
          const double vals[] = {std::norm(side->T), std::norm(side->R)};
          for (double v : vals) {
            finite = finite && std::isfinite(v);
            largest = std::max(largest, v);
          }
          worst_cond = std::max(worst_cond, side->condition_estimate);
        }
      }
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  r.passed = finite && worst_cond < 1e10;
  r.detail = std::string("all finite: ") + (finite ? "yes" : "no") + ", largest coefficient " +
             fmt("%.4g", largest) + ", worst condition " + fmt("%.3g", worst_cond);
  return r;
}

CriterionResult pseudo_unitarity_failure(const Options&) {
  auto r = make(7, "pseudo-unitarity failure");
  const DeviceParams p = DeviceParams::reference();
  double worst = 0.0;
  try {
    for (double E : open_grid(p, 60.0, 200)) {
      const auto s = scatter_both(E, p);
      worst = std::max(worst,
                       std::abs(std::norm(s.left.T) + std::abs(s.left.R) * std::abs(s.right.R) - 1.0));
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  r.passed = worst > 1e-3;
  r.detail = "max ||T|^2 + |R_L||R_R| - 1| = " + fmt("%.4e", worst);
  return r;
}

CriterionResult switching_point(const Options&) {
  auto r = make(8, "switching point");
  const auto t0 = Clock::now();
  const DeviceParams p = DeviceParams::reference();
  analytic::SwitchScan scan;
  try {
    scan = analytic::switching_scan(p, cli::mu2_grid(p, 80.0, 800));
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  if (!scan.crossing_mu2) {
    r.detail = "no zero crossing of Re E0 on [0.3, 80]" + (scan.lost ? "; " + scan.message : "");
    return r;
  }
  const double mu2s = *scan.crossing_mu2;
  const bool resonance = *scan.crossing_regime == analytic::Regime::Resonance;
  r.passed = std::abs(mu2s - 65.87) <= 0.05 * 65.87 && seconds_since(t0) < 120.0;
  r.detail = "mu2* = " + fmt("%.4f", mu2s) + " (expected 65.87 +- 5%), regime " +
             (resonance ? "resonance" : "bound") + ", E0 = " + fmt("%.4f", scan.crossing_E0->real()) +
             (scan.crossing_E0->imag() < 0 ? " - " : " + ") +
             fmt("%.4f", std::abs(scan.crossing_E0->imag())) + "i";
  return r;
}

CriterionResult oracle_equivalence(const Options&) {
  auto r = make(9, "oracle equivalence");
  double worst_R = 0.0, worst_T = 0.0;
  try {
    for (double mu2 : {0.0, 0.3, 1.0, 3.0, 5.0}) {
      const DeviceParams p = DeviceParams::reference().with_mu2(mu2);
      for (double E : open_grid(p, 60.0, 50)) {
        for (Side side : {Side::Left, Side::Right}) {
          const auto a = analytic::match_scatter(E, p, side);
          const auto o = oracle::scatter_numeric(E, p, side);
          worst_R = std::max(worst_R, std::abs(a.R - o.R));
          worst_T = std::max(worst_T, std::abs(a.T - o.T));
        }
      }
    }
  } catch (const NumericalError& e) {
    r.detail = e.what();
    return r;
  }
  r.passed = worst_R < 1e-6 && worst_T < 1e-6;
  r.detail = "max |dR| = " + fmt("%.2e", worst_R) + ", max |dT| = " + fmt("%.2e", worst_T);
  return r;
}

CriterionResult special_function_fixture(const Options& opts) {
  auto r = make(10, "special-function fixture");
  std::vector<Hyp2F1Case> cases;
  try {
    cases = load_hyp2f1_cases(opts.fixture_path);
  } catch (const std::exception& e) {
    r.detail = std::string("fixture check failed: ") + e.what();
    return r;
  }
  double worst_fix = 0.0;
  std::size_t worst_row = 0;
  try {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto F = specfun::hyp2f1(cases[i].params);
      const double rel = std::abs(F - cases[i].expected) / std::abs(cases[i].expected);
      if (!(rel <= worst_fix)) {
        worst_fix = rel;
        worst_row = i;
      }
    }
  } catch (const NumericalError& e) {
    r.detail = std::string("fixture check failed: ") + e.what();
    return r;
  }

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> par(-2.0, 2.0), cre(0.5, 3.0), rad(0.0, 0.7),
      ang(0.0, 6.283185307179586);
  const double h = 1e-6;
  double worst_fd = 0.0;
  try {
    for (int k = 0; k < 100; ++k) {
      specfun::Hyp2F1Params q{{par(rng), par(rng)}, {par(rng), par(rng)}, {cre(rng), par(rng)}, {}};
      q.y = std::polar(rad(rng), ang(rng));
      auto at = [&](specfun::cplx y) {
        auto s = q;
        s.y = y;
        return specfun::hyp2f1(s);
      };
      const auto fd = (at(q.y + h) - at(q.y - h)) / (2.0 * h);
      const auto d = specfun::hyp2f1_deriv(q);
      worst_fd = std::max(worst_fd, std::abs(fd - d) / (1.0 + std::abs(d)));
    }
  } catch (const NumericalError& e) {
    r.detail = std::string("derivative check failed: ") + e.what();
    return r;
  }
  const bool fix_ok = cases.size() == 50 && worst_fix <= 1e-12;
  r.passed = fix_ok && worst_fd <= 1e-6;
  r.detail = std::to_string(cases.size()) + " fixture cases, worst relative error " +
             fmt("%.2e", worst_fix) + " (row " + std::to_string(worst_row + 1) +
             "); derivative vs finite difference worst " + fmt("%.2e", worst_fd);
  if (!fix_ok) r.detail += "; fixture check failed";
  return r;
}

std::vector<CriterionResult> run_all(const Options& opts) {
  return {bound_regression(opts),       hermitian_unitarity(opts),
          reciprocity(opts),            anomalous_reflection(opts),
          transmission_dip(opts),       no_spectral_singularity(opts),
          pseudo_unitarity_failure(opts), switching_point(opts),
          oracle_equivalence(opts),     special_function_fixture(opts)};
}

void print_report(std::ostream& out, const std::vector<CriterionResult>& results) {
  std::size_t passed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail << '\n';
    passed += r.passed ? 1 : 0;
  }
  out << passed << " of " << results.size() << " criteria passed\n";
}

}  // namespace pdem::acceptance
