#include "pdem/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "pdem/acceptance.hpp"
#include "pdem/error.hpp"
#include "pdem/oracle.hpp"
#include "pdem/roots.hpp"
#include "pdem/svg.hpp"

namespace pdem::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw NumericalError(ErrorKind::InvalidParams, "bad value for " + key + ": '" + text + "'");
  }
  return v;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

const char* method_name(Method m) { return m == Method::Analytic ? "analytic" : "oracle"; }

}  // namespace

ParamOverrides parse_config(std::istream& in) {
  ParamOverrides out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw NumericalError(ErrorKind::InvalidParams,
                           "config line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const double value = parse_double(trim(line.substr(eq + 1)), key);
    if (key == "g") out.g = value;
    else if (key == "mu1") out.mu1 = value;
    else if (key == "mu2") out.mu2 = value;
    else if (key == "a0") out.a0 = value;
    else throw NumericalError(ErrorKind::InvalidParams, "unknown config key '" + key + "'");
  }
  return out;
}

DeviceParams resolve_params(const ParamOverrides& file, const ParamOverrides& flags) {
  const DeviceParams ref = DeviceParams::reference();
  auto pick = [](const std::optional<double>& flag, const std::optional<double>& f, double d) {
    return flag ? *flag : (f ? *f : d);
  };
  return {pick(flags.g, file.g, ref.g()), pick(flags.mu1, file.mu1, ref.mu1()),
          pick(flags.mu2, file.mu2, ref.mu2()), pick(flags.a0, file.a0, ref.a0())};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void validate(const SweepSpec& spec, const DeviceParams& p) {
  if (!(spec.e_min > p.V0())) {
    throw NumericalError(ErrorKind::InvalidParams,
                         "e_min must exceed V0 = " + format_number(p.V0()));
  }
  if (!(spec.e_max >= spec.e_min)) {
    throw NumericalError(ErrorKind::InvalidParams, "e_max must not be below e_min");
  }
  if (spec.n_e < 2) throw NumericalError(ErrorKind::InvalidParams, "n_e must be at least 2");
  if (spec.mu2_values.empty()) {
    throw NumericalError(ErrorKind::InvalidParams, "mu2 list is empty");
  }
}

std::vector<double> energy_grid(const SweepSpec& spec) {
  std::vector<double> out(spec.n_e);
  for (std::size_t i = 0; i < spec.n_e; ++i) {
    out[i] = spec.e_min + (spec.e_max - spec.e_min) * static_cast<double>(i) /
                              static_cast<double>(spec.n_e - 1);
  }
  return out;
}

std::vector<ScatterRow> scatter_rows(const SweepSpec& spec, const DeviceParams& p,
                                     unsigned threads) {
  validate(spec, p);
  const std::vector<double> Es = energy_grid(spec);
  std::vector<Method> methods;
  if (spec.method != MethodSel::Oracle) methods.push_back(Method::Analytic);
  if (spec.method != MethodSel::Analytic) methods.push_back(Method::NumericOracle);

  const std::size_t per_e = spec.mu2_values.size() * methods.size();
  std::vector<ScatterRow> rows(Es.size() * per_e);

  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t ie = idx / per_e;
    const std::size_t rem = idx % per_e;
    const double mu2 = spec.mu2_values[rem / methods.size()];
    const Method method = methods[rem % methods.size()];

    ScatterRow row;
    row.E = Es[ie];
    row.mu2 = mu2;
    row.method = method;
    try {
      const DeviceParams dev = p.with_mu2(mu2);
      auto solve = [&](Side side) {
        return method == Method::Analytic ? analytic::match_scatter(row.E, dev, side)
                                          : oracle::scatter_numeric(row.E, dev, side);
      };
      std::optional<ScatteringResult> left, right;
      if (spec.side != SideSel::Right) left = solve(Side::Left);
      if (spec.side != SideSel::Left) right = solve(Side::Right);
      const ScatteringResult& t_src = left ? *left : *right;
      row.T2 = std::norm(t_src.T);
      if (left) row.RL2 = std::norm(left->R);
      if (right) row.RR2 = std::norm(right->R);
      if (left && right) row.deficit = *row.T2 + std::abs(left->R) * std::abs(right->R) - 1.0;
    } catch (const NumericalError& e) {
      row.error = e.what();
    }
    rows[idx] = std::move(row);
  });
  return rows;
}

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows) {
  out << "E,mu2,T2,RL2,RR2,pseudo_unitarity_deficit,method,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << format_number(r.E) << ',' << format_number(r.mu2) << ',' << opt(r.T2) << ','
        << opt(r.RL2) << ',' << opt(r.RR2) << ',' << opt(r.deficit) << ','
        << method_name(r.method) << ',' << err << '\n';
  }
}

int cmd_scatter(const SweepSpec& spec, const DeviceParams& p, std::ostream& csv,
                std::ostream& log, unsigned threads, std::ostream* svg_out) {
  try {
    validate(spec, p);
  } catch (const NumericalError& e) {
    log << e.what() << '\n';
    return kUsageError;
  }
  const auto rows = scatter_rows(spec, p, threads);
  write_scatter_csv(csv, rows);

  const auto failures = std::count_if(rows.begin(), rows.end(),
                                      [](const ScatterRow& r) { return !r.error.empty(); });
  if (svg_out) {
    svg::LineChart chart{"scattering coefficients, mu2 = " + format_number(spec.mu2_values.front()),
                         "E", "coefficient", {}};
    svg::Series t2{"|T|^2", {}, {}}, rl{"|R_L|^2", {}, {}}, rr{"|R_R|^2", {}, {}};
    for (const auto& r : rows) {
      if (r.mu2 != spec.mu2_values.front() || !r.error.empty()) continue;
      if (r.method != (spec.method == MethodSel::Oracle ? Method::NumericOracle : Method::Analytic))
        continue;
      auto push = [&](svg::Series& s, const std::optional<double>& v) {
        if (v) { s.x.push_back(r.E); s.y.push_back(*v); }
      };
      push(t2, r.T2);
      push(rl, r.RL2);
      push(rr, r.RR2);
    }
    for (auto* s : {&t2, &rl, &rr}) {
      if (!s->x.empty()) chart.series.push_back(*s);
    }
    *svg_out << svg::render(chart);
  }
  if (failures > 0) {
    log << failures << " of " << rows.size() << " points failed; see the error column\n";
    return kPartialResults;
  }
  return kSuccess;
}

std::vector<double> oracle_bound_energies(const DeviceParams& p, std::size_t n_scan) {
  const double lo = -2.0 * p.mu1();
  const double hi = p.V0() - 1e-6;
  std::vector<double> Es(n_scan), D(n_scan);
  for (std::size_t i = 0; i < n_scan; ++i) {
    Es[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_scan - 1);
    D[i] = oracle::bound_mismatch(Es[i], p).real();
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < n_scan; ++i) {
    if ((D[i] > 0.0) == (D[i + 1] > 0.0) && D[i] != 0.0) continue;
    out.push_back(oracle::bound_numeric(p, {Es[i], Es[i + 1]}));
  }
  return out;
}

BoundTable bound_table(const DeviceParams& p) {
  BoundTable table;
  const analytic::BoundSearch search = analytic::find_bound_states(p);
  table.log = search.log;

  std::vector<double> oracle_roots;
  try {
    oracle_roots = oracle_bound_energies(p);
  } catch (const NumericalError& e) {
    table.log.push_back(std::string("oracle scan failed: ") + e.what());
  }
  std::vector<bool> used(oracle_roots.size(), false);

  for (const auto& st : search.states) {
    BoundRow row;
    row.E_analytic = st.E;
    row.k_b = st.k_b;
    row.residual = st.residual;
    row.imag_E = st.imag_E;
    std::size_t best = oracle_roots.size();
    for (std::size_t j = 0; j < oracle_roots.size(); ++j) {
      if (used[j] || std::abs(oracle_roots[j] - st.E) > 1e-3) continue;
      if (best == oracle_roots.size() ||
          std::abs(oracle_roots[j] - st.E) < std::abs(oracle_roots[best] - st.E))
        best = j;
    }
    if (best < oracle_roots.size()) {
      used[best] = true;
      row.E_oracle = oracle_roots[best];
    } else {
      table.log.push_back("no oracle root near analytic E = " + format_number(st.E));
    }
    table.rows.push_back(row);
  }
  for (std::size_t j = 0; j < oracle_roots.size(); ++j) {
    if (used[j]) continue;
    table.log.push_back("oracle root without analytic partner at E = " +
                        format_number(oracle_roots[j]));
    BoundRow row;
    row.E_oracle = oracle_roots[j];
    row.k_b = std::sqrt(2.0 * p.m0() * (p.V0() - oracle_roots[j]));
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const BoundRow& a, const BoundRow& b) {
    return a.E_analytic.value_or(*a.E_oracle) < b.E_analytic.value_or(*b.E_oracle);
  });
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].n = i;
  return table;
}

int cmd_bound(const DeviceParams& p, std::ostream& csv, std::ostream& out) {
  BoundTable table;
  try {
    table = bound_table(p);
  } catch (const NumericalError& e) {
    out << e.what() << '\n';
    return kNumericalFailure;
  }
  csv << "n,E_analytic,E_oracle,abs_diff,k_b,residual,imag_E\n";
  char line[200];
  std::snprintf(line, sizeof line, "%3s %18s %18s %10s %10s %10s\n", "n", "E_analytic", "E_oracle",
                "|diff|", "k_b", "residual");
  out << line;
  bool paired = true;
  for (const auto& r : table.rows) {
    std::optional<double> diff;
    if (r.E_analytic && r.E_oracle) diff = std::abs(*r.E_analytic - *r.E_oracle);
    else paired = false;
    csv << r.n << ',' << opt(r.E_analytic) << ',' << opt(r.E_oracle) << ',' << opt(diff) << ','
        << format_number(r.k_b) << ',' << format_number(r.residual) << ','
        << format_number(r.imag_E) << '\n';
    char diff_text[32] = "-";
    if (diff) std::snprintf(diff_text, sizeof diff_text, "%.3g", *diff);
    std::snprintf(line, sizeof line, "%3zu %18s %18s %10s %10.4g %10.3g\n", r.n,
                  opt(r.E_analytic).c_str(), opt(r.E_oracle).c_str(), diff_text, r.k_b,
                  r.residual);
    out << line;
  }
  if (table.rows.empty()) out << "no bound states below V0 = " << format_number(p.V0()) << '\n';
  for (const auto& l : table.log) out << "note: " << l << '\n';
  return paired ? kSuccess : kPartialResults;
}

std::vector<double> mu2_grid(const DeviceParams& p, double mu2_max, std::size_t n_mu2) {
  if (!(mu2_max > p.mu2()) || n_mu2 < 2) {
    throw NumericalError(ErrorKind::InvalidParams, "need mu2_max > mu2 and at least two points");
  }
  std::vector<double> out(n_mu2);
  for (std::size_t i = 0; i < n_mu2; ++i) {
    out[i] = p.mu2() + (mu2_max - p.mu2()) * static_cast<double>(i) / static_cast<double>(n_mu2 - 1);
  }
  return out;
}

int cmd_switch(const DeviceParams& p, double mu2_max, std::size_t n_mu2, std::ostream& csv,
               std::ostream& out, std::ostream* svg_out) {
  std::vector<double> grid;
  try {
    grid = mu2_grid(p, mu2_max, n_mu2);
  } catch (const NumericalError& e) {
    out << e.what() << '\n';
    return kUsageError;
  }
  analytic::SwitchScan scan;
  try {
    scan = analytic::switching_scan(p, grid);
  } catch (const NumericalError& e) {
    out << e.what() << '\n';
    return kNumericalFailure;
  }

  csv << "mu2,ReE0,ImE0,regime\n";
  for (const auto& pt : scan.points) {
    csv << format_number(pt.mu2) << ',' << format_number(pt.E0.real()) << ','
        << format_number(pt.E0.imag()) << ','
        << (pt.regime == analytic::Regime::Bound ? "bound" : "resonance") << '\n';
  }
  if (svg_out) {
    svg::Series re{"Re E0", {}, {}}, im{"Im E0", {}, {}};
    for (const auto& pt : scan.points) {
      re.x.push_back(pt.mu2);
      re.y.push_back(pt.E0.real());
      im.x.push_back(pt.mu2);
      im.y.push_back(pt.E0.imag());
    }
    *svg_out << svg::render({"ground state vs mu2", "mu2", "E0", {re, im}});
  }

  if (scan.points.empty()) {
    out << scan.message << '\n';
    return kNumericalFailure;
  }
  if (scan.crossing_mu2) {
    out << "switching mu2* = " << format_number(*scan.crossing_mu2) << " (regime "
        << (*scan.crossing_regime == analytic::Regime::Bound ? "bound" : "resonance")
        << ", E0 = " << format_number(scan.crossing_E0->real())
        << (scan.crossing_E0->imag() < 0 ? " - " : " + ")
        << format_number(std::abs(scan.crossing_E0->imag())) << "i)\n";
  } else {
    out << "no sign change of Re E0 on [" << format_number(grid.front()) << ", "
        << format_number(grid.back()) << "]\n";
  }
  if (scan.lost) {
    out << scan.message << '\n';
    return kPartialResults;
  }
  return kSuccess;
}

std::optional<ProfileKind> parse_profile_kind(const std::string& text) {
  if (text == "scatter-left") return ProfileKind{ProfileKind::Type::ScatterLeft, 0};
  if (text == "scatter-right") return ProfileKind{ProfileKind::Type::ScatterRight, 0};
  const std::string prefix = "bound-";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    std::size_t n = 0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc{} && ptr == last) return ProfileKind{ProfileKind::Type::Bound, n};
  }
  return std::nullopt;
}

int cmd_profile(const DeviceParams& p, double E, const ProfileKind& kind, double z_min,
                double z_max, std::size_t n_z, std::ostream& csv, std::ostream& log,
                std::ostream* svg_out) {
  if (n_z < 2 || !(z_max > z_min)) {
    log << "need z_max > z_min and at least two points\n";
    return kUsageError;
  }
  std::vector<double> z(n_z);
  for (std::size_t i = 0; i < n_z; ++i) {
    z[i] = z_min + (z_max - z_min) * static_cast<double>(i) / static_cast<double>(n_z - 1);
  }

  std::vector<WaveSample> samples;
  std::string title;
  try {
    if (kind.type == ProfileKind::Type::Bound) {
      const auto search = analytic::find_bound_states(p);
      if (kind.bound_index >= search.states.size()) {
        throw NumericalError(ErrorKind::UnknownBoundIndex,
                             "bound state " + std::to_string(kind.bound_index) + " does not exist (" +
                                 std::to_string(search.states.size()) + " found)");
      }
      const BoundState& st = search.states[kind.bound_index];
      samples = analytic::profile(st, p, z);
      title = "bound state " + std::to_string(kind.bound_index) + ", E = " + format_number(st.E);
    } else {
      const Side side = kind.type == ProfileKind::Type::ScatterLeft ? Side::Left : Side::Right;
      const auto res = analytic::match_scatter(E, p, side);
      samples = analytic::profile(res, p, z);
      title = std::string("scattering from the ") + (side == Side::Left ? "left" : "right") +
              ", E = " + format_number(E);
    }
  } catch (const NumericalError& e) {
    log << e.what() << '\n';
    if (e.kind() == ErrorKind::UnknownBoundIndex || e.kind() == ErrorKind::DomainError)
      return kUsageError;
    return kNumericalFailure;
  }

  csv << "z,RePsi,ImPsi,ReV,ImV,m\n";
  for (const auto& s : samples) {
    const cplx V = potential(s.z, p);
    csv << format_number(s.z) << ',' << format_number(s.psi.real()) << ','
        << format_number(s.psi.imag()) << ',' << format_number(V.real()) << ','
        << format_number(V.imag()) << ',' << format_number(mass(s.z, p)) << '\n';
  }
  if (svg_out) {
    svg::Series re{"Re psi", {}, {}}, im{"Im psi", {}, {}};
    for (const auto& s : samples) {
      re.x.push_back(s.z);
      re.y.push_back(s.psi.real());
      im.x.push_back(s.z);
      im.y.push_back(s.psi.imag());
    }
    *svg_out << svg::render({title, "z", "psi", {re, im}});
  }
  return kSuccess;
}

int cmd_selftest(const std::string& fixture_path, std::ostream& out) {
  acceptance::Options opts;
  opts.fixture_path = fixture_path;
  const auto results = acceptance::run_all(opts);
  acceptance::print_report(out, results);
  const bool ok = std::all_of(results.begin(), results.end(),
                              [](const acceptance::CriterionResult& r) { return r.passed; });
  return ok ? kSuccess : kNumericalFailure;
}

}  // namespace pdem::cli
