#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdem/analytic.hpp"
#include "pdem/model.hpp"

namespace pdem::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNumericalFailure = 2,
  kPartialResults = 3,
};

/// Device constants as read from a config file or flags; unset keys fall
/// through to the next source.
struct ParamOverrides {
  std::optional<double> g;
  std::optional<double> mu1;
  std::optional<double> mu2;
  std::optional<double> a0;
};

/// Parses `key=value` lines (keys g, mu1, mu2, a0). `#` starts a comment.
/// Throws NumericalError(InvalidParams) on unknown keys or malformed values.
ParamOverrides parse_config(std::istream& in);

/// flags > file > reference device.
DeviceParams resolve_params(const ParamOverrides& file, const ParamOverrides& flags);

/// Fixed CSV number format: 12 significant digits, '.' separator.
std::string format_number(double x);

enum class SideSel { Left, Right, Both };
enum class MethodSel { Analytic, Oracle, Both };

struct SweepSpec {
  double e_min = 0.0;
  double e_max = 0.0;
  std::size_t n_e = 2;
  std::vector<double> mu2_values;
  SideSel side = SideSel::Both;
  MethodSel method = MethodSel::Analytic;
  std::string output_path;
};

/// Throws NumericalError(InvalidParams) when e_min <= V0, n_e < 2 or the
/// mu2 list is empty.
void validate(const SweepSpec& spec, const DeviceParams& p);

/// Uniform energy grid from e_min to e_max inclusive.
std::vector<double> energy_grid(const SweepSpec& spec);

struct ScatterRow {
  double E = 0.0;
  double mu2 = 0.0;
  std::optional<double> T2;
  std::optional<double> RL2;
  std::optional<double> RR2;
  std::optional<double> deficit;  // |T|^2 + |R_L||R_R| - 1
  Method method = Method::Analytic;
  std::string error;
};

/// Evaluates the sweep, E-major and mu2-minor, analytic before oracle.
/// Points are independent and spread over `threads` workers; the result
/// does not depend on the thread count.
std::vector<ScatterRow> scatter_rows(const SweepSpec& spec, const DeviceParams& p,
                                     unsigned threads = 1);

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows);

int cmd_scatter(const SweepSpec& spec, const DeviceParams& p, std::ostream& csv,
                std::ostream& log, unsigned threads = 1, std::ostream* svg = nullptr);

struct BoundRow {
  std::size_t n = 0;
  std::optional<double> E_analytic;
  std::optional<double> E_oracle;
  double k_b = 0.0;
  double residual = 0.0;
  double imag_E = 0.0;
};

struct BoundTable {
  std::vector<BoundRow> rows;
  std::vector<std::string> log;
};

/// Bound states from both methods, paired by proximity. The oracle scans
/// its own mismatch function for sign changes; it does not reuse the
/// analytic roots.
BoundTable bound_table(const DeviceParams& p);

/// Real energies where the oracle mismatch changes sign, refined.
std::vector<double> oracle_bound_energies(const DeviceParams& p, std::size_t n_scan = 400);

int cmd_bound(const DeviceParams& p, std::ostream& csv, std::ostream& out);

/// Uniform grid from p.mu2() to mu2_max with n_mu2 points.
std::vector<double> mu2_grid(const DeviceParams& p, double mu2_max, std::size_t n_mu2);

int cmd_switch(const DeviceParams& p, double mu2_max, std::size_t n_mu2, std::ostream& csv,
               std::ostream& out, std::ostream* svg = nullptr);

struct ProfileKind {
  enum class Type { ScatterLeft, ScatterRight, Bound } type = Type::ScatterLeft;
  std::size_t bound_index = 0;
};

/// Parses "scatter-left", "scatter-right" or "bound-N".
std::optional<ProfileKind> parse_profile_kind(const std::string& text);

int cmd_profile(const DeviceParams& p, double E, const ProfileKind& kind, double z_min,
                double z_max, std::size_t n_z, std::ostream& csv, std::ostream& log,
                std::ostream* svg = nullptr);

int cmd_selftest(const std::string& fixture_path, std::ostream& out);

}  // namespace pdem::cli
