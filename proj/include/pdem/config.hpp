#pragma once

#include <cstddef>

namespace pdem {

/// Controls for the Maclaurin-series evaluation of 2F1.
struct SeriesConfig {
  double stop_ratio = 1e-15;   // |term| <= stop_ratio * |sum|, twice in a row
  double target_rel_error = 1e-14;
  std::size_t max_terms = 10000;
  double pole_tol = 1e-12;     // distance of c from a nonpositive integer
  double max_abs_y = 0.75;
};

/// Adaptive Dormand-Prince settings for the direct integration oracle.
struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 1000000;
  double initial_step = 1e-3;
  double min_step = 1e-14;
};

/// Thresholds used by the analytic matching and root-finding layer.
struct SolverConfig {
  SeriesConfig series{};
  double singular_condition = 1e12;
  double root_tol = 1e-10;        // |det| at an accepted root
  double real_root_imag_tol = 1e-8;
  std::size_t muller_max_iter = 100;
  std::size_t default_scan_points = 2000;
};

}  // namespace pdem
