#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>

#include "pdem/analytic.hpp"
#include "pdem/config.hpp"
#include "pdem/model.hpp"

namespace pdem::oracle {

/// (psi, v) with v = psi'/m. Both components are continuous everywhere.
struct State {
  cplx psi{};
  cplx v{};
};

/// Potential and mass seen by the integrator. The device profile uses the
/// interior formulas on the closed interval [-a0, a0] so that the last
/// Runge-Kutta stage at a junction sees the one-sided limit.
struct Profile {
  std::function<cplx(double)> potential;
  std::function<double(double)> mass;
};

Profile device_profile(const DeviceParams& p);

struct PropagateStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Integrates psi' = m v, v' = 2 (V - E) psi from `from` to `to` with an
/// adaptive Dormand-Prince 5(4) scheme. Either direction is allowed.
State propagate(double E, const Profile& profile, double from, double to, State start,
                const IntegratorConfig& cfg = {}, PropagateStats* stats = nullptr);

/// Device version; requires [from, to] inside [-a0, a0].
State propagate(double E, const DeviceParams& p, double from, double to, State start,
                const IntegratorConfig& cfg = {});

/// Maps (psi, v) at -a0 to (psi, v) at +a0; columns are the images of
/// (1, 0) and (0, 1).
struct Transfer {
  State from_unit_psi;
  State from_unit_v;
};
Transfer interior_transfer(double E, const DeviceParams& p, const IntegratorConfig& cfg = {});

ScatteringResult scatter_numeric(double E, const DeviceParams& p, Side side,
                                 const IntegratorConfig& cfg = {});

/// v(a0) + (k_b/m0) psi(a0) for the solution that decays to the left.
/// Real for real E when the potential is PT symmetric; the imaginary part
/// is integration noise.
cplx bound_mismatch(double E, const DeviceParams& p, const IntegratorConfig& cfg = {});

/// Shooting on Re bound_mismatch over the bracket. Throws NoSignChange.
double bound_numeric(const DeviceParams& p, std::pair<double, double> bracket,
                     const IntegratorConfig& cfg = {});

}  // namespace pdem::oracle
