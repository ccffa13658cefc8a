#include "pdem/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pdem/error.hpp"
#include "pdem/roots.hpp"

namespace pdem::oracle {

namespace {

const cplx I{0.0, 1.0};

using Vec = std::array<cplx, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - -92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

Vec rhs(double z, const Vec& y, double E, const Profile& prof) {
  return {prof.mass(z) * y[1], 2.0 * (prof.potential(z) - E) * y[0]};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    out[0] += h * coef * (*k)[0];
    out[1] += h * coef * (*k)[1];
  }
  return out;
}

cplx interior_potential(double z, const DeviceParams& p) {
  const double q = 1.0 + z * z;
  return {-p.mu1() / q, p.mu2() * z / std::sqrt(q)};
}

}  // namespace

Profile device_profile(const DeviceParams& p) {
  return {[p](double z) { return interior_potential(z, p); },
          [p](double z) { return p.g() * p.g() / (2.0 * (1.0 + z * z)); }};
}

State propagate(double E, const Profile& prof, double from, double to, State start,
                const IntegratorConfig& cfg, PropagateStats* stats) {
  Vec y{start.psi, start.v};
  if (from == to) return start;

  const double dir = to > from ? 1.0 : -1.0;
  const double span = std::abs(to - from);
  double h = std::min(cfg.initial_step, span);
  double z = from;
  std::size_t accepted = 0;
  std::size_t rejected = 0;

  Vec k1 = rhs(z, y, E, prof);
  while (dir * (to - z) > 0.0) {
    if (accepted + rejected >= cfg.max_steps) {
      throw NumericalError(ErrorKind::StepLimitExceeded,
                           "integration needed more than " + std::to_string(cfg.max_steps) + " steps");
    }
    const double remaining = dir * (to - z);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;

    const Vec k2 = rhs(z + c2 * hs, axpy(y, hs, {{a21, &k1}}), E, prof);
    const Vec k3 = rhs(z + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}), E, prof);
    const Vec k4 = rhs(z + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), E, prof);
    const Vec k5 = rhs(z + c5 * hs,
                       axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), E, prof);
    const Vec k6 = rhs(z + hs,
                       axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
                       E, prof);
    const Vec y_new =
        axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double z_new = last ? to : z + hs;
    const Vec k7 = rhs(z_new, y_new, E, prof);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const cplx e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::max();

    if (err <= 1.0) {
      z = z_new;
      y = y_new;
      k1 = k7;
      ++accepted;
      if (last) break;
    } else {
      ++rejected;
    }
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < cfg.min_step) {
      throw NumericalError(ErrorKind::StepUnderflow,
                           "step size fell below " + std::to_string(cfg.min_step) +
                               " at z = " + std::to_string(z));
    }
  }
  if (stats) *stats = {accepted, rejected};
  return {y[0], y[1]};
}

State propagate(double E, const DeviceParams& p, double from, double to, State start,
                const IntegratorConfig& cfg) {
  const double lim = p.a0() * (1.0 + 1e-12);
  if (std::abs(from) > lim || std::abs(to) > lim) {
    throw NumericalError(ErrorKind::DomainError,
                         "direct integration is limited to the interior [-a0, a0]");
  }
  return propagate(E, device_profile(p), from, to, start, cfg);
}

Transfer interior_transfer(double E, const DeviceParams& p, const IntegratorConfig& cfg) {
  const Profile prof = device_profile(p);
  return {propagate(E, prof, -p.a0(), p.a0(), {1.0, 0.0}, cfg),
          propagate(E, prof, -p.a0(), p.a0(), {0.0, 1.0}, cfg)};
}

ScatteringResult scatter_numeric(double E, const DeviceParams& p, Side side,
                                 const IntegratorConfig& cfg) {
  if (!(E > p.V0())) {
    throw NumericalError(ErrorKind::DomainError, "scattering requires E > V0");
  }
  const double m0 = p.m0();
  const double a0 = p.a0();
  const cplx k = std::sqrt(cplx(2.0 * m0 * (E - p.V0()), 0.0));
  const Transfer tr = interior_transfer(E, p, cfg);

  Eigen::Matrix2cd Mt;
  Mt << tr.from_unit_psi.psi, tr.from_unit_v.psi, tr.from_unit_psi.v, tr.from_unit_v.v;
  // exterior wave exp(i dir k z) at z as (psi, v)
  auto wave = [&](double z, double dir) {
    const cplx e = std::exp(I * dir * k * z);
    return Eigen::Vector2cd(e, I * dir * k / m0 * e);
  };

  Eigen::Matrix2cd A;
  Eigen::Vector2cd b;
  if (side == Side::Left) {
    // Mt (in + R ref) = T out
    A.col(0) = Mt * wave(-a0, -1.0);
    A.col(1) = -wave(a0, 1.0);
    b = -(Mt * wave(-a0, 1.0));
  } else {
    // Mt (T w) = in + R ref, unknowns ordered (R, T)
    A.col(0) = -wave(a0, 1.0);
    A.col(1) = Mt * wave(-a0, -1.0);
    b = wave(a0, -1.0);
  }
  const Eigen::PartialPivLU<Eigen::Matrix2cd> lu(A);
  const Eigen::Vector2cd x = lu.solve(b);
  const double rcond = lu.rcond();

  ScatteringResult out;
  out.E = E;
  out.side = side;
  out.R = x(0);
  out.T = x(1);
  out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  out.method = Method::NumericOracle;
  return out;
}

cplx bound_mismatch(double E, const DeviceParams& p, const IntegratorConfig& cfg) {
  const double kb = std::sqrt(2.0 * p.m0() * (p.V0() - E));
  const State end = propagate(E, p, -p.a0(), p.a0(), {1.0, kb / p.m0()}, cfg);
  return end.v + kb / p.m0() * end.psi;
}

double bound_numeric(const DeviceParams& p, std::pair<double, double> bracket,
                     const IntegratorConfig& cfg) {
  auto [lo, hi] = bracket;
  if (lo > hi) std::swap(lo, hi);
  if (!(hi < p.V0())) {
    throw NumericalError(ErrorKind::InvalidParams, "bound-state bracket must lie below V0");
  }
  auto f = [&](double E) { return bound_mismatch(E, p, cfg).real(); };
  return roots::bisect_secant(f, lo, hi, 1e-10).root;
}

}  // namespace pdem::oracle
