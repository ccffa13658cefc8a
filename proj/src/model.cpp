#include "pdem/model.hpp"

#include <cmath>
#include <string>

#include "pdem/error.hpp"

namespace pdem {

DeviceParams::DeviceParams(double g, double mu1, double mu2, double a0)
    : g_(g), mu1_(mu1), mu2_(mu2), a0_(a0) {
  if (!(g > 0.0) || !(mu1 > 0.0) || !(a0 > 0.0)) {
    throw NumericalError(ErrorKind::InvalidParams, "g, mu1 and a0 must be positive");
  }
  if (!(mu2 >= 0.0)) {
    throw NumericalError(ErrorKind::InvalidParams,
                         "mu2 must be >= 0 (negative mu2 is the mirrored device)");
  }
  V0_ = -mu1 / (1.0 + a0 * a0);
  m0_ = g * g / (2.0 * (1.0 + a0 * a0));
  s_ = -0.5 + g * std::sqrt(mu1);
  lambda_ = 0.5 * mu2 * g * g;
  if (!(s_ > 0.0)) {
    throw NumericalError(ErrorKind::InvalidParams,
                         "g*sqrt(mu1) must exceed 1/2, got s = " + std::to_string(s_));
  }
}

DeviceParams DeviceParams::reference() { return {1.5, 4.0, 0.3, 2.5}; }

cplx potential(double z, const DeviceParams& p) {
  if (std::abs(z) < p.a0()) {
    const double q = 1.0 + z * z;
    return {-p.mu1() / q, p.mu2() * z / std::sqrt(q)};
  }
  return {p.V0(), 0.0};
}

double mass(double z, const DeviceParams& p) {
  if (std::abs(z) < p.a0()) return p.g() * p.g() / (2.0 * (1.0 + z * z));
  return p.m0();
}

double mass_deriv(double z, const DeviceParams& p) {
  if (std::abs(z) < p.a0()) {
    const double q = 1.0 + z * z;
    return -p.g() * p.g() * z / (q * q);
  }
  return 0.0;
}

double rho_bar(double z) { return std::asinh(z); }

double y_of_z(double z) { return 0.5 * (1.0 - std::tanh(rho_bar(z))); }

double dy_dz(double z) {
  const double q = 1.0 + z * z;
  return -0.5 / (q * std::sqrt(q));
}

cplx effective_potential(double rho, const DeviceParams& p) {
  const double g2 = p.g() * p.g();
  const double x = rho / p.g();
  const double sech = 1.0 / std::cosh(x);
  return {0.25 / g2 - (p.mu1() - 0.25 / g2) * sech * sech, p.mu2() * std::tanh(x)};
}

cplx principal_sqrt(cplx w) {
  cplx r = std::sqrt(w);
  if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
  return r;
}

SpectralParams spectral_params(cplx E, const DeviceParams& p, BranchChoice branch) {
  const cplx I{0.0, 1.0};
  const double g2 = p.g() * p.g();
  const double lam = p.lambda();

  SpectralParams sp;
  sp.E = E;
  sp.kappa_sq = E * g2 - 0.25;
  sp.alpha = principal_sqrt(2.0 * I * lam - sp.kappa_sq);
  sp.beta = principal_sqrt(-2.0 * I * lam - sp.kappa_sq);
  if (branch.flip_alpha) sp.alpha = -sp.alpha;
  if (branch.flip_beta) sp.beta = -sp.beta;

  const cplx half_sum = 0.5 * (sp.alpha + sp.beta + 1.0);
  sp.a = half_sum + p.g_sqrt_mu1();
  sp.b = half_sum - p.g_sqrt_mu1();
  sp.c = sp.alpha + 1.0;

  const cplx dE = E - p.V0();
  sp.k = principal_sqrt(2.0 * p.m0() * dE);
  sp.k_b = principal_sqrt(-2.0 * p.m0() * dE);
  sp.degenerate = (dE == cplx{});
  return sp;
}

}  // namespace pdem
