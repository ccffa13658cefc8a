#pragma once

#include <cmath>
#include <complex>

namespace pdem {

using cplx = std::complex<double>;

/// The four constants of the double heterojunction. Exterior constants and
/// the Rosen-Morse parameters are derived on construction.
class DeviceParams {
 public:
  /// Throws NumericalError(InvalidParams) unless g, mu1, a0 > 0, mu2 >= 0
  /// and the well parameter s = g*sqrt(mu1) - 1/2 is positive.
  DeviceParams(double g, double mu1, double mu2, double a0);

  /// g = 1.5, mu1 = 4, mu2 = 0.3, a0 = 2.5
  static DeviceParams reference();

  double g() const { return g_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }
  double a0() const { return a0_; }

  double V0() const { return V0_; }  // exterior potential floor
  double m0() const { return m0_; }  // exterior mass
  double s() const { return s_; }
  double lambda() const { return lambda_; }
  /// g*sqrt(mu1), half of a - b.
  double g_sqrt_mu1() const { return g_ * std::sqrt(mu1_); }

  DeviceParams with_mu2(double mu2) const { return {g_, mu1_, mu2, a0_}; }

 private:
  double g_, mu1_, mu2_, a0_;
  double V0_, m0_, s_, lambda_;
};

/// Per-energy constants of the interior hypergeometric solution and of the
/// exterior plane waves. Energy is complex so that roots can be continued
/// off the real axis; physical scattering always uses real E.
struct SpectralParams {
  cplx E;
  cplx kappa_sq;
  cplx alpha;
  cplx beta;
  cplx a;
  cplx b;
  cplx c;
  cplx k;    // exterior wavenumber, Re k >= 0
  cplx k_b;  // exterior decay constant, Re k_b >= 0
  bool degenerate = false;  // E == V0
};

struct BranchChoice {
  bool flip_alpha = false;
  bool flip_beta = false;
};

cplx potential(double z, const DeviceParams& p);
double mass(double z, const DeviceParams& p);
/// First derivative of the mass profile (zero outside the interior).
double mass_deriv(double z, const DeviceParams& p);

/// asinh(z): the transformed coordinate divided by g, centred at z = 0.
double rho_bar(double z);
/// Hypergeometric variable (1 - tanh(asinh z))/2, in (0, 1) and
/// decreasing in z; y(-z) = 1 - y(z).
double y_of_z(double z);
/// dy/dz = -(1/2) (1 + z^2)^(-3/2).
double dy_dz(double z);

/// Constant-mass potential seen by phi(rho) after psi = (2m)^(1/4) phi.
cplx effective_potential(double rho, const DeviceParams& p);

SpectralParams spectral_params(cplx E, const DeviceParams& p, BranchChoice branch = {});
inline SpectralParams spectral_params(double E, const DeviceParams& p, BranchChoice branch = {}) {
  return spectral_params(cplx(E, 0.0), p, branch);
}

/// Principal square root with the tie-break Im >= 0 on the negative real axis.
cplx principal_sqrt(cplx w);

}  // namespace pdem
