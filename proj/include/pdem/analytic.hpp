#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdem/config.hpp"
#include "pdem/model.hpp"

namespace pdem {

enum class Side { Left, Right };
enum class Method { Analytic, NumericOracle };

/// Weights of the two hypergeometric solutions inside |z| < a0.
struct InnerCoeffs {
  cplx P{};
  cplx Q{};
};

/// One point of a wavefunction. v = psi'/m is the quantity that is
/// continuous across the junctions together with psi.
struct WaveSample {
  double z = 0.0;
  cplx psi{};
  cplx v{};
};

struct ScatteringResult {
  double E = 0.0;
  Side side = Side::Left;
  cplx R{};
  cplx T{};
  InnerCoeffs inner{};
  double condition_estimate = 0.0;
  Method method = Method::Analytic;
  BranchChoice branch{};
};

struct BoundState {
  double E = 0.0;
  double imag_E = 0.0;
  double k_b = 0.0;
  InnerCoeffs inner{};
  cplx A1{};  // psi = A1 exp(k_b z) for z < -a0
  cplx A2{};  // psi = A2 exp(-k_b z) for z > a0
  std::vector<WaveSample> samples;
  double residual = 0.0;  // |det| at convergence
};

}  // namespace pdem

namespace pdem::analytic {

struct PsiValue {
  cplx psi{};
  cplx dpsi_dz{};
};

/// The two interior basis solutions (P, Q) = (1, 0) and (0, 1) at one z.
struct BasisValues {
  PsiValue first;
  PsiValue second;
};

/// Interior solutions at one energy. The first is
/// (2m)^(1/4) y^(alpha/2) (1-y)^(beta/2) 2F1(a, b; c; y) and the second
/// carries the extra factor y^(1-c). For z < 0 (y > 1/2) both are evaluated
/// through the local pair around y = 1, connected to the y = 0 pair at
/// z = 0, so no series argument exceeds 1/2.
class InteriorBasis {
 public:
  InteriorBasis(const SpectralParams& sp, const DeviceParams& p, const SeriesConfig& cfg = {});

  BasisValues at(double z) const;

 private:
  SpectralParams sp_;
  DeviceParams p_;
  SeriesConfig cfg_;
  Eigen::Matrix2cd connection_;
};

/// Both basis solutions of the interior equation at |z| <= a0.
BasisValues inner_basis(double z, const SpectralParams& sp, const DeviceParams& p,
                        const SeriesConfig& cfg = {});

/// psi(z) and dpsi/dz for the interior combination P * first + Q * second.
PsiValue inner_psi(double z, const SpectralParams& sp, const DeviceParams& p,
                   const InnerCoeffs& coeffs, const SeriesConfig& cfg = {});

/// Solves continuity of psi and psi'/m at both junctions for (R, T, P, Q).
/// Throws NumericalError(SingularMatching) above cfg.singular_condition.
ScatteringResult match_scatter(double E, const DeviceParams& p, Side side,
                               const SolverConfig& cfg = {}, BranchChoice branch = {});

enum class Exterior {
  Decaying,  // k_b = sqrt(2 m0 (V0 - E)), Re k_b >= 0
  Outgoing,  // k_b = -i k with k = sqrt(2 m0 (E - V0)), Re k >= 0
};

/// Determinant of the homogeneous matching system in (A1, A2, P, Q),
/// divided by its magnitude at the reference energy -2 mu1 - 1. The
/// exterior columns are scaled by exp(k_b a0), which keeps the function
/// holomorphic in E away from E = V0.
class BoundDeterminant {
 public:
  BoundDeterminant(const DeviceParams& p, const SolverConfig& cfg = {});

  cplx operator()(cplx E, Exterior ext = Exterior::Decaying) const;
  cplx raw(cplx E, Exterior ext = Exterior::Decaying) const;

  const DeviceParams& params() const { return p_; }

 private:
  DeviceParams p_;
  SolverConfig cfg_;
  double scale_ = 1.0;
};

cplx bound_det(cplx E, const DeviceParams& p, const SolverConfig& cfg = {});

struct BoundSearch {
  std::vector<BoundState> states;
  /// Converged roots dropped by the |Im E| filter, and per-root failures.
  std::vector<std::string> log;
};

/// Scans |det| on [E_floor, V0 - 1e-6] and refines each local minimum by
/// Muller iteration. E_floor defaults to -2 mu1, n_scan to cfg.default_scan_points.
BoundSearch find_bound_states(const DeviceParams& p, std::optional<double> E_floor = {},
                              std::optional<std::size_t> n_scan = {},
                              const SolverConfig& cfg = {});

/// Full bound state (coefficients, samples) at a converged real root.
BoundState assemble_bound_state(double E, double imag_E, const DeviceParams& p,
                                const SolverConfig& cfg = {});

enum class Regime { Bound, Resonance };

struct SwitchPoint {
  double mu2 = 0.0;
  cplx E0{};
  Regime regime = Regime::Bound;
};

struct SwitchScan {
  std::vector<SwitchPoint> points;
  std::optional<double> crossing_mu2;  // Re E0 = 0, linearly interpolated
  std::optional<Regime> crossing_regime;
  std::optional<cplx> crossing_E0;
  bool lost = false;  // ContinuationLost; points holds the partial track
  std::string message;
};

/// Tracks the ground state of the bound determinant along an ascending mu2
/// grid. Above the exterior floor the root is continued with the outgoing
/// exterior and labelled a resonance.
SwitchScan switching_scan(const DeviceParams& p, std::span<const double> mu2_grid,
                          const SolverConfig& cfg = {});

std::vector<WaveSample> profile(const ScatteringResult& result, const DeviceParams& p,
                                std::span<const double> z_grid, const SolverConfig& cfg = {});

/// Bound-state profile, normalised to unit maximum |psi| over z_grid.
std::vector<WaveSample> profile(const BoundState& state, const DeviceParams& p,
                                std::span<const double> z_grid, const SolverConfig& cfg = {});

/// psi1 v2 - psi2 v1 for two interior solutions at z.
cplx modified_wronskian(const WaveSample& first, const WaveSample& second);

}  // namespace pdem::analytic
