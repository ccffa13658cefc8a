#include "pdem/analytic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdem/error.hpp"
#include "pdem/roots.hpp"
#include "pdem/specfun.hpp"

namespace pdem::analytic {

namespace {

const cplx I{0.0, 1.0};

using Matrix4 = Eigen::Matrix<cplx, 4, 4>;
using Vector4 = Eigen::Matrix<cplx, 4, 1>;

double interior_mass(double z, const DeviceParams& p) {
  return p.g() * p.g() / (2.0 * (1.0 + z * z));
}

WaveSample as_sample(double z, const PsiValue& v, double m) { return {z, v.psi, v.dpsi_dz / m}; }

struct JunctionBasis {
  WaveSample first_left, second_left;    // z = -a0
  WaveSample first_right, second_right;  // z = +a0
};

JunctionBasis junction_basis(const SpectralParams& sp, const DeviceParams& p,
                             const SeriesConfig& cfg) {
  const double a0 = p.a0();
  const double m = p.m0();
  const InteriorBasis basis(sp, p, cfg);
  const BasisValues left = basis.at(-a0);
  const BasisValues right = basis.at(a0);
  return {as_sample(-a0, left.first, m), as_sample(-a0, left.second, m),
          as_sample(a0, right.first, m), as_sample(a0, right.second, m)};
}

cplx exterior_kb(const SpectralParams& sp, Exterior ext) {
  return ext == Exterior::Decaying ? sp.k_b : -I * sp.k;
}

Exterior exterior_for(cplx E, const DeviceParams& p) {
  return E.real() <= p.V0() ? Exterior::Decaying : Exterior::Outgoing;
}

/// Homogeneous bound-state system; columns (A1', A2', P, Q) with exteriors
/// A1' exp(k_b (z + a0)) and A2' exp(-k_b (z - a0)).
Matrix4 bound_matrix(const JunctionBasis& jb, cplx kb, double m0) {
  Matrix4 M;
  M << 1.0, 0.0, -jb.first_left.psi, -jb.second_left.psi,
       kb / m0, 0.0, -jb.first_left.v, -jb.second_left.v,
       0.0, 1.0, -jb.first_right.psi, -jb.second_right.psi,
       0.0, -kb / m0, -jb.first_right.v, -jb.second_right.v;
  return M;
}

}  // namespace

namespace {

PsiValue combine(const BasisValues& b, const InnerCoeffs& c) {
  return {c.P * b.first.psi + c.Q * b.second.psi, c.P * b.first.dpsi_dz + c.Q * b.second.dpsi_dz};
}

/// Two local solutions of the hypergeometric form in the variable t, with
/// exponents e_t at t = 0 and e_o at t = 1, as values and d/dt.
struct LocalPair {
  cplx f1, f1_t, f2, f2_t;
};

LocalPair local_pair(double t, cplx e_t, cplx e_o, cplx a, cplx b, const SeriesConfig& cfg) {
  if (!(t > 0.0) || !(t < 1.0)) {
    throw NumericalError(ErrorKind::BranchPowerError, "power argument left (0, 1)");
  }
  const double log_t = std::log(t);
  const double log_1mt = std::log1p(-t);

  const cplx pre1 = std::exp(0.5 * e_t * log_t + 0.5 * e_o * log_1mt);
  const cplx dlog1 = 0.5 * e_t / t - 0.5 * e_o / (1.0 - t);
  const auto F = specfun::hyp2f1_with_deriv({a, b, 1.0 + e_t, t}, cfg);

  const cplx pre2 = std::exp(-0.5 * e_t * log_t + 0.5 * e_o * log_1mt);
  const cplx dlog2 = -0.5 * e_t / t - 0.5 * e_o / (1.0 - t);
  const auto G = specfun::hyp2f1_with_deriv({a - e_t, b - e_t, 1.0 - e_t, t}, cfg);

  return {pre1 * F.value, pre1 * (dlog1 * F.value + F.deriv), pre2 * G.value,
          pre2 * (dlog2 * G.value + G.deriv)};
}

}  // namespace

InteriorBasis::InteriorBasis(const SpectralParams& sp, const DeviceParams& p,
                             const SeriesConfig& cfg)
    : sp_(sp), p_(p), cfg_(cfg) {
  // Express the y = 0 pair through the y = 1 pair by matching value and
  // y-derivative at y = 1/2.
  const LocalPair near0 = local_pair(0.5, sp.alpha, sp.beta, sp.a, sp.b, cfg);
  const LocalPair near1 = local_pair(0.5, sp.beta, sp.alpha, sp.a, sp.b, cfg);
  Eigen::Matrix2cd Y;
  Y << near0.f1, near0.f1_t, near0.f2, near0.f2_t;
  Eigen::Matrix2cd T;
  T << near1.f1, -near1.f1_t, near1.f2, -near1.f2_t;
  connection_ = Y * T.inverse();
}

BasisValues InteriorBasis::at(double z) const {
  if (std::abs(z) > p_.a0() * (1.0 + 1e-12)) {
    throw NumericalError(ErrorKind::DomainError, "interior solution requested outside |z| <= a0");
  }
  const double y = y_of_z(z);
  cplx phi1, phi1_y, phi2, phi2_y;
  if (z >= 0.0) {
    const LocalPair lp = local_pair(y, sp_.alpha, sp_.beta, sp_.a, sp_.b, cfg_);
    phi1 = lp.f1; phi1_y = lp.f1_t;
    phi2 = lp.f2; phi2_y = lp.f2_t;
  } else {
    const LocalPair lp = local_pair(1.0 - y, sp_.beta, sp_.alpha, sp_.a, sp_.b, cfg_);
    const Eigen::Matrix2cd& C = connection_;
    phi1 = C(0, 0) * lp.f1 + C(0, 1) * lp.f2;
    phi1_y = -(C(0, 0) * lp.f1_t + C(0, 1) * lp.f2_t);
    phi2 = C(1, 0) * lp.f1 + C(1, 1) * lp.f2;
    phi2_y = -(C(1, 0) * lp.f1_t + C(1, 1) * lp.f2_t);
  }

  const double q = 1.0 + z * z;
  const double w = std::sqrt(p_.g()) / std::pow(q, 0.25);  // (2m)^(1/4)
  const double w_z = -0.5 * z / q * w;
  const double y_z = dy_dz(z);
  return {{w * phi1, w_z * phi1 + w * phi1_y * y_z}, {w * phi2, w_z * phi2 + w * phi2_y * y_z}};
}

BasisValues inner_basis(double z, const SpectralParams& sp, const DeviceParams& p,
                        const SeriesConfig& cfg) {
  return InteriorBasis(sp, p, cfg).at(z);
}

PsiValue inner_psi(double z, const SpectralParams& sp, const DeviceParams& p,
                   const InnerCoeffs& coeffs, const SeriesConfig& cfg) {
  return combine(inner_basis(z, sp, p, cfg), coeffs);
}

cplx modified_wronskian(const WaveSample& first, const WaveSample& second) {
  return first.psi * second.v - second.psi * first.v;
}

ScatteringResult match_scatter(double E, const DeviceParams& p, Side side,
                               const SolverConfig& cfg, BranchChoice branch) {
  if (!(E > p.V0())) {
    throw NumericalError(ErrorKind::DomainError, "scattering requires E > V0");
  }
  const SpectralParams sp = spectral_params(E, p, branch);
  const JunctionBasis jb = junction_basis(sp, p, cfg.series);

  const double a0 = p.a0();
  const cplx k = sp.k;
  const cplx ikm = I * k / p.m0();
  auto wave = [&](double z, double dir) { return std::exp(I * dir * k * z); };

  Matrix4 M = Matrix4::Zero();
  Vector4 rhs = Vector4::Zero();
  // Columns: 0 = R, 1 = T, 2 = P, 3 = Q. Rows: psi and v at -a0, then at +a0.
  M(0, 2) = -jb.first_left.psi;   M(0, 3) = -jb.second_left.psi;
  M(1, 2) = -jb.first_left.v;     M(1, 3) = -jb.second_left.v;
  M(2, 2) = -jb.first_right.psi;  M(2, 3) = -jb.second_right.psi;
  M(3, 2) = -jb.first_right.v;    M(3, 3) = -jb.second_right.v;

  if (side == Side::Left) {
    // exp(ikz) + R exp(-ikz) on the left, T exp(ikz) on the right
    M(0, 0) = wave(-a0, -1.0);
    M(1, 0) = -ikm * wave(-a0, -1.0);
    rhs(0) = -wave(-a0, 1.0);
    rhs(1) = -ikm * wave(-a0, 1.0);
    M(2, 1) = wave(a0, 1.0);
    M(3, 1) = ikm * wave(a0, 1.0);
  } else {
    // exp(-ikz) + R exp(ikz) on the right, T exp(-ikz) on the left
    M(2, 0) = wave(a0, 1.0);
    M(3, 0) = ikm * wave(a0, 1.0);
    rhs(2) = -wave(a0, -1.0);
    rhs(3) = ikm * wave(a0, -1.0);
    M(0, 1) = wave(-a0, -1.0);
    M(1, 1) = -ikm * wave(-a0, -1.0);
  }

  Eigen::Vector4d col_scale;
  for (int j = 0; j < 4; ++j) {
    const double n = M.col(j).cwiseAbs().maxCoeff();
    col_scale(j) = n > 0.0 ? 1.0 / n : 1.0;
  }
  const Matrix4 scaled = M * col_scale.asDiagonal();
  const Eigen::PartialPivLU<Matrix4> lu(scaled);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(cond <= cfg.singular_condition)) {
    std::ostringstream msg;
    msg << "matching matrix condition " << cond << " at E = " << E;
    throw NumericalError(ErrorKind::SingularMatching, msg.str());
  }
  const Vector4 x = col_scale.asDiagonal() * lu.solve(rhs);

  ScatteringResult out;
  out.E = E;
  out.side = side;
  out.R = x(0);
  out.T = x(1);
  out.inner = {x(2), x(3)};
  out.condition_estimate = cond;
  out.method = Method::Analytic;
  out.branch = branch;
  return out;
}

BoundDeterminant::BoundDeterminant(const DeviceParams& p, const SolverConfig& cfg)
    : p_(p), cfg_(cfg) {
  const double ref = std::abs(raw(cplx(-2.0 * p.mu1() - 1.0, 0.0)));
  scale_ = (std::isfinite(ref) && ref > 0.0) ? ref : 1.0;
}

cplx BoundDeterminant::raw(cplx E, Exterior ext) const {
  const SpectralParams sp = spectral_params(E, p_);
  const JunctionBasis jb = junction_basis(sp, p_, cfg_.series);
  return bound_matrix(jb, exterior_kb(sp, ext), p_.m0()).determinant();
}

cplx BoundDeterminant::operator()(cplx E, Exterior ext) const { return raw(E, ext) / scale_; }

cplx bound_det(cplx E, const DeviceParams& p, const SolverConfig& cfg) {
  return BoundDeterminant(p, cfg)(E);
}

BoundState assemble_bound_state(double E, double imag_E, const DeviceParams& p,
                                const SolverConfig& cfg) {
  const SpectralParams sp = spectral_params(E, p);
  const JunctionBasis jb = junction_basis(sp, p, cfg.series);
  const cplx kb = sp.k_b;

  // A1' = 1; the first two rows fix (P, Q).
  Eigen::Matrix2cd A;
  A << jb.first_left.psi, jb.second_left.psi, jb.first_left.v, jb.second_left.v;
  const Eigen::Vector2cd rhs(1.0, kb / p.m0());
  const Eigen::Vector2cd pq = A.partialPivLu().solve(rhs);

  BoundState st;
  st.E = E;
  st.imag_E = imag_E;
  st.k_b = kb.real();
  st.inner = {pq(0), pq(1)};
  const cplx edge = std::exp(kb * p.a0());
  st.A1 = edge;
  st.A2 = (pq(0) * jb.first_right.psi + pq(1) * jb.second_right.psi) * edge;
  st.residual = std::abs(BoundDeterminant(p, cfg)(cplx(E, 0.0)));

  std::vector<double> grid;
  const double z_lo = -p.a0() - 4.0;
  const double z_hi = p.a0() + 4.0;
  constexpr int n = 401;
  for (int i = 0; i < n; ++i) grid.push_back(z_lo + (z_hi - z_lo) * i / (n - 1));

  const InteriorBasis basis(sp, p, cfg.series);
  double peak = 0.0;
  for (double z : grid) {
    cplx psi;
    if (z < -p.a0()) psi = st.A1 * std::exp(kb * z);
    else if (z > p.a0()) psi = st.A2 * std::exp(-kb * z);
    else {
      const BasisValues b = basis.at(z);
      psi = st.inner.P * b.first.psi + st.inner.Q * b.second.psi;
    }
    peak = std::max(peak, std::abs(psi));
  }
  if (peak > 0.0) {
    st.inner.P /= peak;
    st.inner.Q /= peak;
    st.A1 /= peak;
    st.A2 /= peak;
  }
  st.samples = profile(st, p, grid, cfg);
  return st;
}

BoundSearch find_bound_states(const DeviceParams& p, std::optional<double> E_floor,
                              std::optional<std::size_t> n_scan, const SolverConfig& cfg) {
  const double lo = E_floor.value_or(-2.0 * p.mu1());
  const double hi = p.V0() - 1e-6;
  const std::size_t n = std::max<std::size_t>(n_scan.value_or(cfg.default_scan_points), 3);
  if (!(lo < hi)) {
    throw NumericalError(ErrorKind::InvalidParams, "E_floor must lie below V0");
  }

  const BoundDeterminant det(p, cfg);
  std::vector<double> Es(n);
  std::vector<double> mags(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    Es[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    try {
      mags[i] = std::abs(det(cplx(Es[i], 0.0)));
    } catch (const NumericalError&) {
    }
  }

  BoundSearch out;
  std::vector<double> roots_found;
  const double h = (hi - lo) / static_cast<double>(n - 1);
  auto f = [&](cplx E) { return det(E); };

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(mags[i] < mags[i - 1]) || !(mags[i] <= mags[i + 1])) continue;
    roots::MullerResult r;
    try {
      r = roots::muller(f, cplx(Es[i - 1], 0.0), cplx(Es[i + 1], 0.5 * h), cplx(Es[i], 0.0),
                        cfg.root_tol, 1e-14, cfg.muller_max_iter);
    } catch (const NumericalError& e) {
      out.log.push_back("refinement near E = " + std::to_string(Es[i]) + " failed: " + e.what());
      continue;
    }
    if (!r.converged) {
      std::ostringstream msg;
      msg << "NoConvergence: refinement near E = " << Es[i] << " stalled at |det| = "
          << std::abs(r.value);
      out.log.push_back(msg.str());
      continue;
    }
    const cplx E = r.root;
    if (!(E.real() < p.V0()) || E.real() < lo - h) continue;
    if (std::abs(E.imag()) >= cfg.real_root_imag_tol) {
      std::ostringstream msg;
      msg << "rejected complex root E = " << E.real() << (E.imag() < 0 ? " - " : " + ")
          << std::abs(E.imag()) << "i";
      out.log.push_back(msg.str());
      continue;
    }
    const bool dup = std::any_of(roots_found.begin(), roots_found.end(),
                                 [&](double x) { return std::abs(x - E.real()) < 1e-7; });
    if (dup) continue;
    roots_found.push_back(E.real());
    out.states.push_back(assemble_bound_state(E.real(), E.imag(), p, cfg));
  }
  std::sort(out.states.begin(), out.states.end(),
            [](const BoundState& x, const BoundState& y) { return x.E < y.E; });
  return out;
}

namespace {

struct Tracked {
  double mu2;
  cplx E;
};

std::optional<cplx> refine_root(const DeviceParams& p, cplx guess, double spread,
                                const SolverConfig& cfg) {
  const BoundDeterminant det(p, cfg);
  for (Exterior ext : {exterior_for(guess, p), exterior_for(guess, p) == Exterior::Decaying
                                                   ? Exterior::Outgoing
                                                   : Exterior::Decaying}) {
    auto f = [&](cplx E) { return det(E, ext); };
    try {
      const auto r = roots::muller(f, guess - spread, guess + I * spread, guess, cfg.root_tol,
                                   1e-14, cfg.muller_max_iter);
      if (r.converged && exterior_for(r.root, p) == ext) return r.root;
    } catch (const NumericalError&) {
    }
  }
  return std::nullopt;
}

Regime regime_of(cplx E, const DeviceParams& p, const SolverConfig& cfg) {
  return (E.real() <= p.V0() && std::abs(E.imag()) < cfg.real_root_imag_tol) ? Regime::Bound
                                                                            : Regime::Resonance;
}

}  // namespace

SwitchScan switching_scan(const DeviceParams& p, std::span<const double> mu2_grid,
                          const SolverConfig& cfg) {
  SwitchScan out;
  if (mu2_grid.empty()) return out;
  if (!std::is_sorted(mu2_grid.begin(), mu2_grid.end())) {
    throw NumericalError(ErrorKind::InvalidParams, "mu2 grid must be ascending");
  }

  const DeviceParams start = p.with_mu2(mu2_grid.front());
  const BoundSearch initial = find_bound_states(start, std::nullopt, std::nullopt, cfg);
  if (initial.states.empty()) {
    out.lost = true;
    out.message = "ContinuationLost: no bound state at mu2 = " + std::to_string(mu2_grid.front());
    return out;
  }

  std::vector<Tracked> history{{mu2_grid.front(), cplx(initial.states.front().E, 0.0)}};
  out.points.push_back({mu2_grid.front(), history.back().E, Regime::Bound});

  auto predict = [&](double mu2) {
    const Tracked& last = history.back();
    if (history.size() < 2) return last.E;
    const Tracked& prev = history[history.size() - 2];
    return last.E + (last.E - prev.E) * ((mu2 - last.mu2) / (last.mu2 - prev.mu2));
  };

  for (std::size_t i = 1; i < mu2_grid.size(); ++i) {
    const double target = mu2_grid[i];
    double next = target;
    while (history.back().mu2 < target) {
      const double cur = history.back().mu2;
      const cplx guess = predict(next);
      const double jump_limit =
          0.25 + 4.0 * (history.size() >= 2 ? std::abs(history.back().E - history[history.size() - 2].E)
                                            : 0.0);
      const double spread = 1e-3 * (1.0 + std::abs(guess));
      std::optional<cplx> root;
      try {
        root = refine_root(p.with_mu2(next), guess, spread, cfg);
      } catch (const NumericalError&) {
      }
      if (root && std::abs(*root - history.back().E) <= jump_limit) {
        history.push_back({next, *root});
        next = target;
        continue;
      }
      const double half = 0.5 * (next - cur);
      if (half < 1e-7 * (1.0 + std::abs(target))) {
        out.lost = true;
        std::ostringstream msg;
        msg << "ContinuationLost: ground state could not be refined beyond mu2 = " << cur;
        out.message = msg.str();
        break;
      }
      next = cur + half;
    }
    if (out.lost) break;
    out.points.push_back({target, history.back().E, regime_of(history.back().E, p, cfg)});
  }

  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& a = out.points[i - 1];
    const auto& b = out.points[i];
    if (a.E0.real() < 0.0 && b.E0.real() >= 0.0) {
      const double t = -a.E0.real() / (b.E0.real() - a.E0.real());
      out.crossing_mu2 = a.mu2 + t * (b.mu2 - a.mu2);
      out.crossing_E0 = a.E0 + t * (b.E0 - a.E0);
      out.crossing_regime = b.regime;
      break;
    }
  }
  return out;
}

std::vector<WaveSample> profile(const ScatteringResult& result, const DeviceParams& p,
                                std::span<const double> z_grid, const SolverConfig& cfg) {
  if (result.method != Method::Analytic) {
    throw NumericalError(ErrorKind::InvalidParams,
                         "profiles need interior coefficients from the analytic solver");
  }
  const SpectralParams sp = spectral_params(result.E, p, result.branch);
  const cplx k = sp.k;
  const double m0 = p.m0();
  const double dir_in = result.side == Side::Left ? 1.0 : -1.0;
  const InteriorBasis basis(sp, p, cfg.series);

  std::vector<WaveSample> out;
  out.reserve(z_grid.size());
  for (double z : z_grid) {
    const cplx fwd = std::exp(I * dir_in * k * z);
    const cplx back = std::exp(-I * dir_in * k * z);
    const cplx ikd = I * dir_in * k;
    const bool incoming_side = result.side == Side::Left ? z < -p.a0() : z > p.a0();
    const bool outgoing_side = result.side == Side::Left ? z > p.a0() : z < -p.a0();
    if (incoming_side) {
      out.push_back({z, fwd + result.R * back, ikd * (fwd - result.R * back) / m0});
    } else if (outgoing_side) {
      out.push_back({z, result.T * fwd, ikd * result.T * fwd / m0});
    } else {
      const PsiValue v = combine(basis.at(z), result.inner);
      out.push_back({z, v.psi, v.dpsi_dz / interior_mass(z, p)});
    }
  }
  return out;
}

std::vector<WaveSample> profile(const BoundState& state, const DeviceParams& p,
                                std::span<const double> z_grid, const SolverConfig& cfg) {
  const SpectralParams sp = spectral_params(state.E, p);
  const cplx kb = sp.k_b;
  const double m0 = p.m0();
  const InteriorBasis basis(sp, p, cfg.series);

  std::vector<WaveSample> out;
  out.reserve(z_grid.size());
  double peak = 0.0;
  for (double z : z_grid) {
    WaveSample s;
    if (z < -p.a0()) {
      const cplx psi = state.A1 * std::exp(kb * z);
      s = {z, psi, kb * psi / m0};
    } else if (z > p.a0()) {
      const cplx psi = state.A2 * std::exp(-kb * z);
      s = {z, psi, -kb * psi / m0};
    } else {
      const PsiValue v = combine(basis.at(z), state.inner);
      s = {z, v.psi, v.dpsi_dz / interior_mass(z, p)};
    }
    peak = std::max(peak, std::abs(s.psi));
    out.push_back(s);
  }
  if (peak > 0.0) {
    for (auto& s : out) {
      s.psi /= peak;
      s.v /= peak;
    }
  }
  return out;
}

}  // namespace pdem::analytic
