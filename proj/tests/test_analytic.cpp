#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pdem/analytic.hpp"
#include "pdem/error.hpp"
#include "pdem/oracle.hpp"
#include "pdem/roots.hpp"

using namespace pdem;

namespace {

const DeviceParams ref = DeviceParams::reference();

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

WaveSample sample(double z, const analytic::PsiValue& v, const DeviceParams& p) {
  return {z, v.psi, v.dpsi_dz / mass(z, p)};
}

}  // namespace

TEST_CASE("inner_psi derivative agrees with a finite difference") {
  const auto sp = spectral_params(44.0, ref);
  const InnerCoeffs c{{0.3, 0.2}, {-0.7, 0.1}};
  const double z = 1.0, h = 1e-6;
  const cplx fd = (analytic::inner_psi(z + h, sp, ref, c).psi -
                   analytic::inner_psi(z - h, sp, ref, c).psi) / (2 * h);
  const cplx d = analytic::inner_psi(z, sp, ref, c).dpsi_dz;
  CHECK(std::abs(fd - d) / std::abs(d) < 1e-6);
}

TEST_CASE("zero coefficients give the zero solution") {
  const auto sp = spectral_params(44.0, ref);
  for (double z : grid(-2.5, 2.5, 11)) {
    const auto v = analytic::inner_psi(z, sp, ref, {});
    CHECK(v.psi == cplx(0.0));
    CHECK(v.dpsi_dz == cplx(0.0));
  }
}

TEST_CASE("modified Wronskian of the interior basis is constant") {
  for (double E : {-2.0, -0.3, 5.0, 44.0}) {
    const auto sp = spectral_params(E, ref);
    const analytic::InteriorBasis basis(sp, ref);
    const auto zs = grid(-ref.a0(), ref.a0(), 20);
    const auto b0 = basis.at(zs[0]);
    const cplx w0 = analytic::modified_wronskian(sample(zs[0], b0.first, ref),
                                                 sample(zs[0], b0.second, ref));
    REQUIRE(std::abs(w0) > 0.0);
    for (double z : zs) {
      const auto b = basis.at(z);
      const cplx w = analytic::modified_wronskian(sample(z, b.first, ref), sample(z, b.second, ref));
      CHECK(std::abs(w - w0) / std::abs(w0) < 1e-9);
    }
  }
}

TEST_CASE("interior basis solves the position-dependent-mass equation") {
  // compare against the independent integrator started from the same data
  const double E = 12.0;
  const auto sp = spectral_params(E, ref);
  const analytic::InteriorBasis basis(sp, ref);
  const double z0 = -ref.a0(), z1 = 1.3;
  const auto a = basis.at(z0).second;
  const auto b = basis.at(z1).second;
  const auto st = oracle::propagate(E, ref, z0, z1, {a.psi, a.dpsi_dz / mass(z0, ref)});
  CHECK(std::abs(st.psi - b.psi) / std::abs(b.psi) < 1e-8);
}

TEST_CASE("Hermitian limit is unitary and symmetric") {
  const DeviceParams p = ref.with_mu2(0.0);
  for (double E : grid(p.V0() + 0.3, 60.0, 40)) {
    const auto L = analytic::match_scatter(E, p, Side::Left);
    const auto R = analytic::match_scatter(E, p, Side::Right);
    CHECK(std::abs(std::norm(L.R) + std::norm(L.T) - 1.0) < 1e-8);
    CHECK(std::abs(std::norm(R.R) + std::norm(R.T) - 1.0) < 1e-8);
    CHECK(std::abs(std::abs(L.R) - std::abs(R.R)) < 1e-10);
  }
}

TEST_CASE("transmission is reciprocal") {
  for (double mu2 : grid(0.0, 5.0, 10)) {
    const DeviceParams p = ref.with_mu2(mu2);
    for (double E : grid(p.V0() + 0.05, 60.0, 50)) {
      const auto L = analytic::match_scatter(E, p, Side::Left);
      const auto R = analytic::match_scatter(E, p, Side::Right);
      CHECK(std::abs(L.T - R.T) < 1e-10);
    }
  }
}

TEST_CASE("square-root branch of alpha and beta does not change R or T") {
  for (double E : {-0.3, 2.0, 44.0}) {
    const auto base = analytic::match_scatter(E, ref, Side::Left);
    for (BranchChoice br : {BranchChoice{true, false}, BranchChoice{false, true},
                            BranchChoice{true, true}}) {
      const auto flipped = analytic::match_scatter(E, ref, Side::Left, {}, br);
      CHECK(std::abs(flipped.R - base.R) < 1e-10);
      CHECK(std::abs(flipped.T - base.T) < 1e-10);
    }
  }
}

TEST_CASE("coefficients stay finite with a bounded condition number") {
  for (double mu2 : {0.0, 1.0, 5.0}) {
    const DeviceParams p = ref.with_mu2(mu2);
    for (double E : grid(p.V0() + 0.01, 100.0, 60)) {
      const auto L = analytic::match_scatter(E, p, Side::Left);
      CHECK(std::isfinite(std::norm(L.T)));
      CHECK(std::isfinite(std::norm(L.R)));
      CHECK(L.condition_estimate < 1e10);
    }
  }
}

TEST_CASE("energies at or below the exterior floor are rejected for scattering") {
  CHECK_THROWS_AS(analytic::match_scatter(ref.V0(), ref, Side::Left), NumericalError);
  CHECK_THROWS_AS(analytic::match_scatter(-1.0, ref, Side::Right), NumericalError);
}

TEST_CASE("scattering profile is continuous and plane-wave outside") {
  const auto res = analytic::match_scatter(44.0, ref, Side::Left);
  const double a0 = ref.a0(), eps = 1e-9;
  const std::vector<double> zs{-a0 - eps, -a0 + eps, a0 - eps, a0 + eps, 6.0, 8.0, 11.0};
  const auto s = analytic::profile(res, ref, zs);
  REQUIRE(s.size() == zs.size());
  for (int j : {0, 2}) {
    CHECK(std::abs(s[j].psi - s[j + 1].psi) < 1e-8 * std::max(1.0, std::abs(s[j].psi)));
    CHECK(std::abs(s[j].v - s[j + 1].v) < 1e-6 * std::max(1.0, std::abs(s[j].v)));
  }
  for (int j : {4, 5, 6}) CHECK(std::abs(s[j].psi) == doctest::Approx(std::abs(res.T)).epsilon(1e-12));
}

TEST_CASE("bound states at the reference device") {
  const auto search = analytic::find_bound_states(ref);
  REQUIRE(search.states.size() == 2);
  CHECK(search.states[0].E == doctest::Approx(-2.6623587136).epsilon(1e-9));
  CHECK(search.states[1].E == doctest::Approx(-0.9762236784).epsilon(1e-9));
  for (const auto& st : search.states) {
    CHECK(std::abs(st.imag_E) < 1e-8);
    CHECK(st.E > -ref.mu1());  // nothing below the well bottom
    CHECK(std::abs(analytic::bound_det(st.E, ref)) < 1e-8);
  }
}

TEST_CASE("doubling the scan resolution keeps the same states") {
  const auto a = analytic::find_bound_states(ref, {}, 1000);
  const auto b = analytic::find_bound_states(ref, {}, 2000);
  const auto c = analytic::find_bound_states(ref, {}, 4000);
  REQUIRE(a.states.size() == b.states.size());
  REQUIRE(b.states.size() == c.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK(a.states[i].E == doctest::Approx(c.states[i].E).epsilon(1e-10));
  }
}

TEST_CASE("Hermitian bound states agree with shooting") {
  const DeviceParams p = ref.with_mu2(0.0);
  const auto search = analytic::find_bound_states(p);
  REQUIRE(search.states.size() == 2);
  CHECK(search.states[0].E == doctest::Approx(-2.67038).epsilon(1e-5));
  CHECK(search.states[1].E == doctest::Approx(-0.98848).epsilon(1e-5));
  for (const auto& st : search.states) {
    const double shot = oracle::bound_numeric(p, {st.E - 0.05, std::min(st.E + 0.05, p.V0() - 1e-6)});
    CHECK(std::abs(shot - st.E) < 1e-6);
  }
}

TEST_CASE("determinant is large far below the well") {
  const analytic::BoundDeterminant det(ref);
  for (double E : {-50.0, -30.0, -20.0}) CHECK(std::abs(det(cplx(E))) > 1.0);
}

TEST_CASE("complex roots of the determinant come in conjugate pairs") {
  const DeviceParams p = ref.with_mu2(5.5);
  const analytic::BoundDeterminant det(p);
  auto f = [&](cplx E) { return det(E); };
  const cplx seed(-0.2, 0.03);
  const auto up = roots::muller(f, seed, seed + 0.01, seed + cplx(0, 0.01), 1e-10, 1e-14, 100);
  const auto dn = roots::muller(f, std::conj(seed), std::conj(seed) + 0.01,
                                std::conj(seed) - cplx(0, 0.01), 1e-10, 1e-14, 100);
  REQUIRE(up.converged);
  REQUIRE(dn.converged);
  CHECK(std::abs(up.root.imag()) > 1e-3);
  CHECK(std::abs(up.root - std::conj(dn.root)) < 1e-10);
}

TEST_CASE("bound-state profile decays with the exterior constant") {
  const auto search = analytic::find_bound_states(ref);
  REQUIRE(!search.states.empty());
  for (const auto& st : search.states) {
    const double a0 = ref.a0();
    const auto zs = grid(a0 + 1.0, a0 + 4.0, 31);
    const auto s = analytic::profile(st, ref, zs);
    const double slope = (std::log(std::abs(s.back().psi)) - std::log(std::abs(s.front().psi))) /
                         (zs.back() - zs.front());
    CHECK(-slope == doctest::Approx(st.k_b).epsilon(0.01));

    const auto full = analytic::profile(st, ref, grid(-a0 - 4, a0 + 4, 801));
    double peak = 0.0;
    for (const auto& w : full) peak = std::max(peak, std::abs(w.psi));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
    // PT symmetry: |psi(-z)| = |psi(z)|
    CHECK(std::abs(full.front().psi) == doctest::Approx(std::abs(full.back().psi)).epsilon(1e-6));
  }
}

TEST_CASE("switching scan starts at the ground state and is continuous") {
  const auto g1 = grid(0.3, 8.0, 78);
  const auto g2 = grid(0.3, 8.0, 155);
  const auto s1 = analytic::switching_scan(ref, g1);
  const auto s2 = analytic::switching_scan(ref, g2);
  REQUIRE(!s1.lost);
  REQUIRE(!s2.lost);
  const auto ground = analytic::find_bound_states(ref).states.front().E;
  CHECK(s1.points.front().E0.real() == doctest::Approx(ground).epsilon(1e-10));

  auto max_jump = [](const analytic::SwitchScan& s) {
    double m = 0.0;
    for (std::size_t i = 1; i < s.points.size(); ++i)
      m = std::max(m, std::abs(s.points[i].E0 - s.points[i - 1].E0));
    return m;
  };
  CHECK(max_jump(s2) < max_jump(s1));
  REQUIRE(s1.crossing_mu2);
  REQUIRE(s2.crossing_mu2);
  CHECK(*s1.crossing_mu2 == doctest::Approx(*s2.crossing_mu2).epsilon(1e-3));
  CHECK(s1.points.front().regime == analytic::Regime::Bound);
  CHECK(s1.points.back().regime == analytic::Regime::Resonance);
}

TEST_CASE("profile of an oracle result is refused") {
  const auto res = oracle::scatter_numeric(5.0, ref, Side::Left);
  const std::vector<double> zs{0.0};
  CHECK_THROWS_AS(analytic::profile(res, ref, zs), NumericalError);
}
