#include "pdem/specfun.hpp"

#include <cmath>
#include <string>

#include "pdem/error.hpp"

namespace pdem::specfun {

namespace {

bool near_nonpositive_integer(cplx c, double tol) {
  const double n = std::round(c.real());
  return n <= 0.0 && std::abs(c - cplx(n, 0.0)) < tol;
}

void check_args(const Hyp2F1Params& p, const SeriesConfig& cfg) {
  if (!(std::abs(p.y) <= cfg.max_abs_y)) {
    throw NumericalError(ErrorKind::DomainError,
                         "|y| = " + std::to_string(std::abs(p.y)) + " exceeds series radius limit");
  }
  if (near_nonpositive_integer(p.c, cfg.pole_tol)) {
    throw NumericalError(ErrorKind::PoleAtC, "c is a nonpositive integer");
  }
}

cplx sum_series(cplx a, cplx b, cplx c, cplx y, const SeriesConfig& cfg) {
  cplx term{1.0, 0.0};
  cplx sum{1.0, 0.0};
  if (y == cplx{}) return sum;

  int quiet = 0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * y;
    sum += term;
    if (std::abs(term) <= cfg.stop_ratio * std::abs(sum)) {
      if (++quiet == 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw NumericalError(ErrorKind::NonConvergence,
                       "series did not converge in " + std::to_string(cfg.max_terms) + " terms");
}

}  // namespace

cplx hyp2f1(const Hyp2F1Params& p, const SeriesConfig& cfg) {
  check_args(p, cfg);
  return sum_series(p.a, p.b, p.c, p.y, cfg);
}

cplx hyp2f1_deriv(const Hyp2F1Params& p, const SeriesConfig& cfg) {
  check_args(p, cfg);
  if (near_nonpositive_integer(p.c + 1.0, cfg.pole_tol)) {
    throw NumericalError(ErrorKind::PoleAtC, "c + 1 is a nonpositive integer");
  }
  return p.a * p.b / p.c * sum_series(p.a + 1.0, p.b + 1.0, p.c + 1.0, p.y, cfg);
}

Hyp2F1Value hyp2f1_with_deriv(const Hyp2F1Params& p, const SeriesConfig& cfg) {
  return {hyp2f1(p, cfg), hyp2f1_deriv(p, cfg)};
}

}  // namespace pdem::specfun
