#pragma once

#include <complex>

#include "pdem/config.hpp"

namespace pdem::specfun {

using cplx = std::complex<double>;

struct Hyp2F1Params {
  cplx a;
  cplx b;
  cplx c;
  cplx y;
};

/// Gauss hypergeometric function 2F1(a, b; c; y) by forward Maclaurin
/// summation. Only valid inside |y| <= cfg.max_abs_y.
///
/// Throws NumericalError with kind DomainError, PoleAtC or NonConvergence.
cplx hyp2f1(const Hyp2F1Params& p, const SeriesConfig& cfg = {});

/// d/dy 2F1(a, b; c; y) = (ab/c) 2F1(a+1, b+1; c+1; y).
cplx hyp2f1_deriv(const Hyp2F1Params& p, const SeriesConfig& cfg = {});

/// Value and derivative together; shares the argument checks.
struct Hyp2F1Value {
  cplx value;
  cplx deriv;
};
Hyp2F1Value hyp2f1_with_deriv(const Hyp2F1Params& p, const SeriesConfig& cfg = {});

}  // namespace pdem::specfun
