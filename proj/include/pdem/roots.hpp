#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace pdem::roots {

using cplx = std::complex<double>;

struct MullerResult {
  cplx root;
  cplx value;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Muller iteration on a holomorphic function from three distinct seeds.
/// Iterates until the step drops below x_tol * (1 + |x|) or max_iter is
/// reached; converged means |f| <= f_tol at that point. Exceptions thrown
/// by f propagate.
MullerResult muller(const std::function<cplx(cplx)>& f, cplx x0, cplx x1, cplx x2,
                    double f_tol, double x_tol, std::size_t max_iter);

struct BracketResult {
  double root;
  double value;
  std::size_t iterations = 0;
};

/// Safeguarded secant on a sign-changing bracket: each iterate is the secant
/// point when it falls inside the bracket and shrinks it fast enough,
/// otherwise the midpoint. Throws NumericalError(NoSignChange) if f(lo) and
/// f(hi) have the same sign.
BracketResult bisect_secant(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol, std::size_t max_iter = 200);

}  // namespace pdem::roots
